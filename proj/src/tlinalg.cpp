#include "ttlr/tlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ttlr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

MatrixXcd thin_q(const Eigen::HouseholderQR<MatrixXcd>& qr, int rows, int k) {
  return qr.householderQ() * MatrixXcd::Identity(rows, k);
}

/// Moore-Penrose inverse of one Fourier slice with the standard cutoff.
MatrixXcd slice_pinv(const MatrixXcd& a) {
  if (a.rows() == 0 || a.cols() == 0) return MatrixXcd::Zero(a.cols(), a.rows());
  Eigen::BDCSVD<MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cut = std::max(a.rows(), a.cols()) * kEps * (s.size() ? s(0) : 0.0);
  VectorXd inv = VectorXd::Zero(s.size());
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace

QrFactors t_qr(const Tensor3& x) {
  const Dims d = x.dims();
  const int m = std::min(d.i1, d.i2);
  FourierTensor xf = fft_mode3(x);
  FourierTensor qf({d.i1, m, d.i3}), rf({m, d.i2, d.i3});
  for (int i = 0; i < xf.half_count(); ++i) {
    Eigen::HouseholderQR<MatrixXcd> qr(xf.half(i));
    qf.half(i) = thin_q(qr, d.i1, m);
    rf.half(i) = qr.matrixQR()
                     .topRows(m)
                     .template triangularView<Eigen::Upper>()
                     .toDenseMatrix();
  }
  return {ifft_mode3(qf), ifft_mode3(rf)};
}

Tensor3 orth(const Tensor3& x) {
  const Dims d = x.dims();
  const int m = std::min(d.i1, d.i2);
  if (m == 0 || d.i3 == 0) return Tensor3(d.i1, 0, d.i3);

  FourierTensor xf = fft_mode3(x);
  std::vector<MatrixXcd> qs(xf.half_count());
  VectorXd diag_max = VectorXd::Zero(m);
  for (int i = 0; i < xf.half_count(); ++i) {
    Eigen::HouseholderQR<MatrixXcd> qr(xf.half(i));
    qs[i] = thin_q(qr, d.i1, m);
    for (int j = 0; j < m; ++j)
      diag_max(j) = std::max(diag_max(j), std::abs(qr.matrixQR()(j, j)));
  }

  const double top = diag_max.maxCoeff();
  const double cut = std::max(d.i1, d.i2) * kEps * top;
  std::vector<int> keep;
  for (int j = 0; j < m; ++j)
    if (top > 0.0 && diag_max(j) > cut) keep.push_back(j);
  if (keep.empty()) return Tensor3(d.i1, 0, d.i3);

  FourierTensor qf({d.i1, static_cast<int>(keep.size()), d.i3});
  for (int i = 0; i < qf.half_count(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      qf.half(i).col(static_cast<int>(j)) = qs[i].col(keep[j]);
  return ifft_mode3(qf);
}

namespace {

TsvdFactors tsvd_impl(const Tensor3& x, int rank) {
  const Dims d = x.dims();
  const int m = std::min(d.i1, d.i2);
  const int k = std::min(rank, m);
  FourierTensor xf = fft_mode3(x);
  FourierTensor uf({d.i1, k, d.i3}), sf({k, k, d.i3}), vf({d.i2, k, d.i3});
  for (int i = 0; i < xf.half_count(); ++i) {
    Eigen::BDCSVD<MatrixXcd> svd(xf.half(i), Eigen::ComputeThinU | Eigen::ComputeThinV);
    uf.half(i) = svd.matrixU().leftCols(k);
    vf.half(i) = svd.matrixV().leftCols(k);
    sf.half(i) = svd.singularValues().head(k).cast<std::complex<double>>().asDiagonal();
  }
  return {ifft_mode3(uf), ifft_mode3(sf), ifft_mode3(vf), k};
}

}  // namespace

TsvdFactors t_svd(const Tensor3& x) {
  return tsvd_impl(x, std::min(x.rows(), x.cols()));
}

TsvdFactors t_svd_truncated(const Tensor3& x, int R) {
  if (R < 1 || R > std::min(x.rows(), x.cols()))
    throw RankOutOfRange("t_svd_truncated: R outside [1, min(I1,I2)]");
  return tsvd_impl(x, R);
}

std::pair<Tensor3, Tensor3> t_lu(const Tensor3& x) {
  const Dims d = x.dims();
  const int m = std::min(d.i1, d.i2);
  FourierTensor xf = fft_mode3(x);
  FourierTensor lf({d.i1, m, d.i3}), uf({m, d.i2, d.i3});

  for (int s = 0; s < xf.half_count(); ++s) {
    MatrixXcd a = xf.half(s);
    std::vector<int> perm(d.i1);
    for (int i = 0; i < d.i1; ++i) perm[i] = i;

    for (int c = 0; c < m; ++c) {
      int p = c;
      for (int r = c + 1; r < d.i1; ++r)
        if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
      if (std::abs(a(p, c)) == 0.0)
        throw SingularSlice("t_lu: exactly singular Fourier slice");
      if (p != c) {
        a.row(p).swap(a.row(c));
        std::swap(perm[p], perm[c]);
      }
      for (int r = c + 1; r < d.i1; ++r) {
        a(r, c) /= a(c, c);
        if (c + 1 < d.i2)
          a.row(r).tail(d.i2 - c - 1) -= a(r, c) * a.row(c).tail(d.i2 - c - 1);
      }
    }

    // fold the permutation back into L
    MatrixXcd l = MatrixXcd::Zero(d.i1, m);
    for (int r = 0; r < d.i1; ++r) {
      for (int c = 0; c < std::min(r, m); ++c) l(r, c) = a(r, c);
      if (r < m) l(r, r) = 1.0;
    }
    for (int r = 0; r < d.i1; ++r) lf.half(s).row(perm[r]) = l.row(r);
    uf.half(s) = a.topRows(m).template triangularView<Eigen::Upper>().toDenseMatrix();
  }
  return {ifft_mode3(lf), ifft_mode3(uf)};
}

EigFactors t_eig(const Tensor3& x) {
  const Dims d = x.dims();
  if (d.i1 != d.i2) throw NotSymmetric("t_eig: tensor is not square");
  const double nx = fro_norm(x);
  if (fro_norm(sub(x, t_transpose(x))) > 1e-10 * std::max(nx, 1e-300))
    throw NotSymmetric("t_eig: tensor is not symmetric");

  FourierTensor xf = fft_mode3(x);
  FourierTensor vf(d), df(d);
  for (int i = 0; i < xf.half_count(); ++i) {
    MatrixXcd h = 0.5 * (xf.half(i) + xf.half(i).adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(h);
    vf.half(i) = eig.eigenvectors();  // eigenvalues ascending
    df.half(i) = eig.eigenvalues().cast<std::complex<double>>().asDiagonal();
  }
  return {ifft_mode3(vf), ifft_mode3(df)};
}

Tensor3 fdiag_sqrt(const Tensor3& d) {
  const Dims dd = d.dims();
  const int m = std::min(dd.i1, dd.i2);
  const int nh = FourierTensor::half_count(dd.i3);

  // spectra of the diagonal tubes
  std::vector<VectorXcd> tubes(m);
  double peak = 0.0;
  {
    Tensor3 diag(m, 1, dd.i3);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < dd.i3; ++k) diag(i, 0, k) = d(i, i, k);
    }
    FourierTensor df = fft_mode3(diag);
    for (int i = 0; i < m; ++i) {
      tubes[i].resize(nh);
      for (int k = 0; k < nh; ++k) {
        tubes[i](k) = df.half(k)(i, 0);
        peak = std::max(peak, std::abs(tubes[i](k)));
      }
    }
  }

  FourierTensor rf({dd.i1, dd.i2, dd.i3});
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < nh; ++k) {
      std::complex<double> z = tubes[i](k);
      if (z.real() < 0.0 && std::abs(z.imag()) <= 1e-6 * peak) {
        if (z.real() < -1e-6 * peak)
          throw NegativeSpectrum("fdiag_sqrt: negative Fourier diagonal value");
        z = 0.0;
      }
      rf.half(k)(i, i) = std::sqrt(z);
    }
  }
  return ifft_mode3(rf);
}

Tensor3 t_pinv(const Tensor3& x) {
  const Dims d = x.dims();
  FourierTensor xf = fft_mode3(x);
  FourierTensor pf({d.i2, d.i1, d.i3});
  for (int i = 0; i < xf.half_count(); ++i) pf.half(i) = slice_pinv(xf.half(i));
  return ifft_mode3(pf);
}

Tensor3 t_inv(const Tensor3& x) {
  const Dims d = x.dims();
  if (d.i1 != d.i2) throw DimMismatch("t_inv: tensor is not square");
  FourierTensor xf = fft_mode3(x);
  FourierTensor rf(d);
  for (int i = 0; i < xf.half_count(); ++i) {
    Eigen::BDCSVD<MatrixXcd> svd(xf.half(i), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > 1.0 / (100.0 * kEps))
      throw SingularTensor("t_inv: Fourier slice is singular or near-singular");
    rf.half(i) = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  }
  return ifft_mode3(rf);
}

int tubal_rank(const Tensor3& x, double tol) {
  if (tol < 0.0) throw std::invalid_argument("tubal_rank: tol must be >= 0");
  if (x.empty() || fro_norm(x) == 0.0) return 0;
  TsvdFactors f = t_svd(x);
  const int m = f.k;
  VectorXd tube_norm(m);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int k = 0; k < x.depth(); ++k) acc += f.S(i, i, k) * f.S(i, i, k);
    tube_norm(i) = std::sqrt(acc);
  }
  const double top = tube_norm.maxCoeff();
  int count = 0;
  for (int i = 0; i < m; ++i)
    if (tube_norm(i) > tol * top) ++count;
  return count;
}

double trace_first_slice(const Tensor3& x) {
  if (x.rows() != x.cols()) throw DimMismatch("trace_first_slice: tensor is not square");
  if (x.empty()) return 0.0;
  return x.slice(0).trace();
}

Tensor3 reconstruct(const TsvdFactors& f) {
  if (f.U.cols() == 0)
    return Tensor3(f.U.rows(), f.V.rows(), f.U.depth());
  return t_product(t_product(f.U, f.S), t_transpose(f.V));
}

Tensor3 reconstruct(const QbFactors& f) {
  if (f.Q.cols() == 0) return Tensor3(f.Q.rows(), f.B.cols(), f.Q.depth());
  return t_product(f.Q, f.B);
}

}  // namespace ttlr
