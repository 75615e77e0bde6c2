#include "ttlr/fixed_precision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ttlr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct CheckedConfig {
  double eps;
  int block;
  int q;
  int max_rank;
};

CheckedConfig check_config(const Dims& d, const FixedPrecisionConfig& cfg) {
  if (cfg.eps <= 0.0) throw std::invalid_argument("FixedPrecisionConfig: eps must be > 0");
  if (cfg.block < 1) throw std::invalid_argument("FixedPrecisionConfig: block must be >= 1");
  const int m = std::min(d.i1, d.i2);
  int cap = cfg.max_rank <= 0 ? m : std::min(cfg.max_rank, m);
  return {cfg.eps, cfg.block, cfg.power_or_passes, cap};
}

/// Inverse of a symmetric positive (semi)definite Gram tensor. strict mode
/// throws when the spectrum is too close to singular to invert; otherwise
/// near-zero eigenvalues are dropped (pseudoinverse) so the iteration can
/// keep running on an overshooting sketch.
Tensor3 gram_inverse(const Tensor3& z, bool strict) {
  const Dims d = z.dims();
  if (d.i1 != d.i2) throw DimMismatch("gram_inverse: tensor is not square");
  FourierTensor zf = fft_mode3(z);
  std::vector<Eigen::SelfAdjointEigenSolver<MatrixXcd>> eigs;
  eigs.reserve(zf.half_count());
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < zf.half_count(); ++i) {
    MatrixXcd h = 0.5 * (zf.half(i) + zf.half(i).adjoint());
    eigs.emplace_back(h);
    lo = std::min(lo, eigs.back().eigenvalues().minCoeff());
    hi = std::max(hi, eigs.back().eigenvalues().maxCoeff());
  }
  const double cut = 100.0 * kEps * hi;
  if (strict && lo < cut)
    throw IllConditionedGram("gram_inverse: near-dependent sketch columns");
  FourierTensor rf(d);
  for (int i = 0; i < zf.half_count(); ++i) {
    const auto& e = eigs[i];
    VectorXd inv = VectorXd::Zero(e.eigenvalues().size());
    for (int j = 0; j < inv.size(); ++j)
      if (e.eigenvalues()(j) > cut) inv(j) = 1.0 / e.eigenvalues()(j);
    rf.half(i) = e.eigenvectors() * inv.asDiagonal() * e.eigenvectors().adjoint();
  }
  return ifft_mode3(rf);
}

Tensor3 project_out(const Tensor3& v, const Tensor3& q, const Tensor3& b,
                    const Tensor3& w) {
  // v - q*(b*w); no-op while the accumulated basis is empty
  if (q.cols() == 0) return v;
  return sub(v, t_product(q, t_product(b, w)));
}

/// Orthonormalizes v against the accumulated basis q. Projected twice: one
/// Gram-Schmidt sweep is not enough when v lies almost entirely in span(q).
Tensor3 reorth_against(Tensor3 v, const Tensor3& q) {
  if (q.cols() == 0) return orth(v);
  for (int sweep = 0; sweep < 2; ++sweep)
    v = orth(sub(v, t_product(q, t_product(t_transpose(q), v))));
  return v;
}

}  // namespace

QbFactors alg9_fixed_precision(const CountedTensor& x, const FixedPrecisionConfig& cfg) {
  const Dims d = x.dims();
  const CheckedConfig c = check_config(d, cfg);
  std::mt19937_64 rng(cfg.seed);

  QbFactors f;
  f.Q = Tensor3(d.i1, 0, d.i3);
  f.B = Tensor3(0, d.i2, d.i3);
  const double normX2 = x.fro_norm() * x.fro_norm();
  double energy = normX2;
  const double tol = c.eps * c.eps;
  if (energy < tol) return f;

  while (true) {
    const int b = std::min(c.block, c.max_rank - f.k);
    Tensor3 omega = gauss_tensor(d.i2, b, d.i3, GaussKind::Full, rng);
    Tensor3 qi = orth(project_out(x.times(omega), f.Q, f.B, omega));

    for (int j = 0; j < c.q; ++j) {
      // X^T*Qi - B^T*(Q^T*Qi), then X*Qi - Q*(B*Qi)
      Tensor3 t = x.transpose_times(qi);
      if (f.k > 0)
        t = sub(t, t_product(t_transpose(f.B), t_product(t_transpose(f.Q), qi)));
      qi = orth(t);
      qi = orth(project_out(x.times(qi), f.Q, f.B, qi));
    }

    qi = reorth_against(std::move(qi), f.Q);
    if (qi.cols() == 0) {
      f.rank_capped = energy >= tol;
      break;
    }
    Tensor3 bi = t_transpose(x.transpose_times(qi));
    f.Q = concat(f.Q, qi, 2);
    f.B = concat(f.B, bi, 1);
    f.k = f.Q.cols();
    energy -= fro_norm(bi) * fro_norm(bi);
    if (energy < tol) break;
    if (f.k >= c.max_rank) {
      f.rank_capped = true;
      break;
    }
  }
  return f;
}

QbFactors alg10_fixed_precision(const CountedTensor& x, const FixedPrecisionConfig& cfg) {
  const Dims d = x.dims();
  const CheckedConfig c = check_config(d, cfg);
  if (c.q <= 2)
    throw std::invalid_argument("alg10_fixed_precision: pass count q must be > 2");
  std::mt19937_64 rng(cfg.seed);

  const bool even = c.q % 2 == 0;
  // pass budget per block: q. Even q spends one pass on the initial sketch,
  // odd q starts from a random basis; each inner round costs two passes and
  // the trailing B_l product one.
  const int rounds = even ? (c.q - 2) / 2 : (c.q - 1) / 2;

  QbFactors f;
  f.Q = Tensor3(d.i1, 0, d.i3);
  f.B = Tensor3(0, d.i2, d.i3);
  const double normX2 = x.fro_norm() * x.fro_norm();
  double energy = normX2;
  const double tol = c.eps * c.eps;
  if (energy < tol) return f;

  while (true) {
    const int b = std::min(c.block, c.max_rank - f.k);
    Tensor3 ql;
    if (even) {
      Tensor3 omega = gauss_tensor(d.i2, b, d.i3, GaussKind::Full, rng);
      Tensor3 y = project_out(x.times(omega), f.Q, f.B, omega);
      if (fro_norm(y) == 0.0) {
        f.rank_capped = energy >= tol;
        break;
      }
      ql = t_lu(y).first;
    } else {
      ql = gauss_tensor(d.i1, b, d.i3, GaussKind::Full, rng);
    }

    for (int t = 1; t <= rounds; ++t) {
      if (t == rounds) {
        Tensor3 r = x.transpose_times(ql);
        ql = orth(project_out(x.times(r), f.Q, f.B, r));
      } else {
        ql = t_lu(x.times(x.transpose_times(ql))).first;
      }
    }

    ql = reorth_against(std::move(ql), f.Q);
    if (ql.cols() == 0) {
      f.rank_capped = energy >= tol;
      break;
    }
    Tensor3 bl = t_transpose(x.transpose_times(ql));
    f.Q = concat(f.Q, ql, 2);
    f.B = concat(f.B, bl, 1);
    f.k = f.Q.cols();
    energy -= fro_norm(bl) * fro_norm(bl);
    if (energy < tol) break;
    if (f.k >= c.max_rank) {
      f.rank_capped = true;
      break;
    }
  }
  return f;
}

QbFactors alg11_fixed_precision(const CountedTensor& x, const FixedPrecisionConfig& cfg) {
  const Dims d = x.dims();
  const CheckedConfig c = check_config(d, cfg);
  std::mt19937_64 rng(cfg.seed);

  Tensor3 y(d.i1, 0, d.i3), w(d.i2, 0, d.i3), z, t;
  const double normX2 = x.fro_norm() * x.fro_norm();
  const double tol = c.eps * c.eps;
  bool capped = false;
  int k = 0;

  if (normX2 >= tol) {
    while (true) {
      const int b = std::min(c.block, c.max_rank - k);
      Tensor3 omega = gauss_tensor(d.i2, b, d.i3, GaussKind::Full, rng);

      for (int j = 0; j < c.q; ++j) {
        // W_i = X^T*X*Omega_i - W*Z^{-1}*W^T*Omega_i
        Tensor3 wi = x.transpose_times(x.times(omega));
        if (k > 0) {
          Tensor3 zi = gram_inverse(z, false);
          wi = sub(wi, t_product(w, t_product(zi, t_product(t_transpose(w), omega))));
        }
        omega = orth(wi);
      }
      if (omega.cols() == 0) {
        capped = true;
        break;
      }

      Tensor3 yi = x.times(omega);
      Tensor3 wi = x.transpose_times(yi);
      // grow the Gram tensors incrementally: [[Z, C], [C^T, D]]
      if (k == 0) {
        z = t_product(t_transpose(yi), yi);
        t = t_product(t_transpose(wi), wi);
      } else {
        Tensor3 cy = t_product(t_transpose(y), yi);
        Tensor3 cw = t_product(t_transpose(w), wi);
        z = concat(concat(z, cy, 2),
                   concat(t_transpose(cy), t_product(t_transpose(yi), yi), 2), 1);
        t = concat(concat(t, cw, 2),
                   concat(t_transpose(cw), t_product(t_transpose(wi), wi), 2), 1);
      }
      y = concat(y, yi, 2);
      w = concat(w, wi, 2);
      k = y.cols();

      const double est = normX2 - trace_first_slice(t_product(t, gram_inverse(z, false)));
      if (est < tol) break;
      if (k >= c.max_rank) {
        capped = true;
        break;
      }
    }
  }

  QbFactors f;
  f.rank_capped = capped;
  if (k == 0) {
    f.Q = Tensor3(d.i1, 0, d.i3);
    f.B = Tensor3(0, d.i2, d.i3);
    return f;
  }

  // finalize from the Gram spectrum, reading factors from the tail of the
  // ascending eigendecomposition; columns below the clamp threshold are
  // dropped to keep 1/sqrt bounded
  FourierTensor zf = fft_mode3(z);
  std::vector<Eigen::SelfAdjointEigenSolver<MatrixXcd>> eigs;
  eigs.reserve(zf.half_count());
  double hi = 0.0;
  for (int i = 0; i < zf.half_count(); ++i) {
    eigs.emplace_back(MatrixXcd(0.5 * (zf.half(i) + zf.half(i).adjoint())));
    hi = std::max(hi, eigs.back().eigenvalues().maxCoeff());
  }
  int drop = 0;
  for (const auto& e : eigs) {
    int di = 0;
    while (di < k && e.eigenvalues()(di) < 100.0 * kEps * hi) ++di;
    drop = std::max(drop, di);
  }
  const int keep = k - drop;
  if (keep == 0) {
    f.Q = Tensor3(d.i1, 0, d.i3);
    f.B = Tensor3(0, d.i2, d.i3);
    return f;
  }

  FourierTensor mf({k, keep, d.i3});
  for (int i = 0; i < zf.half_count(); ++i) {
    const auto& e = eigs[i];
    for (int j = 0; j < keep; ++j) {
      const int col = k - keep + j;
      const double lambda = std::max(e.eigenvalues()(col), 100.0 * kEps * hi);
      mf.half(i).col(j) = e.eigenvectors().col(col) / std::sqrt(lambda);
    }
  }
  Tensor3 m = ifft_mode3(mf);
  f.Q = t_product(y, m);
  f.B = t_transpose(t_product(w, m));
  f.k = keep;
  return f;
}

QbFactors alg9_fixed_precision(const Tensor3& x, const FixedPrecisionConfig& cfg) {
  return alg9_fixed_precision(CountedTensor(x), cfg);
}
QbFactors alg10_fixed_precision(const Tensor3& x, const FixedPrecisionConfig& cfg) {
  return alg10_fixed_precision(CountedTensor(x), cfg);
}
QbFactors alg11_fixed_precision(const Tensor3& x, const FixedPrecisionConfig& cfg) {
  return alg11_fixed_precision(CountedTensor(x), cfg);
}

double residual_estimate(const Tensor3& y, const Tensor3& w, double normX2) {
  Tensor3 z = t_product(t_transpose(y), y);
  Tensor3 t = t_product(t_transpose(w), w);
  return normX2 - trace_first_slice(t_product(t, gram_inverse(z, true)));
}

TsvdFactors truncate_qb(const QbFactors& f, double eps) {
  const Dims db = f.B.dims();
  if (f.k == 0 || f.Q.cols() == 0) {
    return {Tensor3(f.Q.rows(), 0, f.Q.depth()), Tensor3(0, 0, f.Q.depth()),
            Tensor3(db.i2, 0, f.Q.depth()), 0};
  }

  const int m = std::min(db.i1, db.i2);
  FourierTensor bf = fft_mode3(f.B);
  std::vector<Eigen::BDCSVD<MatrixXcd>> svds;
  svds.reserve(bf.half_count());
  for (int i = 0; i < bf.half_count(); ++i)
    svds.emplace_back(bf.half(i), Eigen::ComputeThinU | Eigen::ComputeThinV);

  // Parseval tail energy of the discarded singular values
  VectorXd tail = VectorXd::Zero(m + 1);
  for (int i = 0; i < bf.half_count(); ++i) {
    const double wgt = bf.pair_weight(i) / db.i3;
    const auto& s = svds[i].singularValues();
    for (int j = m - 1; j >= 0; --j) tail(j) = tail(j) + wgt * s(j) * s(j);
  }
  for (int j = m - 1; j >= 0; --j) tail(j) += tail(j + 1);

  int r = m;
  if (eps > 0.0) {
    while (r > 0 && tail(r - 1) <= eps * eps) --r;
  }
  if (r == 0)
    return {Tensor3(f.Q.rows(), 0, f.Q.depth()), Tensor3(0, 0, f.Q.depth()),
            Tensor3(db.i2, 0, f.Q.depth()), 0};

  FourierTensor uf({db.i1, r, db.i3}), sf({r, r, db.i3}), vf({db.i2, r, db.i3});
  for (int i = 0; i < bf.half_count(); ++i) {
    uf.half(i) = svds[i].matrixU().leftCols(r);
    vf.half(i) = svds[i].matrixV().leftCols(r);
    sf.half(i) = svds[i].singularValues().head(r).cast<std::complex<double>>().asDiagonal();
  }
  return {t_product(f.Q, ifft_mode3(uf)), ifft_mode3(sf), ifft_mode3(vf), r};
}

}  // namespace ttlr
