#include "ttlr/tensor_ops.hpp"

#include <algorithm>
#include <cmath>

namespace ttlr {

Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
  return t_product_f(fft_mode3(a), b, false);
}

Tensor3 t_product_f(const FourierTensor& af, const Tensor3& b, bool adjoint) {
  const Dims da = af.dims();
  const Dims db = b.dims();
  const int inner = adjoint ? da.i1 : da.i2;
  const int outer = adjoint ? da.i2 : da.i1;
  if (inner != db.i1 || da.i3 != db.i3)
    throw DimMismatch("t_product: inner or mode-3 dimensions differ");

  FourierTensor bf = fft_mode3(b);
  FourierTensor cf({outer, db.i2, da.i3});
  for (int i = 0; i < cf.half_count(); ++i) {
    if (adjoint)
      cf.half(i).noalias() = af.half(i).adjoint() * bf.half(i);
    else
      cf.half(i).noalias() = af.half(i) * bf.half(i);
  }
  return ifft_mode3(cf);
}

Tensor3 t_transpose(const Tensor3& x) {
  const Dims d = x.dims();
  Tensor3 out(d.i2, d.i1, d.i3);
  if (x.empty()) return out;
  out.slice(0) = x.slice(0).transpose();
  for (int k = 1; k < d.i3; ++k) out.slice(d.i3 - k) = x.slice(k).transpose();
  return out;
}

Tensor3 identity_tensor(int i1, int i3) {
  if (i1 < 1 || i3 < 1) throw DimMismatch("identity_tensor: dims must be >= 1");
  Tensor3 out(i1, i1, i3);
  out.slice(0) = MatrixXd::Identity(i1, i1);
  return out;
}

Tensor3 concat(const Tensor3& a, const Tensor3& b, int mode) {
  if (mode != 1 && mode != 2) throw DimMismatch("concat: mode must be 1 or 2");
  if (a.empty()) return b;
  if (b.empty()) return a;
  const Dims da = a.dims(), db = b.dims();
  if (da.i3 != db.i3 || (mode == 1 ? da.i2 != db.i2 : da.i1 != db.i1))
    throw DimMismatch("concat: non-concatenated dims differ");

  if (mode == 1) {
    Tensor3 out(da.i1 + db.i1, da.i2, da.i3);
    for (int k = 0; k < da.i3; ++k) {
      out.slice(k).topRows(da.i1) = a.slice(k);
      out.slice(k).bottomRows(db.i1) = b.slice(k);
    }
    return out;
  }
  Tensor3 out(da.i1, da.i2 + db.i2, da.i3);
  for (int k = 0; k < da.i3; ++k) {
    out.slice(k).leftCols(da.i2) = a.slice(k);
    out.slice(k).rightCols(db.i2) = b.slice(k);
  }
  return out;
}

double fro_norm(const Tensor3& x) {
  double acc = 0.0;
  for (double v : x.values()) acc += v * v;
  return std::sqrt(acc);
}

Tensor3 hadamard(const Tensor3& a, const Tensor3& b) {
  if (!(a.dims() == b.dims())) throw DimMismatch("hadamard: dims differ");
  Tensor3 out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] *= b.values()[i];
  return out;
}

Tensor3 add(const Tensor3& a, const Tensor3& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (!(a.dims() == b.dims())) throw DimMismatch("add: dims differ");
  Tensor3 out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] += b.values()[i];
  return out;
}

Tensor3 sub(const Tensor3& a, const Tensor3& b) {
  if (b.empty()) return a;
  if (!(a.dims() == b.dims())) throw DimMismatch("sub: dims differ");
  Tensor3 out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] -= b.values()[i];
  return out;
}

Tensor3 scale(const Tensor3& a, double s) {
  Tensor3 out = a;
  for (double& v : out.values()) v *= s;
  return out;
}

Tensor3 lateral_slices(const Tensor3& x, const std::vector<int>& idx) {
  const Dims d = x.dims();
  Tensor3 out(d.i1, static_cast<int>(idx.size()), d.i3);
  for (int k = 0; k < d.i3; ++k)
    for (std::size_t j = 0; j < idx.size(); ++j)
      out.slice(k).col(static_cast<int>(j)) = x.slice(k).col(idx[j]);
  return out;
}

Tensor3 horizontal_slices(const Tensor3& x, const std::vector<int>& idx) {
  const Dims d = x.dims();
  Tensor3 out(static_cast<int>(idx.size()), d.i2, d.i3);
  for (int k = 0; k < d.i3; ++k)
    for (std::size_t i = 0; i < idx.size(); ++i)
      out.slice(k).row(static_cast<int>(i)) = x.slice(k).row(idx[i]);
  return out;
}

Tensor3 gauss_tensor(int i1, int i2, int i3, GaussKind kind, std::mt19937_64& rng) {
  Tensor3 out(i1, i2, i3);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t fill =
      kind == GaussKind::Full ? out.size() : static_cast<std::size_t>(i1) * i2;
  for (std::size_t i = 0; i < fill; ++i) out.values()[i] = normal(rng);
  return out;
}

Tensor3 gauss_tensor(int i1, int i2, int i3, GaussKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gauss_tensor(i1, i2, i3, kind, rng);
}

CountedTensor::CountedTensor(Tensor3 x)
    : x_(std::move(x)), xf_(fft_mode3(x_)), norm_(ttlr::fro_norm(x_)) {}

Tensor3 CountedTensor::times(const Tensor3& w) const {
  ++passes_;
  return t_product_f(xf_, w, false);
}

Tensor3 CountedTensor::transpose_times(const Tensor3& w) const {
  ++passes_;
  return t_product_f(xf_, w, true);
}

std::pair<Tensor3, Tensor3> CountedTensor::dual_sketch(const Tensor3& w1,
                                                       const Tensor3& w2) const {
  ++passes_;
  return {t_product_f(xf_, w1, false), t_product_f(xf_, w2, true)};
}

CrossSample CountedTensor::cross_sample(const std::vector<int>& lateral,
                                        const std::vector<int>& horizontal) const {
  ++passes_;
  CrossSample s;
  s.C = lateral_slices(x_, lateral);
  s.Rr = horizontal_slices(x_, horizontal);
  s.W = lateral_slices(s.Rr, lateral);
  return s;
}

}  // namespace ttlr
