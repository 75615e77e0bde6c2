#include "ttlr/single_pass.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace ttlr {

namespace {

void check_params(const Dims& d, const SketchParams& p) {
  if (!(p.L >= p.K && p.K >= p.H && p.H >= 0))
    throw std::invalid_argument("SketchParams: need L >= K >= H >= 0");
  if (p.R < 1) throw std::invalid_argument("SketchParams: need R >= 1");
  if (p.K > d.i2 || p.L > d.i1)
    throw std::invalid_argument("SketchParams: sketch sizes exceed tensor dims");
}

/// Test tensors for the given algorithm; Omega1 is always drawn first.
std::pair<Tensor3, Tensor3> draw_omegas(const Dims& d, const SketchParams& p,
                                        SinglePassAlg which) {
  std::mt19937_64 rng(p.seed);
  if (which == SinglePassAlg::Alg6) {
    Tensor3 o1 = gauss_tensor(d.i2, p.K + p.R, d.i3, GaussKind::Full, rng);
    Tensor3 o2 = gauss_tensor(d.i1, p.L + p.R, d.i3, GaussKind::Full, rng);
    return {std::move(o1), std::move(o2)};
  }
  Tensor3 o1 = gauss_tensor(d.i2, p.K, d.i3, GaussKind::Full, rng);
  Tensor3 o2 = gauss_tensor(d.i1, p.L, d.i3, GaussKind::Full, rng);
  return {std::move(o1), std::move(o2)};
}

TsvdFactors tsvd_clamped(const Tensor3& x, int rank) {
  const int m = std::min(x.rows(), x.cols());
  return t_svd_truncated(x, std::min(rank, m));
}

TsvdFactors alg6_post(const Tensor3& yc, const Tensor3& yr, const Tensor3& omega1,
                      const Tensor3& omega2, const SketchParams& p) {
  (void)omega1;
  Tensor3 qc;
  if (p.H < p.K) {
    QrFactors qr = t_qr(yc);
    TsvdFactors trunc = tsvd_clamped(qr.R, p.R + p.H);
    qc = t_product(qr.Q, trunc.U);
  } else {
    qc = t_qr(yc).Q;
  }
  QrFactors qr2 = t_qr(t_product(t_transpose(omega2), qc));
  Tensor3 rinv;
  try {
    rinv = t_inv(qr2.R);
  } catch (const SingularTensor&) {
    throw SingularTriangular("alg6: triangular factor of the co-range system is singular");
  }
  Tensor3 z = t_product(rinv, t_product(t_transpose(qr2.Q), t_transpose(yr)));
  TsvdFactors f = tsvd_clamped(z, p.R);
  // the lifted left factor lives in the range basis Q_c (see docs)
  f.U = t_product(qc, f.U);
  return f;
}

TsvdFactors alg7_post(const Tensor3& yc, const Tensor3& yr, const Tensor3& omega1,
                      const Tensor3& omega2, const SketchParams& p) {
  (void)omega1;
  QrFactors qrc = t_qr(yc);
  QrFactors qrr = t_qr(yr);
  Tensor3 qc = t_product(qrc.Q, tsvd_clamped(qrc.R, p.R + p.H).U);
  Tensor3 qr = t_product(qrr.Q, tsvd_clamped(qrr.R, p.R + p.H).U);
  Tensor3 coeff = t_product(t_transpose(omega2), qc);
  Tensor3 z = t_product(t_pinv(coeff), t_product(t_transpose(yr), qr));
  TsvdFactors f = tsvd_clamped(z, p.R);
  f.U = t_product(qc, f.U);
  f.V = t_product(qr, f.V);
  return f;
}

TsvdFactors alg8_post(const Tensor3& yc, const Tensor3& yr, const Tensor3& omega1,
                      const Tensor3& omega2, const SketchParams& p) {
  (void)omega2;
  QrFactors qrc = t_qr(yc);
  QrFactors qrr = t_qr(yr);
  Tensor3 qc = t_product(qrc.Q, tsvd_clamped(qrc.R, p.R + p.H).U);
  Tensor3 qr = t_product(qrr.Q, tsvd_clamped(qrr.R, p.R + p.H).U);
  Tensor3 b = t_product(t_product(t_transpose(qc), yc),
                        t_pinv(t_product(t_transpose(qr), omega1)));
  TsvdFactors f = tsvd_clamped(b, p.R);
  f.U = t_product(qc, f.U);
  f.V = t_product(qr, f.V);
  return f;
}

}  // namespace

CurFactors alg4_tcur(const CountedTensor& x, int L, int K, std::uint64_t seed) {
  const Dims d = x.dims();
  if (L < 1 || L > d.i2 || K < 1 || K > d.i1)
    throw std::invalid_argument("alg4_tcur: slice counts outside tensor dims");

  std::mt19937_64 rng(seed);
  std::vector<int> all2(d.i2), all1(d.i1);
  std::iota(all2.begin(), all2.end(), 0);
  std::iota(all1.begin(), all1.end(), 0);
  CurFactors f;
  std::sample(all2.begin(), all2.end(), std::back_inserter(f.lateral_idx), L, rng);
  std::sample(all1.begin(), all1.end(), std::back_inserter(f.horizontal_idx), K, rng);

  CrossSample s = x.cross_sample(f.lateral_idx, f.horizontal_idx);
  f.C = std::move(s.C);
  f.Rr = std::move(s.Rr);
  f.Uu = t_pinv(s.W);
  return f;
}

QbFactors alg5_qb(const CountedTensor& x, int L, int K, std::uint64_t seed) {
  const Dims d = x.dims();
  std::mt19937_64 rng(seed);
  Tensor3 omega1 = gauss_tensor(d.i2, K, d.i3, GaussKind::Full, rng);
  Tensor3 omega2 = gauss_tensor(L, d.i1, d.i3, GaussKind::Full, rng);

  // one pass: Y = X*Omega1 and W = Omega2*X == (X^T*Omega2^T)^T
  auto [y, wt] = x.dual_sketch(omega1, t_transpose(omega2));
  Tensor3 w = t_transpose(wt);
  Tensor3 q = t_qr(y).Q;
  Tensor3 b = t_product(t_pinv(t_product(omega2, q)), w);
  return {std::move(q), std::move(b), K, false};
}

TsvdFactors alg6_single_pass(const CountedTensor& x, const SketchParams& p) {
  check_params(x.dims(), p);
  auto [o1, o2] = draw_omegas(x.dims(), p, SinglePassAlg::Alg6);
  auto [yc, yr] = x.dual_sketch(o1, o2);
  return alg6_post(yc, yr, o1, o2, p);
}

TsvdFactors alg7_single_pass(const CountedTensor& x, const SketchParams& p) {
  check_params(x.dims(), p);
  auto [o1, o2] = draw_omegas(x.dims(), p, SinglePassAlg::Alg7);
  auto [yc, yr] = x.dual_sketch(o1, o2);
  return alg7_post(yc, yr, o1, o2, p);
}

TsvdFactors alg8_two_sided(const CountedTensor& x, const SketchParams& p) {
  check_params(x.dims(), p);
  auto [o1, o2] = draw_omegas(x.dims(), p, SinglePassAlg::Alg8);
  auto [yc, yr] = x.dual_sketch(o1, o2);
  return alg8_post(yc, yr, o1, o2, p);
}

CurFactors alg4_tcur(const Tensor3& x, int L, int K, std::uint64_t seed) {
  return alg4_tcur(CountedTensor(x), L, K, seed);
}
QbFactors alg5_qb(const Tensor3& x, int L, int K, std::uint64_t seed) {
  return alg5_qb(CountedTensor(x), L, K, seed);
}
TsvdFactors alg6_single_pass(const Tensor3& x, const SketchParams& p) {
  return alg6_single_pass(CountedTensor(x), p);
}
TsvdFactors alg7_single_pass(const Tensor3& x, const SketchParams& p) {
  return alg7_single_pass(CountedTensor(x), p);
}
TsvdFactors alg8_two_sided(const Tensor3& x, const SketchParams& p) {
  return alg8_two_sided(CountedTensor(x), p);
}

Tensor3 reconstruct(const CurFactors& f) {
  return t_product(t_product(f.C, f.Uu), f.Rr);
}

SketchState::SketchState(Dims dims, const SketchParams& p, SinglePassAlg which)
    : dims_(dims), params_(p), which_(which) {
  check_params(dims, p);
  auto [o1, o2] = draw_omegas(dims, p, which);
  omega1_ = std::move(o1);
  omega2_ = std::move(o2);
  yc_ = Tensor3(dims.i1, omega1_.cols(), dims.i3);
  yr_ = Tensor3(dims.i2, omega2_.cols(), dims.i3);
}

void SketchState::ingest(const Tensor3& update) {
  if (!(update.dims() == dims_)) throw DimMismatch("SketchState::ingest: dims differ");
  yc_ = add(yc_, t_product(update, omega1_));
  yr_ = add(yr_, t_product(t_transpose(update), omega2_));
}

void SketchState::merge(const SketchState& other) {
  if (!(other.dims_ == dims_) || other.which_ != which_ ||
      other.params_.seed != params_.seed)
    throw DimMismatch("SketchState::merge: incompatible states");
  yc_ = add(yc_, other.yc_);
  yr_ = add(yr_, other.yr_);
}

TsvdFactors sketch_finalize(const SketchState& state, const SketchParams& p,
                            SinglePassAlg which) {
  const bool alg6_state = state.which_ == SinglePassAlg::Alg6;
  if (alg6_state != (which == SinglePassAlg::Alg6))
    throw std::invalid_argument("sketch_finalize: state sized for a different algorithm");
  switch (which) {
    case SinglePassAlg::Alg6:
      return alg6_post(state.yc_, state.yr_, state.omega1_, state.omega2_, p);
    case SinglePassAlg::Alg7:
      return alg7_post(state.yc_, state.yr_, state.omega1_, state.omega2_, p);
    case SinglePassAlg::Alg8:
      return alg8_post(state.yc_, state.yr_, state.omega1_, state.omega2_, p);
  }
  throw std::logic_error("sketch_finalize: unreachable");
}

}  // namespace ttlr
