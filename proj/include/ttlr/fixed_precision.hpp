#pragma once

#include <cstdint>

#include "ttlr/tlinalg.hpp"

namespace ttlr {

/// eps is the absolute Frobenius error bound; power_or_passes is the power
/// iteration count for alg9/alg11 and the total pass count (q > 2) for alg10;
/// max_rank <= 0 means min(I1, I2).
struct FixedPrecisionConfig {
  double eps = 1e-6;
  int block = 10;
  int power_or_passes = 1;
  int max_rank = 0;
  std::uint64_t seed = 0;
};

/// Baseline blocked rank-adaptive QB; 2q+2 data passes per block.
QbFactors alg9_fixed_precision(const CountedTensor& x, const FixedPrecisionConfig& cfg);
QbFactors alg9_fixed_precision(const Tensor3& x, const FixedPrecisionConfig& cfg);

/// Pass-parameterized variant: exactly q data passes per block, LU-based
/// orthonormalization in the inner rounds.
QbFactors alg10_fixed_precision(const CountedTensor& x, const FixedPrecisionConfig& cfg);
QbFactors alg10_fixed_precision(const Tensor3& x, const FixedPrecisionConfig& cfg);

/// Trace-estimator variant: accumulates Y = X*Omega and W = X^T*Y blocks and
/// stops on the Gram-trace residual estimate.
QbFactors alg11_fixed_precision(const CountedTensor& x, const FixedPrecisionConfig& cfg);
QbFactors alg11_fixed_precision(const Tensor3& x, const FixedPrecisionConfig& cfg);

/// ||X - Q*B||_F^2 estimated from the sketches alone:
/// normX2 - trace((W^T*W*(Y^T*Y)^{-1})_1).
double residual_estimate(const Tensor3& y, const Tensor3& w, double normX2);

/// Converts QB factors to a truncated T-SVD, trimming to the smallest rank
/// whose discarded tail energy is <= eps^2.
TsvdFactors truncate_qb(const QbFactors& f, double eps);

}  // namespace ttlr
