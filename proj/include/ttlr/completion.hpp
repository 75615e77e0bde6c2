#pragma once

#include <functional>

#include "ttlr/tlinalg.hpp"

namespace ttlr {

/// data holds zeros at missing entries; mask is binary with 1 marking the
/// known positions.
struct MaskedTensor {
  Tensor3 data;
  Tensor3 mask;
};

/// rank_operator is the low-rank projection applied each iteration (any of
/// the randomized algorithms or a truncated T-SVD); filter_sigma = 0 turns
/// the post-loop smoothing off.
struct CompletionConfig {
  std::function<Tensor3(const Tensor3&)> rank_operator;
  int max_iters = 80;
  double tol = 1e-4;
  double filter_sigma = 0.0;
};

/// Iterative impute-project completion. Known entries of the result equal the
/// input's known entries exactly unless filter_sigma > 0 (the final blur
/// touches every pixel).
Tensor3 complete(const MaskedTensor& m, const CompletionConfig& cfg);

/// Places the image on a factor-spaced grid; mask is 1 exactly at the
/// original pixel positions, so its density is 1/factor^2.
MaskedTensor upsample_mask(const Tensor3& img, int factor);

/// Separable Gaussian per frontal slice, half-width ceil(2*sigma), kernel
/// normalized to sum 1, replicate boundary. sigma = 0 is the identity.
Tensor3 gaussian_blur(const Tensor3& img, double sigma);

/// 10*log10(255^2 / MSE); assumes the 255-peak pixel convention.
double psnr(const Tensor3& x, const Tensor3& y);

/// ||x - xApprox||_F / ||x||_F
double rel_err(const Tensor3& x, const Tensor3& xApprox);

}  // namespace ttlr
