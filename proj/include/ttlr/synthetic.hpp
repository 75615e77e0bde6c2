#pragma once

#include <cstdint>

#include "ttlr/tensor_ops.hpp"

namespace ttlr {

enum class SyntheticKind { Lowrank, Case1, Case2, Case3 };

/// Cubic synthetic tensors (I1 = I2 = I3 = n); rank and delta apply to the
/// low-rank kind only.
struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::Lowrank;
  int n = 2;
  int rank = 1;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

/// Product of two Gaussian factors of tubal rank `rank`, plus a Gaussian
/// perturbation scaled so that the noise has Frobenius norm
/// delta * ||X_clean||_F.
Tensor3 gen_lowrank(const SyntheticSpec& spec);

/// Deterministic test tensors from closed-form entries (1-based indices):
/// Case1 1/sqrt(i^2+j^2+k^2), Case2 1/cbrt(i^3+j^3+k^3),
/// Case3 1/(sin(i)+tanh(j+k)).
Tensor3 gen_case(const SyntheticSpec& spec);

}  // namespace ttlr
