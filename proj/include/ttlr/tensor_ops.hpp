#pragma once

#include <atomic>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ttlr/fft.hpp"
#include "ttlr/tensor3.hpp"

namespace ttlr {

enum class GaussKind { Full, FirstSlice };

// ---------------------------------------------------------------------------
// T-product algebra
// ---------------------------------------------------------------------------

/// T-product a * b via the Fourier domain (half spectrum only).
Tensor3 t_product(const Tensor3& a, const Tensor3& b);

/// T-product with a's spectrum precomputed; adjoint=true computes a^T * b.
Tensor3 t_product_f(const FourierTensor& af, const Tensor3& b, bool adjoint = false);

Tensor3 t_transpose(const Tensor3& x);
Tensor3 identity_tensor(int i1, int i3);
Tensor3 concat(const Tensor3& a, const Tensor3& b, int mode);
double fro_norm(const Tensor3& x);
Tensor3 hadamard(const Tensor3& a, const Tensor3& b);

Tensor3 add(const Tensor3& a, const Tensor3& b);
Tensor3 sub(const Tensor3& a, const Tensor3& b);
Tensor3 scale(const Tensor3& a, double s);

/// X(:, idx, :)
Tensor3 lateral_slices(const Tensor3& x, const std::vector<int>& idx);
/// X(idx, :, :)
Tensor3 horizontal_slices(const Tensor3& x, const std::vector<int>& idx);

// ---------------------------------------------------------------------------
// Random tensors
// ---------------------------------------------------------------------------

Tensor3 gauss_tensor(int i1, int i2, int i3, GaussKind kind, std::mt19937_64& rng);
Tensor3 gauss_tensor(int i1, int i2, int i3, GaussKind kind, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Pass-counted access
// ---------------------------------------------------------------------------

struct CrossSample {
  Tensor3 C;   // X(:, lateral, :)
  Tensor3 Rr;  // X(horizontal, :, :)
  Tensor3 W;   // X(horizontal, lateral, :)
};

/// Wraps a tensor and counts full sweeps over its data. A combined range /
/// co-range sketch counts as one pass (both products read each entry in the
/// same sweep), as does a slice gather.
class CountedTensor {
 public:
  explicit CountedTensor(Tensor3 x);

  const Dims& dims() const { return x_.dims(); }
  const Tensor3& tensor() const { return x_; }
  double fro_norm() const { return norm_; }

  /// X * w (one pass)
  Tensor3 times(const Tensor3& w) const;
  /// X^T * w (one pass)
  Tensor3 transpose_times(const Tensor3& w) const;
  /// (X * w1, X^T * w2) in a single pass
  std::pair<Tensor3, Tensor3> dual_sketch(const Tensor3& w1, const Tensor3& w2) const;
  /// lateral/horizontal slice gather plus intersection, one pass
  CrossSample cross_sample(const std::vector<int>& lateral,
                           const std::vector<int>& horizontal) const;

  long passes() const { return passes_.load(); }
  void reset_passes() { passes_.store(0); }

 private:
  Tensor3 x_;
  FourierTensor xf_;  // cached spectrum; avoids re-transforming the data
  double norm_ = 0.0;
  mutable std::atomic<long> passes_{0};
};

}  // namespace ttlr
