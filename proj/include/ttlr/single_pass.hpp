#pragma once

#include <cstdint>
#include <vector>

#include "ttlr/tlinalg.hpp"

namespace ttlr {

/// Sketch sizes for the single-pass algorithms: L co-range, K range,
/// H truncation surplus, R target tubal rank.
struct SketchParams {
  int L = 0;
  int K = 0;
  int H = 0;
  int R = 1;
  std::uint64_t seed = 0;
};

struct CurFactors {
  Tensor3 C;   // selected lateral slices
  Tensor3 Uu;  // middle tensor, pinv of the intersection
  Tensor3 Rr;  // selected horizontal slices
  std::vector<int> lateral_idx;
  std::vector<int> horizontal_idx;
};

enum class SinglePassAlg { Alg6, Alg7, Alg8 };

/// Cross approximation from uniformly sampled lateral/horizontal slices;
/// the middle tensor is the pseudoinverse of their intersection.
CurFactors alg4_tcur(const CountedTensor& x, int L, int K, std::uint64_t seed);
CurFactors alg4_tcur(const Tensor3& x, int L, int K, std::uint64_t seed);

/// Range/co-range sketch QB approximation (the unstabilized baseline).
QbFactors alg5_qb(const CountedTensor& x, int L, int K, std::uint64_t seed);
QbFactors alg5_qb(const Tensor3& x, int L, int K, std::uint64_t seed);

TsvdFactors alg6_single_pass(const CountedTensor& x, const SketchParams& p);
TsvdFactors alg6_single_pass(const Tensor3& x, const SketchParams& p);

TsvdFactors alg7_single_pass(const CountedTensor& x, const SketchParams& p);
TsvdFactors alg7_single_pass(const Tensor3& x, const SketchParams& p);

TsvdFactors alg8_two_sided(const CountedTensor& x, const SketchParams& p);
TsvdFactors alg8_two_sided(const Tensor3& x, const SketchParams& p);

Tensor3 reconstruct(const CurFactors& f);

/// Accumulates range/co-range sketches over a stream of additive updates.
/// The test tensors are drawn once from the seed, so a streamed run finalizes
/// to exactly the same factors as the batch algorithm under that seed.
class SketchState {
 public:
  SketchState(Dims dims, const SketchParams& p, SinglePassAlg which);

  void ingest(const Tensor3& update);

  /// Adds another shard's accumulators (same dims, params, and algorithm).
  void merge(const SketchState& other);

  const Tensor3& range_sketch() const { return yc_; }
  const Tensor3& corange_sketch() const { return yr_; }

  friend TsvdFactors sketch_finalize(const SketchState& state, const SketchParams& p,
                                     SinglePassAlg which);

 private:
  Dims dims_;
  SketchParams params_;
  SinglePassAlg which_;
  Tensor3 omega1_, omega2_;
  Tensor3 yc_, yr_;
};

TsvdFactors sketch_finalize(const SketchState& state, const SketchParams& p,
                            SinglePassAlg which);

}  // namespace ttlr
