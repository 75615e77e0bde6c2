#include "ttlr/synthetic.hpp"

#include <cmath>
#include <random>

namespace ttlr {

Tensor3 gen_lowrank(const SyntheticSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("SyntheticSpec: n must be >= 2");
  if (spec.rank < 1 || spec.rank > spec.n)
    throw std::invalid_argument("SyntheticSpec: rank outside [1, n]");
  if (spec.delta < 0.0) throw std::invalid_argument("SyntheticSpec: delta must be >= 0");

  std::mt19937_64 rng(spec.seed);
  Tensor3 a = gauss_tensor(spec.n, spec.rank, spec.n, GaussKind::Full, rng);
  Tensor3 b = gauss_tensor(spec.rank, spec.n, spec.n, GaussKind::Full, rng);
  Tensor3 clean = t_product(a, b);
  if (spec.delta == 0.0) return clean;

  Tensor3 noise = gauss_tensor(spec.n, spec.n, spec.n, GaussKind::Full, rng);
  const double scale = spec.delta * fro_norm(clean) / fro_norm(noise);
  return add(clean, ttlr::scale(noise, scale));
}

Tensor3 gen_case(const SyntheticSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("SyntheticSpec: n must be >= 2");
  Tensor3 x(spec.n, spec.n, spec.n);
  for (int k = 0; k < spec.n; ++k)
    for (int j = 0; j < spec.n; ++j)
      for (int i = 0; i < spec.n; ++i) {
        const double a = i + 1, b = j + 1, c = k + 1;
        double v;
        switch (spec.kind) {
          case SyntheticKind::Case1:
            v = 1.0 / std::sqrt(a * a + b * b + c * c);
            break;
          case SyntheticKind::Case2:
            v = 1.0 / std::cbrt(a * a * a + b * b * b + c * c * c);
            break;
          case SyntheticKind::Case3:
            v = 1.0 / (std::sin(a) + std::tanh(b + c));
            break;
          default:
            throw std::invalid_argument("gen_case: kind must be one of Case1..Case3");
        }
        x(i, j, k) = v;
      }
  return x;
}

}  // namespace ttlr
