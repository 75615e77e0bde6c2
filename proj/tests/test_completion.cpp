#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ttlr/completion.hpp"

using namespace ttlr;

namespace {

Tensor3 lowrank_image(int n, int r, int i3, std::mt19937_64& rng) {
  Tensor3 x = t_product(gauss_tensor(n, r, i3, GaussKind::Full, rng),
                        gauss_tensor(r, n, i3, GaussKind::Full, rng));
  // shift into a 0..255-ish range so PSNR conventions make sense
  double lo = x.values()[0], hi = x.values()[0];
  for (double v : x.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double& v : x.values()) v = 255.0 * (v - lo) / (hi - lo);
  return x;
}

}  // namespace

TEST_CASE("psnr formula and error paths") {
  Tensor3 a(4, 4, 1), b(4, 4, 1);
  for (double& v : a.values()) v = 255.0;
  for (double& v : b.values()) v = 250.0;
  CHECK(psnr(a, b) == doctest::Approx(10.0 * std::log10(2601.0)).epsilon(1e-12));
  CHECK(psnr(a, b) == doctest::Approx(34.1514035220).epsilon(1e-6));
  CHECK(psnr(a, b) == psnr(b, a));
  CHECK_THROWS_AS(psnr(a, a), IdenticalInputs);
  CHECK_THROWS_AS(psnr(a, Tensor3(3, 4, 1)), DimMismatch);
}

TEST_CASE("rel_err basics") {
  std::mt19937_64 rng(1);
  Tensor3 x = gauss_tensor(5, 5, 3, GaussKind::Full, rng);
  CHECK(rel_err(x, x) == 0.0);
  CHECK(rel_err(x, Tensor3(5, 5, 3)) == doctest::Approx(1.0));
  CHECK(rel_err(x, scale(x, 2.0)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rel_err(Tensor3(5, 5, 3), x), ZeroReference);
  CHECK_THROWS_AS(rel_err(x, Tensor3(4, 5, 3)), DimMismatch);
}

TEST_CASE("gaussian_blur: identity, normalization, impulse, mass") {
  std::mt19937_64 rng(2);
  Tensor3 x = gauss_tensor(9, 9, 2, GaussKind::Full, rng);
  CHECK(fro_norm(sub(gaussian_blur(x, 0.0), x)) == 0.0);

  Tensor3 c(7, 7, 1);
  for (double& v : c.values()) v = 3.5;
  CHECK(fro_norm(sub(gaussian_blur(c, 1.25), c)) < 1e-12);

  // unit impulse: center weight is the kernel center squared (separable)
  const double sigma = 0.5;
  Tensor3 im(9, 9, 1);
  im(4, 4, 0) = 1.0;
  const int h = static_cast<int>(std::ceil(2.0 * sigma));
  double sum = 0.0;
  for (int t = -h; t <= h; ++t) sum += std::exp(-0.5 * t * t / (sigma * sigma));
  const double center = 1.0 / sum;
  Tensor3 blurred = gaussian_blur(im, sigma);
  CHECK(blurred(4, 4, 0) == doctest::Approx(center * center).epsilon(1e-12));

  // mass conservation away from the border
  double before = 0.0, after = 0.0;
  for (double v : x.values()) before += v;
  Tensor3 bx = gaussian_blur(x, 0.8);
  for (double v : bx.values()) after += v;
  // replicate boundary preserves constants; for random data only approximate,
  // so check on a constant-padded interior-dominant case instead
  Tensor3 pad(15, 15, 1);
  for (double& v : pad.values()) v = 1.0;
  double mass = 0.0;
  for (double v : gaussian_blur(pad, 1.0).values()) mass += v;
  CHECK(mass == doctest::Approx(225.0).epsilon(1e-10));
  (void)before;
  (void)after;
}

TEST_CASE("upsample_mask placement and density") {
  Tensor3 img(2, 2, 1);
  img(0, 0, 0) = 1;
  img(0, 1, 0) = 2;
  img(1, 0, 0) = 3;
  img(1, 1, 0) = 4;
  MaskedTensor m = upsample_mask(img, 4);
  CHECK(m.data.rows() == 8);
  CHECK(m.data.cols() == 8);
  CHECK(m.data(0, 0, 0) == 1);
  CHECK(m.data(0, 4, 0) == 2);
  CHECK(m.data(4, 0, 0) == 3);
  CHECK(m.data(4, 4, 0) == 4);
  double known = 0.0;
  for (double v : m.mask.values()) known += v;
  CHECK(known == doctest::Approx(4.0));
  CHECK(known / static_cast<double>(m.mask.size()) == doctest::Approx(1.0 / 16.0));

  MaskedTensor id = upsample_mask(img, 1);
  CHECK(fro_norm(sub(id.data, img)) == 0.0);
  for (double v : id.mask.values()) CHECK(v == 1.0);
}

TEST_CASE("complete: trivial masks") {
  std::mt19937_64 rng(3);
  Tensor3 x = gauss_tensor(6, 6, 2, GaussKind::Full, rng);
  CompletionConfig cfg;
  cfg.rank_operator = [](const Tensor3& c) { return reconstruct(t_svd_truncated(c, 3)); };

  Tensor3 ones(6, 6, 2);
  for (double& v : ones.values()) v = 1.0;
  Tensor3 full = complete({x, ones}, cfg);
  CHECK(fro_norm(sub(full, x)) == 0.0);

  Tensor3 z(6, 6, 2);
  CHECK(fro_norm(complete({z, z}, cfg)) == 0.0);
}

TEST_CASE("complete: known entries preserved, beats zero fill") {
  std::mt19937_64 rng(4);
  Tensor3 truth = lowrank_image(32, 3, 3, rng);

  MaskedTensor m{Tensor3(32, 32, 3), Tensor3(32, 32, 3)};
  std::bernoulli_distribution keep(0.5);
  for (std::size_t i = 0; i < m.mask.size(); ++i)
    if (keep(rng)) {
      m.mask.values()[i] = 1.0;
      m.data.values()[i] = truth.values()[i];
    }

  CompletionConfig cfg;
  cfg.rank_operator = [](const Tensor3& c) { return reconstruct(t_svd_truncated(c, 3)); };
  cfg.max_iters = 80;
  cfg.tol = 1e-7;
  Tensor3 rec = complete(m, cfg);

  CHECK(fro_norm(sub(hadamard(m.mask, rec), hadamard(m.mask, truth))) == 0.0);

  double err = 0.0, base = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i)
    if (m.mask.values()[i] == 0.0) {
      const double d = rec.values()[i] - truth.values()[i];
      err += d * d;
      base += truth.values()[i] * truth.values()[i];
    }
  CHECK(err < base);
}

TEST_CASE("complete: invalid masked tensors") {
  Tensor3 d(3, 3, 1), m(3, 3, 1);
  d(0, 0, 0) = 5.0;  // data at a missing entry
  CompletionConfig cfg;
  cfg.rank_operator = [](const Tensor3& c) { return c; };
  CHECK_THROWS_AS(complete({d, m}, cfg), std::invalid_argument);
  Tensor3 bad(3, 3, 1);
  bad(0, 0, 0) = 0.5;  // non-binary mask
  CHECK_THROWS_AS(complete({Tensor3(3, 3, 1), bad}, cfg), std::invalid_argument);
}
