#include "ttlr/completion.hpp"

#include <cmath>
#include <vector>

namespace ttlr {

namespace {

void check_masked(const MaskedTensor& m) {
  if (!(m.data.dims() == m.mask.dims()))
    throw DimMismatch("MaskedTensor: data and mask dims differ");
  for (std::size_t i = 0; i < m.mask.size(); ++i) {
    const double v = m.mask.values()[i];
    if (v != 0.0 && v != 1.0)
      throw std::invalid_argument("MaskedTensor: mask is not binary");
    if (v == 0.0 && m.data.values()[i] != 0.0)
      throw std::invalid_argument("MaskedTensor: nonzero data at a missing entry");
  }
}

}  // namespace

Tensor3 complete(const MaskedTensor& m, const CompletionConfig& cfg) {
  check_masked(m);
  if (!cfg.rank_operator) throw std::invalid_argument("complete: no rank operator");
  if (cfg.max_iters < 1) throw std::invalid_argument("complete: max_iters must be >= 1");
  if (cfg.tol < 0.0) throw std::invalid_argument("complete: tol must be >= 0");

  const Tensor3& c0 = m.data;
  Tensor3 c = c0;
  for (int n = 0; n < cfg.max_iters; ++n) {
    Tensor3 x = cfg.rank_operator(c);
    // C <- C0 + (1 - mask) .* X, which re-pins the known entries
    Tensor3 next = c0;
    for (std::size_t i = 0; i < next.size(); ++i)
      if (m.mask.values()[i] == 0.0) next.values()[i] = x.values()[i];
    const double base = fro_norm(c);
    const double change = fro_norm(sub(next, c));
    c = std::move(next);
    if (change <= cfg.tol * (base > 0.0 ? base : 1.0)) break;
  }
  if (cfg.filter_sigma > 0.0) c = gaussian_blur(c, cfg.filter_sigma);
  return c;
}

MaskedTensor upsample_mask(const Tensor3& img, int factor) {
  if (factor < 1) throw std::invalid_argument("upsample_mask: factor must be >= 1");
  const Dims d = img.dims();
  MaskedTensor out{Tensor3(d.i1 * factor, d.i2 * factor, d.i3),
                   Tensor3(d.i1 * factor, d.i2 * factor, d.i3)};
  for (int k = 0; k < d.i3; ++k)
    for (int j = 0; j < d.i2; ++j)
      for (int i = 0; i < d.i1; ++i) {
        out.data(i * factor, j * factor, k) = img(i, j, k);
        out.mask(i * factor, j * factor, k) = 1.0;
      }
  return out;
}

Tensor3 gaussian_blur(const Tensor3& img, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("gaussian_blur: sigma must be >= 0");
  if (sigma == 0.0) return img;

  const int h = static_cast<int>(std::ceil(2.0 * sigma));
  std::vector<double> kernel(2 * h + 1);
  double sum = 0.0;
  for (int t = -h; t <= h; ++t) {
    kernel[t + h] = std::exp(-0.5 * t * t / (sigma * sigma));
    sum += kernel[t + h];
  }
  for (double& w : kernel) w /= sum;

  const Dims d = img.dims();
  const auto clampi = [](int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); };

  Tensor3 tmp(d.i1, d.i2, d.i3), out(d.i1, d.i2, d.i3);
  for (int k = 0; k < d.i3; ++k) {
    for (int j = 0; j < d.i2; ++j)
      for (int i = 0; i < d.i1; ++i) {
        double acc = 0.0;
        for (int t = -h; t <= h; ++t) acc += kernel[t + h] * img(clampi(i + t, d.i1), j, k);
        tmp(i, j, k) = acc;
      }
    for (int j = 0; j < d.i2; ++j)
      for (int i = 0; i < d.i1; ++i) {
        double acc = 0.0;
        for (int t = -h; t <= h; ++t) acc += kernel[t + h] * tmp(i, clampi(j + t, d.i2), k);
        out(i, j, k) = acc;
      }
  }
  return out;
}

double psnr(const Tensor3& x, const Tensor3& y) {
  if (!(x.dims() == y.dims())) throw DimMismatch("psnr: dims differ");
  const double diff = fro_norm(sub(x, y));
  if (diff == 0.0) throw IdenticalInputs("psnr: identical tensors, MSE is zero");
  const double mse = diff * diff / static_cast<double>(x.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double rel_err(const Tensor3& x, const Tensor3& xApprox) {
  if (!(x.dims() == xApprox.dims())) throw DimMismatch("rel_err: dims differ");
  const double ref = fro_norm(x);
  if (ref == 0.0) throw ZeroReference("rel_err: reference tensor has zero norm");
  return fro_norm(sub(x, xApprox)) / ref;
}

}  // namespace ttlr
