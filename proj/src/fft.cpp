#include "ttlr/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace ttlr {

FourierTensor fft_mode3(const Tensor3& x) {
  const Dims d = x.dims();
  FourierTensor out(d);
  if (x.empty()) return out;

  const int nh = out.half_count();
  const std::size_t stride = static_cast<std::size_t>(d.i1) * d.i2;

  Eigen::FFT<double> fft;
  std::vector<double> tube(d.i3);
  std::vector<std::complex<double>> spec(d.i3);

  for (int j = 0; j < d.i2; ++j) {
    for (int i = 0; i < d.i1; ++i) {
      const double* src = x.data() + i + static_cast<std::size_t>(d.i1) * j;
      for (int k = 0; k < d.i3; ++k) tube[k] = src[stride * k];
      if (d.i3 == 1) {
        out.half(0)(i, j) = tube[0];
        continue;
      }
      fft.fwd(spec, tube);
      for (int k = 0; k < nh; ++k) out.half(k)(i, j) = spec[k];
    }
  }
  return out;
}

Tensor3 ifft_mode3(const FourierTensor& xf) {
  const Dims d = xf.dims();
  Tensor3 out(d.i1, d.i2, d.i3);
  if (out.empty()) return out;

  const int nh = xf.half_count();
  const std::size_t stride = static_cast<std::size_t>(d.i1) * d.i2;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec(d.i3), time(d.i3);

  double imag2 = 0.0;
  for (int j = 0; j < d.i2; ++j) {
    for (int i = 0; i < d.i1; ++i) {
      for (int k = 0; k < nh; ++k) spec[k] = xf.half(k)(i, j);
      for (int k = nh; k < d.i3; ++k) spec[k] = std::conj(xf.half(d.i3 - k)(i, j));
      double* dst = out.data() + i + static_cast<std::size_t>(d.i1) * j;
      if (d.i3 == 1) {
        dst[0] = spec[0].real();
        imag2 += spec[0].imag() * spec[0].imag();
        continue;
      }
      fft.inv(time, spec);
      for (int k = 0; k < d.i3; ++k) {
        dst[stride * k] = time[k].real();
        imag2 += time[k].imag() * time[k].imag();
      }
    }
  }

  const double ref = xf.fro_norm();
  if (std::sqrt(imag2) > 1e-6 * std::max(ref, 1e-300))
    throw SymmetryViolation("ifft_mode3: spectrum is not conjugate-symmetric");
  return out;
}

}  // namespace ttlr
