#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ttlr {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct DimMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SymmetryViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankOutOfRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularSlice : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSymmetric : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NegativeSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularTensor : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularTriangular : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllConditionedGram : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IdenticalInputs : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ZeroReference : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Dims
// ---------------------------------------------------------------------------

struct Dims {
  int i1 = 0;
  int i2 = 0;
  int i3 = 0;
  bool operator==(const Dims&) const = default;
};

/// Dense real third-order tensor. Mode-1 index fastest, frontal slices
/// contiguous: entry (i,j,k) lives at i + i1*j + i1*i2*k.
/// Zero-extent dims are allowed and act as the empty operand for concat.
class Tensor3 {
 public:
  Tensor3() = default;

  Tensor3(int i1, int i2, int i3) : dims_{i1, i2, i3} {
    if (i1 < 0 || i2 < 0 || i3 < 0) throw DimMismatch("Tensor3: negative dimension");
    values_.assign(static_cast<std::size_t>(i1) * i2 * i3, 0.0);
  }

  static Tensor3 from_values(int i1, int i2, int i3, std::vector<double> v) {
    Tensor3 t(i1, i2, i3);
    if (v.size() != t.values_.size())
      throw DimMismatch("Tensor3: value count does not match dims");
    t.values_ = std::move(v);
    t.check_finite();
    return t;
  }

  int rows() const { return dims_.i1; }
  int cols() const { return dims_.i2; }
  int depth() const { return dims_.i3; }
  const Dims& dims() const { return dims_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(int i, int j, int k) { return values_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return values_[index(i, j, k)]; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  Eigen::Map<MatrixXd> slice(int k) {
    return {values_.data() + slice_offset(k), dims_.i1, dims_.i2};
  }
  Eigen::Map<const MatrixXd> slice(int k) const {
    return {values_.data() + slice_offset(k), dims_.i1, dims_.i2};
  }

  void check_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("Tensor3: non-finite value");
  }

 private:
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_.i1) * (j + static_cast<std::size_t>(dims_.i2) * k);
  }
  std::size_t slice_offset(int k) const {
    return static_cast<std::size_t>(dims_.i1) * dims_.i2 * k;
  }

  Dims dims_;
  std::vector<double> values_;
};

/// Mode-3 half-spectrum of a real tensor. Only the first ceil((I3+1)/2)
/// Fourier slices are stored; the rest are implied by conjugate symmetry,
/// full_slice(i) == conj(half(I3 - i)) for i >= half_count().
class FourierTensor {
 public:
  FourierTensor() = default;

  explicit FourierTensor(Dims d) : dims_(d) {
    slices_.assign(half_count(d.i3), MatrixXcd::Zero(d.i1, d.i2));
  }

  static int half_count(int i3) { return i3 <= 0 ? 0 : i3 / 2 + 1; }

  const Dims& dims() const { return dims_; }
  int half_count() const { return static_cast<int>(slices_.size()); }

  MatrixXcd& half(int i) { return slices_[i]; }
  const MatrixXcd& half(int i) const { return slices_[i]; }

  MatrixXcd full_slice(int i) const {
    if (i < half_count()) return slices_[i];
    return slices_[dims_.i3 - i].conjugate();
  }

  /// Frobenius norm of the underlying real tensor via the Parseval relation,
  /// with the conjugate-pair slices counted twice.
  double fro_norm() const {
    double acc = 0.0;
    for (int i = 0; i < half_count(); ++i) {
      double w = pair_weight(i);
      acc += w * slices_[i].squaredNorm();
    }
    return dims_.i3 > 0 ? std::sqrt(acc / dims_.i3) : 0.0;
  }

  /// 2 for slices with a distinct conjugate partner, 1 for the self-conjugate
  /// DC and (even I3) Nyquist slices.
  double pair_weight(int i) const {
    if (i == 0) return 1.0;
    if (dims_.i3 % 2 == 0 && i == dims_.i3 / 2) return 1.0;
    return 2.0;
  }

 private:
  Dims dims_;
  std::vector<MatrixXcd> slices_;
};

}  // namespace ttlr
