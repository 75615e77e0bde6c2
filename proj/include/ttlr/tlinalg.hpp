#pragma once

#include <utility>

#include "ttlr/tensor_ops.hpp"

namespace ttlr {

/// (U, S, V) with orthonormal U, V and f-diagonal S; X ~= U * S * V^T.
struct TsvdFactors {
  Tensor3 U;
  Tensor3 S;
  Tensor3 V;
  int k = 0;
};

/// Q orthonormal, R upper-triangular in every Fourier slice; X == Q * R.
struct QrFactors {
  Tensor3 Q;
  Tensor3 R;
};

/// V orthogonal, D f-diagonal; X == V * D * V^T for symmetric X.
struct EigFactors {
  Tensor3 V;
  Tensor3 D;
};

/// Q orthonormal, B = Q^T * X; k retained tubal size.
struct QbFactors {
  Tensor3 Q;
  Tensor3 B;
  int k = 0;
  bool rank_capped = false;
};

QrFactors t_qr(const Tensor3& x);

/// Orthonormal basis for the range of x (Q factor of t_qr with numerically
/// dependent columns dropped). A zero tensor yields an empty basis.
Tensor3 orth(const Tensor3& x);

TsvdFactors t_svd(const Tensor3& x);
TsvdFactors t_svd_truncated(const Tensor3& x, int R);

/// Per-Fourier-slice LU with partial pivoting, the permutation folded back
/// into L so that L * Uu reconstructs x.
std::pair<Tensor3, Tensor3> t_lu(const Tensor3& x);

/// Hermitian eigendecomposition per Fourier slice, eigenvalues ascending.
EigFactors t_eig(const Tensor3& x);

/// Tube-wise square root of an f-diagonal tensor.
Tensor3 fdiag_sqrt(const Tensor3& d);

Tensor3 t_pinv(const Tensor3& x);
Tensor3 t_inv(const Tensor3& x);

int tubal_rank(const Tensor3& x, double tol);
double trace_first_slice(const Tensor3& x);

Tensor3 reconstruct(const TsvdFactors& f);
Tensor3 reconstruct(const QbFactors& f);

}  // namespace ttlr
