#pragma once

#include "ttlr/tensor3.hpp"

namespace ttlr {

/// Unnormalized forward DFT along mode 3 of every tube, half spectrum only.
FourierTensor fft_mode3(const Tensor3& x);

/// Inverse transform (1/I3 scaling). Throws SymmetryViolation if the implied
/// spectrum is not conjugate-symmetric, i.e. the imaginary residue of the
/// inverse exceeds 1e-6 * ||x||_F.
Tensor3 ifft_mode3(const FourierTensor& xf);

}  // namespace ttlr
