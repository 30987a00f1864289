#pragma once

#include "sqg/field.hpp"

namespace sqg {

/// Forward transform: samples -> Fourier coefficients c_k (1/N^n scaling),
/// so that f(x_j) = sum_k c_k exp(i 2*pi j.k / N). Round-trips with to_real
/// to machine precision. Plans are cached per (n, N, direction); execution is
/// reentrant (per-call buffers), safe from concurrent workers.
SpectralField to_spectral(const RealField& f);

/// Inverse transform. Imaginary residue of the synthesis is discarded; it is
/// at roundoff level for Hermitian-symmetric input.
RealField to_real(const SpectralField& F);

} // namespace sqg
