#pragma once

#include "sqg/fft.hpp"
#include "sqg/field.hpp"

#include <utility>

namespace sqg {

/// Fractional Laplacian: coefficient at wavevector k scaled by |2*pi*k/L|^beta,
/// zero mode annihilated. beta must lie in (0, 2].
SpectralField frac_laplacian(const SpectralField& F, double beta);

/// Divergence-free velocity u = (-R2 theta, R1 theta), with the Riesz
/// transform fixed globally to the symbol R_j = -i k_j/|k|. Per mode this is
/// u_hat(k) = -i k_perp/|k| theta_hat(k), k_perp = (-k2, k1); the zero mode
/// and the Nyquist rows are zeroed. Requires n == 2.
std::pair<SpectralField, SpectralField> riesz_velocity(const SpectralField& theta);

/// 2/3-rule truncation: zero every mode with any |k_j| > N/3. Idempotent.
SpectralField dealias(const SpectralField& F);

/// Spectral partial derivative along axis (i * 2*pi*k_d/L multiplier, Nyquist
/// row zeroed).
SpectralField derivative(const SpectralField& F, int axis);

struct Norms {
    double l2 = 0.0;           // quadrature-weighted discrete L2 norm
    double sup = 0.0;          // max |samples|
    double h_alpha_half = 0.0; // L2 norm of frac_laplacian(., alpha/2)
};

/// All three norms of a real field; the seminorm order is grid.alpha/2.
Norms norms(const RealField& f);
/// Same, re-using an existing transform of f (avoids one FFT).
Norms norms(const RealField& f, const SpectralField& F);

/// L2 norm straight from coefficients (Parseval): sqrt(L^n sum |c_k|^2).
double l2_norm(const SpectralField& F);
/// Seminorm |Lambda^{order/2} f|_{L2} via the Parseval sum of |kappa|^order |c_k|^2.
double sobolev_seminorm(const SpectralField& F, double order);

} // namespace sqg
