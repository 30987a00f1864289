#pragma once

#include "sqg/errors.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace sqg {

/// Comparison-function setup on B_4* = [-4,4]^n x [0,4): the source is the
/// indicator of the two cubes (-4-omega,-4+omega)^n and (4-omega,4+omega)^n,
/// lifted by the half-space kernel z^alpha / (z^2 + |x-y|^2)^{(n+alpha)/2}.
struct BarrierSpec {
    double omega = 0.1; // cube half-width
    double c0 = 0.6;    // inner-box radius
    int n = 2;
    double alpha = 0.75;

    void validate() const {
        if (n < 1 || n > 2) throw validation_error("BarrierSpec: n must be 1 or 2");
        if (!(alpha > 0.0) || alpha >= 2.0)
            throw validation_error("BarrierSpec: alpha must lie in (0,2)");
        const double lower = 32.0 / std::pow(64.0, 1.0 / alpha);
        if (!(c0 > lower) || !(c0 < 1.0))
            throw validation_error("BarrierSpec: c0 must lie in (32/64^{1/alpha}, 1)");
        if (!(omega > 0.0) || !(omega < 2.0 * (1.0 - c0)))
            throw validation_error("BarrierSpec: omega must lie in (0, 2(1-c0))");
    }
};

struct BarrierGrid {
    int nx = 33; // samples per x axis
    int nz = 16; // z levels (uniform on (0, 4])
};

struct BarrierResult {
    /// Normalizer computed exactly by quadrature: the raw kernel convolved
    /// with the cubes, evaluated at (x, z) = (0, 4).
    double K_exact = 0.0;
    /// The closed-form shortcut 2 omega^n (1+n)^{-(n+alpha)/2} recorded for
    /// comparison; `K_discrepancy` = K_paper_form / K_exact.
    double K_paper_form = 0.0;
    double K_discrepancy = 0.0;

    // All F values below are normalized by K_exact.
    double inf_boundary = 0.0;  // over sampled walls (z > 0) and the top face
    double inf_top = 0.0;       // over the top face z = 4 only
    double sup_inner = 0.0;     // over B_{c0}* samples
    double boundary_argmin_z = 0.0;
    double deep_interior_value = 0.0; // F at x = 0, z -> 0 (summability check)
};

/// Evaluate the unnormalized barrier kernel sum at one point by adaptive
/// tensor quadrature over the two cubes.
double barrier_kernel(const BarrierSpec& spec, const std::vector<double>& x, double z);

/// Sample F over the boundary of B_4* and over B_{c0}*; returns the extrema
/// bundle used by the maximum-principle diagnostics.
BarrierResult barrier_field(const BarrierSpec& spec, const BarrierGrid& grid = {});

/// lambda = 1 - sup of the normalized barrier on B_{c0}*; positive for
/// admissible specs. Throws numerical_error("barrier", ...) otherwise.
double lambda_estimate(const BarrierSpec& spec, const BarrierGrid& grid = {});

} // namespace sqg
