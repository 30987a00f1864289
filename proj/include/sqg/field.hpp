#pragma once

#include "sqg/errors.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace sqg {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Periodic collocation grid on the n-torus [0,L)^n, N points per axis,
/// with the dissipation order alpha attached (it scales the H^{alpha/2}
/// seminorm and the solver's dissipation multiplier).
struct GridSpec {
    int n = 2;          // spatial dimension
    int N = 64;         // points per axis, even, >= 8 (powers of two recommended)
    double L = kTwoPi;  // period per axis
    double alpha = 1.0; // dissipation order, in (0, 2]

    void validate() const {
        if (n < 1 || n > 3) throw validation_error("GridSpec: n must be 1, 2 or 3");
        if (N < 8 || N % 2 != 0) throw validation_error("GridSpec: N must be even and >= 8");
        if (!(L > 0.0)) throw validation_error("GridSpec: L must be positive");
        if (!(alpha > 0.0) || alpha > 2.0) throw validation_error("GridSpec: alpha must lie in (0,2]");
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < n; ++d) s *= static_cast<std::size_t>(N);
        return s;
    }
    double dx() const { return L / N; }
    /// Quadrature weight of one grid cell, (L/N)^n.
    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < n; ++d) v *= dx();
        return v;
    }
    /// Physical wavenumber per integer mode, 2*pi/L.
    double k_scale() const { return kTwoPi / L; }

    bool operator==(const GridSpec& o) const {
        return n == o.n && N == o.N && L == o.L && alpha == o.alpha;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Integer wavevector component encoded by FFT index i: values in [-N/2, N/2).
inline int wavenumber(int index, int N) { return index < N / 2 ? index : index - N; }

/// Decode a flat row-major index into per-axis indices (idx[0] slowest).
inline void unflatten(std::size_t flat, const GridSpec& g, std::array<int, 3>& idx) {
    for (int d = g.n - 1; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % static_cast<std::size_t>(g.N));
        flat /= static_cast<std::size_t>(g.N);
    }
}

/// Real samples of a periodic field, row-major over the grid.
struct RealField {
    GridSpec grid;
    std::vector<double> samples;

    RealField() = default;
    explicit RealField(const GridSpec& g) : grid(g), samples(g.size(), 0.0) { grid.validate(); }
    RealField(const GridSpec& g, std::vector<double> s) : grid(g), samples(std::move(s)) {
        grid.validate();
        if (samples.size() != grid.size()) throw validation_error("RealField: sample count != N^n");
    }

    bool all_finite() const {
        for (double v : samples)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Complex Fourier coefficients c_k of a real field, one per integer
/// wavevector k in [-N/2, N/2)^n, stored in FFT index order. The field is
/// f(x) = sum_k c_k exp(i (2*pi/L) k . x); Hermitian symmetry
/// c_{-k} = conj(c_k) holds for real fields.
struct SpectralField {
    GridSpec grid;
    std::vector<std::complex<double>> coeffs;

    SpectralField() = default;
    explicit SpectralField(const GridSpec& g) : grid(g), coeffs(g.size(), {0.0, 0.0}) {
        grid.validate();
    }
    SpectralField(const GridSpec& g, std::vector<std::complex<double>> c)
        : grid(g), coeffs(std::move(c)) {
        grid.validate();
        if (coeffs.size() != grid.size()) throw validation_error("SpectralField: coeff count != N^n");
    }

    std::complex<double>& mode(int k1, int k2 = 0, int k3 = 0) {
        return coeffs[mode_index(k1, k2, k3)];
    }
    const std::complex<double>& mode(int k1, int k2 = 0, int k3 = 0) const {
        return coeffs[mode_index(k1, k2, k3)];
    }

    std::size_t mode_index(int k1, int k2 = 0, int k3 = 0) const {
        std::array<int, 3> k{k1, k2, k3};
        std::size_t flat = 0;
        for (int d = 0; d < grid.n; ++d) {
            int kk = k[static_cast<std::size_t>(d)];
            if (kk < -grid.N / 2 || kk >= grid.N / 2)
                throw validation_error("SpectralField: wavevector outside [-N/2, N/2)");
            int idx = kk >= 0 ? kk : kk + grid.N;
            flat = flat * static_cast<std::size_t>(grid.N) + static_cast<std::size_t>(idx);
        }
        return flat;
    }

    /// Max deviation from Hermitian symmetry; 0 for exactly real fields.
    double hermitian_defect() const;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (a != b) throw validation_error(std::string(what) + ": grid mismatch");
}

} // namespace sqg
