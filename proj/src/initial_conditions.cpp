#include "sqg/initial_conditions.hpp"

#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"
#include "sqg/spectral_ops.hpp"

#include <cmath>
#include <random>

namespace sqg {

std::uint64_t hash_mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

// Two standard normals from a per-mode hash; deterministic and grid-free.
std::pair<double, double> mode_gaussians(std::uint64_t seed, int k1, int k2) {
    std::uint64_t h = hash_mix(seed ^ hash_mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(k1)) * 0x100000001b3ULL ^
                                               static_cast<std::uint64_t>(static_cast<std::int64_t>(k2))));
    std::mt19937_64 rng(h);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u1 = 0.0;
    do { u1 = unif(rng); } while (u1 <= 1e-300);
    double u2 = unif(rng);
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

SpectralField random_band_limited(const GridSpec& g, std::uint64_t seed, int k_min, int k_max) {
    SpectralField F(g);
    const int half = g.N / 2;
    if (k_max >= half) k_max = half - 1;
    if (k_min < 1) k_min = 1;
    const int k2_lo = g.n >= 2 ? -k_max : 0;
    const int k2_hi = g.n >= 2 ? k_max : 0;
    for (int k1 = -k_max; k1 <= k_max; ++k1) {
        for (int k2 = k2_lo; k2 <= k2_hi; ++k2) {
            // fill only the canonical half-space; mirror as conjugate
            if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
            double kk = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
            if (kk < k_min || kk > k_max) continue;
            auto [a, b] = mode_gaussians(seed, k1, k2);
            std::complex<double> c(a, b);
            c *= 0.5; // split between k and -k
            F.mode(k1, k2) = c;
            F.mode(-k1, -k2) = std::conj(c);
        }
    }
    F.mode(0, 0) = {0.0, 0.0};
    return F;
}

SpectralField gaussian_vortices(const GridSpec& g, std::uint64_t seed, int count, double sigma,
                                double amplitude) {
    SpectralField F(g);
    std::mt19937_64 rng(hash_mix(seed ^ 0x5bd1e995ULL));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double ks = g.k_scale();
    std::array<int, 3> idx{0, 0, 0};
    for (int v = 0; v < count; ++v) {
        std::array<double, 3> center{0.0, 0.0, 0.0};
        for (int d = 0; d < g.n; ++d) center[static_cast<std::size_t>(d)] = unif(rng) * g.L;
        double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
        // exact coefficients of the periodized Gaussian:
        // c_k = A (sqrt(2 pi) sigma / L)^n exp(-sigma^2 |kappa|^2 / 2) exp(-i kappa . x_c)
        double prefac = sign * amplitude;
        for (int d = 0; d < g.n; ++d) prefac *= std::sqrt(kTwoPi) * sigma / g.L;
        for (std::size_t flat = 0; flat < F.coeffs.size(); ++flat) {
            unflatten(flat, g, idx);
            double k2 = 0.0, phase = 0.0;
            for (int d = 0; d < g.n; ++d) {
                double kap = ks * wavenumber(idx[static_cast<std::size_t>(d)], g.N);
                k2 += kap * kap;
                phase += kap * center[static_cast<std::size_t>(d)];
            }
            F.coeffs[flat] += prefac * std::exp(-0.5 * sigma * sigma * k2) *
                              std::complex<double>(std::cos(phase), -std::sin(phase));
        }
    }
    F.mode(0, 0) = {0.0, 0.0};
    return F;
}

SpectralField single_mode(const GridSpec& g, int k1, int k2, double amplitude) {
    SpectralField F(g);
    if (g.n == 1) {
        F.mode(k1) = {0.5 * amplitude, 0.0};
        F.mode(-k1) = {0.5 * amplitude, 0.0};
    } else {
        F.mode(k1, k2) = {0.5 * amplitude, 0.0};
        F.mode(-k1, -k2) = {0.5 * amplitude, 0.0};
    }
    return F;
}

} // namespace

SpectralField make_initial_condition(const GridSpec& grid, const IcSpec& ic) {
    grid.validate();
    SpectralField F(grid);
    if (ic.preset == "random_hk") {
        bool rough = ic.param("rough", 0.0) != 0.0;
        int k_max_default = rough ? grid.N / 2 - 1 : grid.N / 3;
        int k_min = static_cast<int>(ic.param("k_min", 1));
        int k_max = static_cast<int>(ic.param("k_max", k_max_default));
        F = random_band_limited(grid, ic.seed, k_min, k_max);
    } else if (ic.preset == "gaussian_vortices") {
        int count = static_cast<int>(ic.param("count", 8));
        double sigma = ic.param("sigma", 0.35 * grid.L / kTwoPi);
        double amplitude = ic.param("amplitude", 1.0);
        F = gaussian_vortices(grid, ic.seed, count, sigma, amplitude);
    } else if (ic.preset == "shear") {
        F = single_mode(grid, static_cast<int>(ic.param("k1", 1)),
                        static_cast<int>(ic.param("k2", 0)), ic.param("amplitude", 1.0));
    } else {
        throw validation_error("unknown initial-condition preset: " + ic.preset);
    }

    if (ic.normalize == "none") return F;
    double current = 0.0;
    if (ic.normalize == "l2") {
        current = l2_norm(F);
    } else if (ic.normalize == "sup") {
        RealField f = to_real(F);
        current = kernels::max_abs(f.samples);
    } else {
        throw validation_error("IcSpec: normalize must be none|l2|sup");
    }
    if (current > 0.0) {
        const double s = ic.normalize_value / current;
        for (auto& c : F.coeffs) c *= s;
    }
    return F;
}

} // namespace sqg
