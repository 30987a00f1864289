#include "sqg/spectral_ops.hpp"

#include "sqg/kernels.hpp"

#include <cmath>

namespace sqg {

namespace {

/// |k|^2 (integer wavevector) per flat index.
std::vector<double> mode_k2(const GridSpec& g) {
    std::vector<double> out(g.size());
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        unflatten(flat, g, idx);
        double k2 = 0.0;
        for (int d = 0; d < g.n; ++d) {
            double kd = wavenumber(idx[static_cast<std::size_t>(d)], g.N);
            k2 += kd * kd;
        }
        out[flat] = k2;
    }
    return out;
}

} // namespace

SpectralField frac_laplacian(const SpectralField& F, double beta) {
    if (!(beta > 0.0) || beta > 2.0)
        throw validation_error("frac_laplacian: beta must lie in (0,2]");
    SpectralField out = F;
    const double scale = std::pow(F.grid.k_scale(), beta);
    std::vector<double> mult = mode_k2(F.grid);
    for (auto& m : mult) m = m == 0.0 ? 0.0 : scale * std::pow(m, 0.5 * beta);
    kernels::cmul_real(out.coeffs, mult);
    return out;
}

std::pair<SpectralField, SpectralField> riesz_velocity(const SpectralField& theta) {
    if (theta.grid.n != 2) throw validation_error("riesz_velocity: requires n == 2");
    const GridSpec& g = theta.grid;
    SpectralField u1(g), u2(g);
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < theta.coeffs.size(); ++flat) {
        unflatten(flat, g, idx);
        const int k1 = wavenumber(idx[0], g.N);
        const int k2 = wavenumber(idx[1], g.N);
        if ((k1 == 0 && k2 == 0) || k1 == -g.N / 2 || k2 == -g.N / 2) continue;
        const double kn = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
        // u_hat = -i k_perp/|k| theta_hat, k_perp = (-k2, k1)
        const std::complex<double> th = theta.coeffs[flat];
        u1.coeffs[flat] = std::complex<double>(0.0, k2 / kn) * th;
        u2.coeffs[flat] = std::complex<double>(0.0, -k1 / kn) * th;
    }
    return {std::move(u1), std::move(u2)};
}

SpectralField dealias(const SpectralField& F) {
    SpectralField out = F;
    const GridSpec& g = F.grid;
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < out.coeffs.size(); ++flat) {
        unflatten(flat, g, idx);
        for (int d = 0; d < g.n; ++d) {
            int kd = wavenumber(idx[static_cast<std::size_t>(d)], g.N);
            if (3 * std::abs(kd) > g.N) {
                out.coeffs[flat] = {0.0, 0.0};
                break;
            }
        }
    }
    return out;
}

SpectralField derivative(const SpectralField& F, int axis) {
    if (axis < 0 || axis >= F.grid.n) throw validation_error("derivative: bad axis");
    SpectralField out = F;
    const GridSpec& g = F.grid;
    const double ks = g.k_scale();
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < out.coeffs.size(); ++flat) {
        unflatten(flat, g, idx);
        const int kd = wavenumber(idx[static_cast<std::size_t>(axis)], g.N);
        if (kd == -g.N / 2) {
            out.coeffs[flat] = {0.0, 0.0};
            continue;
        }
        out.coeffs[flat] *= std::complex<double>(0.0, ks * kd);
    }
    return out;
}

double l2_norm(const SpectralField& F) {
    std::vector<double> w(F.coeffs.size(), 1.0);
    double s = kernels::weighted_mod2_sum(F.coeffs, w);
    return std::sqrt(std::pow(F.grid.L, F.grid.n) * s);
}

double sobolev_seminorm(const SpectralField& F, double order) {
    std::vector<double> w = [&] {
        std::vector<double> out(F.grid.size());
        std::array<int, 3> idx{0, 0, 0};
        const double scale = std::pow(F.grid.k_scale(), order);
        for (std::size_t flat = 0; flat < out.size(); ++flat) {
            unflatten(flat, F.grid, idx);
            double k2 = 0.0;
            for (int d = 0; d < F.grid.n; ++d) {
                double kd = wavenumber(idx[static_cast<std::size_t>(d)], F.grid.N);
                k2 += kd * kd;
            }
            out[flat] = k2 == 0.0 ? 0.0 : scale * std::pow(k2, 0.5 * order);
        }
        return out;
    }();
    double s = kernels::weighted_mod2_sum(F.coeffs, w);
    return std::sqrt(std::pow(F.grid.L, F.grid.n) * s);
}

Norms norms(const RealField& f, const SpectralField& F) {
    require_same_grid(f.grid, F.grid, "norms");
    Norms out;
    out.sup = kernels::max_abs(f.samples);
    out.l2 = std::sqrt(f.grid.cell_volume() * kernels::sum_squares(f.samples));
    out.h_alpha_half = sobolev_seminorm(F, f.grid.alpha);
    return out;
}

Norms norms(const RealField& f) { return norms(f, to_spectral(f)); }

} // namespace sqg
