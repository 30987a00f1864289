#include "sqg/verify.hpp"

#include "sqg/extension.hpp"
#include "sqg/fft.hpp"
#include "sqg/initial_conditions.hpp"
#include "sqg/kernels.hpp"
#include "sqg/solver.hpp"

#include <algorithm>
#include <cmath>

namespace sqg {

namespace {

GridSpec make_grid(double alpha, int N, int n = 2) {
    GridSpec g;
    g.n = n;
    g.N = N;
    g.alpha = alpha;
    g.validate();
    return g;
}

} // namespace

std::vector<CheckResult> verify_riesz(double alpha, int N, int seeds) {
    GridSpec g = make_grid(alpha, N);
    std::vector<CheckResult> out;

    double worst_div = 0.0, worst_iso = 0.0;
    for (int s = 1; s <= seeds; ++s) {
        IcSpec ic;
        ic.preset = "random_hk";
        ic.seed = static_cast<std::uint64_t>(s);
        SpectralField theta = make_initial_condition(g, ic);
        auto [u1, u2] = riesz_velocity(theta);
        std::array<int, 3> idx{0, 0, 0};
        for (std::size_t flat = 0; flat < theta.coeffs.size(); ++flat) {
            unflatten(flat, g, idx);
            const int k1 = wavenumber(idx[0], g.N);
            const int k2 = wavenumber(idx[1], g.N);
            if (k1 == 0 && k2 == 0) continue;
            const double div = std::abs(static_cast<double>(k1) * u1.coeffs[flat] +
                                        static_cast<double>(k2) * u2.coeffs[flat]);
            worst_div = std::max(worst_div, div);
            const double t2 = std::norm(theta.coeffs[flat]);
            if (t2 > 0.0 && k1 != -g.N / 2 && k2 != -g.N / 2) {
                const double iso =
                    std::abs(std::norm(u1.coeffs[flat]) + std::norm(u2.coeffs[flat]) - t2);
                worst_iso = std::max(worst_iso, iso / t2);
            }
        }
    }
    out.push_back({"spectral divergence max |k . u_hat|", worst_div, 1e-13, worst_div <= 1e-13});
    out.push_back({"per-mode isometry | |u_hat|^2 - |theta_hat|^2 |", worst_iso, 1e-13,
                   worst_iso <= 1e-13});

    // theta = sin(x1) -> u = (0, -cos(x1))
    SpectralField theta(g);
    theta.mode(1, 0) = {0.0, -0.5};
    theta.mode(-1, 0) = {0.0, 0.5};
    auto [u1, u2] = riesz_velocity(theta);
    RealField u1r = to_real(u1), u2r = to_real(u2);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i)
        for (int j = 0; j < g.N; ++j) {
            const double x1 = g.dx() * i;
            const std::size_t flat = static_cast<std::size_t>(i) * g.N + j;
            worst = std::max(worst, std::abs(u1r.samples[flat] - 0.0));
            worst = std::max(worst, std::abs(u2r.samples[flat] + std::cos(x1)));
        }
    out.push_back({"single-mode convention sin(x1) -> (0, -cos x1)", worst, 1e-12, worst <= 1e-12});
    return out;
}

std::vector<CheckResult> verify_extension_identity(double alpha, int N, int fields) {
    std::vector<CheckResult> out;

    { // alpha = 1 closed form
        ExtensionMultiplier Q(1.0);
        double worst = 0.0;
        for (double zeta = 0.0; zeta <= 24.0; zeta += 0.125)
            worst = std::max(worst, std::abs(Q.eval(zeta) - std::exp(-zeta)));
        out.push_back({"alpha=1 multiplier vs exp(-zeta)", worst, 1e-8, worst <= 1e-8});
    }

    { // series / quadrature crossover consistency at the requested alpha
        ExtensionMultiplier Q(alpha);
        const double a = Q.eval(0.99e-5);
        const double b = Q.eval(1.01e-5);
        const double gap = std::abs(a - b);
        out.push_back({"small-zeta series/quadrature continuity", gap, 1e-7, gap <= 1e-7});
    }

    GridSpec g = make_grid(alpha, N);
    { // per-mode constancy of the energy-identity ratio: two single modes
        RealField m1(g), m2(g);
        for (int i = 0; i < g.N; ++i)
            for (int j = 0; j < g.N; ++j) {
                const double x1 = g.dx() * i, x2 = g.dx() * j;
                m1.samples[static_cast<std::size_t>(i) * g.N + j] = std::cos(x1);
                m2.samples[static_cast<std::size_t>(i) * g.N + j] = std::cos(5.0 * x1 + 2.0 * x2);
            }
        auto r1 = weighted_energy_identity(m1, alpha);
        auto r2 = weighted_energy_identity(m2, alpha);
        const double dev = std::abs(r1.ratio - r2.ratio) / std::abs(r1.ratio);
        out.push_back({"energy-identity ratio, mode (1,0) vs (5,2)", dev, 1e-6, dev <= 1e-6});
    }

    { // cross-field constancy
        double lo = 0.0, hi = 0.0;
        for (int s = 1; s <= fields; ++s) {
            IcSpec ic;
            ic.preset = "random_hk";
            ic.seed = static_cast<std::uint64_t>(1000 + s);
            RealField H = to_real(make_initial_condition(g, ic));
            auto r = weighted_energy_identity(H, alpha);
            if (s == 1) {
                lo = hi = r.ratio;
            } else {
                lo = std::min(lo, r.ratio);
                hi = std::max(hi, r.ratio);
            }
        }
        const double spread = (hi - lo) / std::abs(0.5 * (hi + lo));
        out.push_back({"energy-identity ratio spread over random fields", spread, 1e-3,
                       spread <= 1e-3});
    }
    return out;
}

std::vector<CheckResult> verify_neumann(double alpha, int N) {
    std::vector<CheckResult> out;
    GridSpec g = make_grid(alpha, N);

    IcSpec ic;
    ic.preset = "random_hk";
    ic.seed = 7;
    ic.params["k_max"] = std::min(12, N / 4);
    SpectralField theta = make_initial_condition(g, ic);
    ExtensionField E = extend(theta, geometric_ladder(1e-4, 1e-2, 18));
    NeumannRatios r = neumann_mode_ratios(theta, E);
    out.push_back({"per-mode trace ratio spread", r.spread, 1e-3, r.spread <= 1e-3});
    out.push_back({"trace ratio sign (d_alpha < 0)", r.d_alpha, 0.0, r.d_alpha < 0.0});

    { // alpha = 1: trace of cos(x1) is -cos(x1)
        GridSpec g1 = make_grid(1.0, N);
        SpectralField c(g1);
        c.mode(1, 0) = {0.5, 0.0};
        c.mode(-1, 0) = {0.5, 0.0};
        ExtensionField E1 = extend(c, geometric_ladder(1e-4, 1e-2, 18));
        NeumannRatios r1 = neumann_mode_ratios(c, E1);
        const double dev = std::abs(r1.d_alpha + 1.0);
        out.push_back({"alpha=1 trace ratio vs -1", dev, 1e-3, dev <= 1e-3});
    }
    return out;
}

std::vector<CheckResult> verify_energy(double alpha, int N, int seeds) {
    std::vector<CheckResult> out;
    SolverConfig cfg;
    cfg.grid = make_grid(alpha, N);
    cfg.dt = 2e-3;
    cfg.t_end = 0.3;
    cfg.snapshot_dt = 0.05;
    cfg.ic.preset = "gaussian_vortices";
    cfg.ic.normalize = "sup";
    cfg.ic.normalize_value = 1.0;

    double worst_l2_growth = 0.0, worst_sup_growth = 0.0, worst_mean = 0.0;
    bool levels_ok = true;
    for (int s = 1; s <= seeds; ++s) {
        cfg.seed = static_cast<std::uint64_t>(s);
        Trajectory traj = run(cfg);
        for (std::size_t i = 1; i < traj.norms.size(); ++i) {
            const double rel =
                (traj.norms[i].l2 - traj.norms[i - 1].l2) / std::max(traj.norms[i - 1].l2, 1e-300);
            worst_l2_growth = std::max(worst_l2_growth, rel);
        }
        double prev_sup = traj.snapshots.front().field.samples.empty()
                              ? 0.0
                              : kernels::max_abs(traj.snapshots.front().field.samples);
        for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
            const double sup = kernels::max_abs(traj.snapshots[i].field.samples);
            worst_sup_growth = std::max(worst_sup_growth, (sup - prev_sup) / prev_sup);
            prev_sup = sup;
        }
        // zero-mode drift via the quadrature mean of the first/last snapshots
        auto mean = [](const RealField& f) {
            double s2 = 0.0;
            for (double v : f.samples) s2 += v;
            return s2 / static_cast<double>(f.samples.size());
        };
        worst_mean = std::max(worst_mean, std::abs(mean(traj.snapshots.back().field) -
                                                   mean(traj.snapshots.front().field)));

        const double sup0 = kernels::max_abs(traj.snapshots.front().field.samples);
        const double t1 = traj.snapshots[1].t;
        const double t2 = traj.snapshots.back().t;
        for (double frac : {0.0, 0.25, 0.5}) {
            auto res = level_set_energy_check(traj, frac * sup0, t1, t2);
            levels_ok = levels_ok && res.satisfied;
        }
    }
    out.push_back({"max relative L2 growth per step", worst_l2_growth, 1e-10,
                   worst_l2_growth <= 1e-10});
    out.push_back({"max relative sup growth per snapshot", worst_sup_growth, 1e-8,
                   worst_sup_growth <= 1e-8});
    out.push_back({"mean-mode drift", worst_mean, 1e-13, worst_mean <= 1e-13});
    out.push_back({"level-set energy checks", levels_ok ? 0.0 : 1.0, 0.5, levels_ok});
    return out;
}

} // namespace sqg
