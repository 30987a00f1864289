#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"
#include "sqg/solver.hpp"

#include <cmath>
#include <cstring>

using namespace sqg;

namespace {

GridSpec grid2(int N, double alpha) {
    GridSpec g;
    g.n = 2;
    g.N = N;
    g.alpha = alpha;
    return g;
}

} // namespace

TEST_CASE("linear mode decays by the exact integrating factor") {
    SolverConfig cfg;
    cfg.grid = grid2(32, 1.0);
    cfg.dt = 0.173; // arbitrary; the factor is exact at any dt
    cfg.flow_scale = 0.0;
    SpectralField state(cfg.grid);
    state.mode(3, 0) = {0.5, 0.0};
    state.mode(-3, 0) = {0.5, 0.0};
    SpectralField next = step(state, cfg);
    const double want = 0.5 * std::exp(-3.0 * cfg.dt);
    CHECK(std::abs(next.mode(3, 0).real() - want) <= 1e-12);
    CHECK(std::abs(next.mode(3, 0).imag()) <= 1e-15);
}

TEST_CASE("zero data stays zero") {
    SolverConfig cfg;
    cfg.grid = grid2(16, 0.8);
    cfg.dt = 1e-2;
    SpectralField state(cfg.grid);
    for (int s = 0; s < 5; ++s) {
        state = step(state, cfg);
        for (const auto& c : state.coeffs) CHECK(std::abs(c) == 0.0);
    }
}

TEST_CASE("one step never grows the discrete L2, and matches the scheme's energy identity") {
    SolverConfig cfg;
    cfg.grid = grid2(32, 0.8);
    cfg.dt = 1e-3;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        cfg.ic.preset = "random_hk";
        cfg.ic.seed = seed;
        cfg.ic.normalize = "l2";
        SpectralField state = make_initial_condition(cfg.grid, cfg.ic);
        SpectralField next = step(state, cfg);
        const double before = l2_norm(state);
        const double after = l2_norm(next);
        CHECK(after <= before * (1.0 + 1e-10));

        // oracle: the post-state L2 recomputed from the step's own algebra,
        // |theta_hat - dt N_hat| scaled by the dissipation factor per mode
        auto [u1, u2] = riesz_velocity(state);
        RealField g1 = to_real(derivative(state, 0));
        RealField g2 = to_real(derivative(state, 1));
        RealField u1r = to_real(u1), u2r = to_real(u2);
        RealField prod(cfg.grid);
        kernels::product_sum(u1r.samples, g1.samples, u2r.samples, g2.samples, prod.samples);
        SpectralField nl = dealias(to_spectral(prod));
        nl.coeffs[0] = {0.0, 0.0};
        double sum = 0.0;
        std::array<int, 3> idx{0, 0, 0};
        for (std::size_t flat = 0; flat < state.coeffs.size(); ++flat) {
            unflatten(flat, cfg.grid, idx);
            double k2 = 0.0;
            for (int d = 0; d < 2; ++d) {
                double kd = wavenumber(idx[static_cast<std::size_t>(d)], cfg.grid.N);
                k2 += kd * kd;
            }
            const double ef = k2 == 0.0 ? 1.0 : std::exp(-std::pow(std::sqrt(k2), 0.8) * cfg.dt);
            sum += std::norm(ef * (state.coeffs[flat] - cfg.dt * nl.coeffs[flat]));
        }
        const double oracle = std::sqrt(std::pow(cfg.grid.L, 2) * sum);
        CHECK(after == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("t_end = 0 keeps only the initial snapshot") {
    SolverConfig cfg;
    cfg.grid = grid2(16, 1.0);
    cfg.t_end = 0.0;
    cfg.ic.preset = "shear";
    Trajectory traj = run(cfg);
    CHECK(traj.snapshots.size() == 1);
    CHECK(traj.norms.size() == 1);
    CHECK(traj.status == RunStatus::Completed);
}

TEST_CASE("maximum principle on a vortex run") {
    SolverConfig cfg;
    cfg.grid = grid2(128, 0.7);
    cfg.dt = 1e-3;
    cfg.t_end = 0.4;
    cfg.snapshot_dt = 0.05;
    cfg.ic.preset = "gaussian_vortices";
    cfg.ic.normalize = "sup";
    cfg.seed = 42;
    Trajectory traj = run(cfg);
    REQUIRE(traj.status == RunStatus::Completed);
    double prev = traj.norms.front().sup;
    for (const auto& r : traj.norms) {
        CHECK(r.sup <= prev * (1.0 + 1e-8));
        prev = r.sup;
    }
}

TEST_CASE("identical seed gives a bit-identical norm series") {
    SolverConfig cfg;
    cfg.grid = grid2(64, 0.9);
    cfg.dt = 2e-3;
    cfg.t_end = 0.1;
    cfg.ic.preset = "gaussian_vortices";
    cfg.seed = 7;
    Trajectory a = run(cfg);
    Trajectory b = run(cfg);
    REQUIRE(a.norms.size() == b.norms.size());
    for (std::size_t i = 0; i < a.norms.size(); ++i) {
        CHECK(std::memcmp(&a.norms[i].l2, &b.norms[i].l2, sizeof(double)) == 0);
        CHECK(std::memcmp(&a.norms[i].sup, &b.norms[i].sup, sizeof(double)) == 0);
        CHECK(std::memcmp(&a.norms[i].h_alpha_half, &b.norms[i].h_alpha_half, sizeof(double)) == 0);
    }
}

TEST_CASE("mean mode is conserved to machine precision") {
    SolverConfig cfg;
    cfg.grid = grid2(64, 0.75);
    cfg.dt = 2e-3;
    cfg.t_end = 0.2;
    cfg.ic.preset = "gaussian_vortices";
    cfg.seed = 3;
    Trajectory traj = run(cfg);
    auto mean = [](const RealField& f) {
        double s = 0.0;
        for (double v : f.samples) s += v;
        return s / static_cast<double>(f.samples.size());
    };
    const double m0 = mean(traj.snapshots.front().field);
    for (const auto& s : traj.snapshots) CHECK(std::abs(mean(s.field) - m0) <= 1e-13);
}

TEST_CASE("level-set energy check: empty truncation and the linear-balance oracle") {
    SolverConfig cfg;
    cfg.grid = grid2(64, 0.9);
    cfg.dt = 1e-3;
    cfg.t_end = 0.2;
    cfg.snapshot_dt = 0.01;
    cfg.flow_scale = 0.0;
    cfg.ic.preset = "random_hk";
    cfg.ic.params["k_max"] = 10;
    cfg.seed = 11;
    Trajectory traj = run(cfg);

    const double sup0 = traj.norms.front().sup;
    auto empty = level_set_energy_check(traj, 2.0 * sup0, 0.05, 0.15);
    CHECK(empty.lhs == 0.0);
    CHECK(empty.dissipation == 0.0);
    CHECK(empty.satisfied);

    // lambda = 0 on the linear flow: the check from solver snapshots agrees
    // with the same quantities computed from the closed-form per-mode decay
    auto res = level_set_energy_check(traj, 0.0, 0.05, 0.15);
    SpectralField F0 = to_spectral(traj.snapshots.front().field);
    auto decayed = [&](double t) {
        SpectralField F = F0;
        std::array<int, 3> idx{0, 0, 0};
        for (std::size_t flat = 0; flat < F.coeffs.size(); ++flat) {
            unflatten(flat, cfg.grid, idx);
            double k2 = 0.0;
            for (int d = 0; d < 2; ++d) {
                double kd = wavenumber(idx[static_cast<std::size_t>(d)], cfg.grid.N);
                k2 += kd * kd;
            }
            if (k2 > 0.0) F.coeffs[flat] *= std::exp(-std::pow(std::sqrt(k2), 0.9) * t);
        }
        return to_real(F);
    };
    auto truncated_l2sq = [&](const RealField& f) {
        double s = 0.0;
        for (double v : f.samples) s += std::max(v, 0.0) * std::max(v, 0.0);
        return f.grid.cell_volume() * s;
    };
    const double lhs_oracle = truncated_l2sq(decayed(0.15)) - truncated_l2sq(decayed(0.05));
    CHECK(res.lhs == doctest::Approx(lhs_oracle).epsilon(1e-8));
    CHECK(res.satisfied);

    // the scheme's full-field L2 balance closes exactly through the
    // dissipation increments of the norm series
    double acc = 0.0;
    const double l2sq0 = traj.norms.front().l2 * traj.norms.front().l2;
    for (std::size_t i = 1; i < traj.norms.size(); ++i) {
        acc += traj.norms[i].dissipation_increment;
        const double l2sq = traj.norms[i].l2 * traj.norms[i].l2;
        CHECK(std::abs(l2sq - l2sq0 + 2.0 * acc) <= 1e-8 * l2sq0);
    }

    CHECK_THROWS_AS((void)level_set_energy_check(traj, 0.0, 0.051234, 0.15), validation_error);
}

TEST_CASE("level-set inequality holds on nonlinear runs at mid levels") {
    SolverConfig cfg;
    cfg.grid = grid2(64, 0.8);
    cfg.dt = 2e-3;
    cfg.t_end = 0.3;
    cfg.snapshot_dt = 0.05;
    cfg.ic.preset = "gaussian_vortices";
    cfg.ic.normalize = "sup";
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        cfg.seed = seed;
        Trajectory traj = run(cfg);
        REQUIRE(traj.status == RunStatus::Completed);
        const double sup0 = traj.norms.front().sup;
        for (double frac : {0.0, 0.25, 0.5}) {
            auto res = level_set_energy_check(traj, frac * sup0, 0.05, 0.3);
            CHECK(res.satisfied);
        }
    }
}

TEST_CASE("decay fit flags a pure exponential as non-power-law") {
    SolverConfig cfg;
    cfg.grid = grid2(32, 1.0);
    cfg.dt = 5e-3;
    cfg.t_end = 1.0;
    cfg.flow_scale = 0.0;
    cfg.ic.preset = "shear";
    cfg.ic.params["k1"] = 2;
    Trajectory traj = run(cfg);
    auto fit = decay_exponent(traj, 0.05, 1.0);
    CHECK(!fit.power_law);

    CHECK_THROWS_AS((void)decay_exponent(traj, 0.5, 0.1), validation_error);
}

TEST_CASE("rescaled data reproduces the rescaled linear flow") {
    // theta_r(x) = r^{-alpha} theta(r x) on the grid with period L/r evolves,
    // for the pure dissipative flow, into r^{-alpha} theta(r x, r^alpha t)
    const double alpha = 0.75, r = 2.0, t = 0.11;
    SolverConfig base;
    base.grid = grid2(64, alpha);
    base.flow_scale = 0.0;
    base.dt = t / 64.0;
    base.t_end = std::pow(r, alpha) * t;
    base.snapshot_dt = 0.0;
    base.ic.preset = "random_hk";
    base.ic.params["k_max"] = 9;
    base.seed = 5;
    // adjust dt so both runs land exactly on their end times
    base.dt = base.t_end / 64.0;
    Trajectory coarse = run(base);

    SolverConfig scaled = base;
    scaled.grid.L = base.grid.L / r;
    scaled.t_end = t;
    scaled.dt = t / 64.0;
    // same integer-mode coefficients on the shrunken torus = theta(r x)
    Trajectory fine = run(scaled);

    const RealField& a = coarse.snapshots.back().field; // theta(., r^alpha t)
    const RealField& b = fine.snapshots.back().field;   // theta_r up to r^{-alpha}
    double worst = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        worst = std::max(worst, std::abs(b.samples[i] - a.samples[i]));
    // identical sample alignment: x'_j = x_j / r, and theta_r(x'_j) =
    // r^{-alpha} theta(x_j); both runs are exact per mode, so agreement is
    // at roundoff after removing the common r^{-alpha} factor
    CHECK(worst <= 1e-12);
}

TEST_CASE("CFL violation refuses the step and is reported by run()") {
    SolverConfig cfg;
    cfg.grid = grid2(64, 1.0);
    cfg.dt = 10.0; // absurd
    cfg.t_end = 20.0;
    cfg.ic.preset = "gaussian_vortices";
    cfg.ic.normalize = "sup";
    cfg.seed = 2;
    SpectralField state = make_initial_condition(cfg.grid, cfg.ic);
    CHECK_THROWS_AS((void)step(state, cfg), numerical_error);

    Trajectory traj = run(cfg);
    CHECK(traj.status == RunStatus::CflRefused);
    CHECK(traj.snapshots.size() == 1); // last valid (initial) snapshot kept
}

TEST_CASE("config validation") {
    SolverConfig cfg;
    cfg.grid = grid2(32, 1.0);
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), validation_error);
    cfg.dt = 1e-3;
    cfg.flow_scale = 1.5;
    CHECK_THROWS_AS(cfg.validate(), validation_error);
    cfg.flow_scale = 1.0;
    cfg.scheme = "rk4";
    CHECK_THROWS_AS(cfg.validate(), validation_error);
}

TEST_CASE("second-order scheme agrees with a small-dt reference better than first order") {
    SolverConfig ref;
    ref.grid = grid2(64, 1.0);
    ref.dt = 1.25e-4;
    ref.t_end = 0.02;
    ref.snapshot_dt = 0.0;
    ref.ic.preset = "gaussian_vortices";
    ref.ic.normalize = "sup";
    ref.seed = 9;
    Trajectory fine = run(ref);

    auto coarse_error = [&](const std::string& scheme) {
        SolverConfig c = ref;
        c.scheme = scheme;
        c.dt = 2e-3;
        Trajectory traj = run(c);
        const auto& a = traj.snapshots.back().field;
        const auto& b = fine.snapshots.back().field;
        double worst = 0.0;
        for (std::size_t i = 0; i < a.samples.size(); ++i)
            worst = std::max(worst, std::abs(a.samples[i] - b.samples[i]));
        return worst;
    };
    const double e1 = coarse_error("imex1");
    const double e2 = coarse_error("imex2");
    CHECK(e2 < 0.25 * e1);
}
