#include "sqg/solver.hpp"

#include "sqg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace sqg {

void SolverConfig::validate() const {
    grid.validate();
    if (!(dt > 0.0)) throw validation_error("SolverConfig: dt must be positive");
    if (!(t_end >= 0.0)) throw validation_error("SolverConfig: t_end must be >= 0");
    if (flow_scale < 0.0 || flow_scale > 1.0)
        throw validation_error("SolverConfig: flow_scale must lie in [0,1]");
    if (scheme != "imex1" && scheme != "imex2")
        throw validation_error("SolverConfig: scheme must be imex1 or imex2");
    if (flow_scale > 0.0 && grid.n != 2)
        throw validation_error("SolverConfig: advection requires n == 2");
}

namespace {

/// exp(-|kappa|^alpha dt) per mode.
std::vector<double> dissipation_factor(const GridSpec& g, double dt) {
    std::vector<double> f(g.size());
    const double ks = g.k_scale();
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        unflatten(flat, g, idx);
        double k2 = 0.0;
        for (int d = 0; d < g.n; ++d) {
            double kd = wavenumber(idx[static_cast<std::size_t>(d)], g.N);
            k2 += kd * kd;
        }
        f[flat] = k2 == 0.0 ? 1.0 : std::exp(-std::pow(ks * std::sqrt(k2), g.alpha) * dt);
    }
    return f;
}

struct NonlinearTerm {
    SpectralField value; // dealiased spectral u . grad(theta), zero mean
    double max_speed = 0.0;
};

NonlinearTerm nonlinear_term(const SpectralField& state) {
    NonlinearTerm out{SpectralField(state.grid), 0.0};
    auto [u1s, u2s] = riesz_velocity(state);
    RealField u1 = to_real(u1s);
    RealField u2 = to_real(u2s);
    RealField g1 = to_real(derivative(state, 0));
    RealField g2 = to_real(derivative(state, 1));
    out.max_speed = std::max(kernels::max_abs(u1.samples), kernels::max_abs(u2.samples));
    RealField prod(state.grid);
    kernels::product_sum(u1.samples, g1.samples, u2.samples, g2.samples, prod.samples);
    out.value = dealias(to_spectral(prod));
    out.value.coeffs[0] = {0.0, 0.0}; // mean of u . grad(theta) vanishes
    return out;
}

void check_finite(const SpectralField& F, double t) {
    for (const auto& c : F.coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw numerical_error("blowup", "non-finite state at t = " + std::to_string(t));
}

void check_cfl(const SolverConfig& cfg, double max_speed, double t) {
    if (cfg.flow_scale <= 0.0) return;
    const double effective = cfg.flow_scale * max_speed;
    if (effective <= 0.0) return;
    const double dt_max = 0.5 * cfg.grid.dx() / effective;
    if (cfg.dt > dt_max)
        throw numerical_error("cfl", "dt = " + std::to_string(cfg.dt) + " exceeds CFL bound " +
                                         std::to_string(dt_max) + " at t = " + std::to_string(t));
}

SpectralField step_at(const SpectralField& state, const SolverConfig& cfg, double t) {
    SpectralField next = state;
    const std::vector<double> ef = dissipation_factor(cfg.grid, cfg.dt);
    if (cfg.flow_scale > 0.0) {
        NonlinearTerm nl = nonlinear_term(state);
        check_cfl(cfg, nl.max_speed, t);
        const double a = cfg.flow_scale * cfg.dt;
        if (cfg.scheme == "imex1") {
            for (std::size_t i = 0; i < next.coeffs.size(); ++i)
                next.coeffs[i] = ef[i] * (state.coeffs[i] - a * nl.value.coeffs[i]);
        } else {
            // predictor / trapezoidal corrector on the advection term
            SpectralField pred(cfg.grid);
            pred.coeffs.resize(next.coeffs.size());
            for (std::size_t i = 0; i < next.coeffs.size(); ++i)
                pred.coeffs[i] = ef[i] * (state.coeffs[i] - a * nl.value.coeffs[i]);
            NonlinearTerm nl2 = nonlinear_term(pred);
            for (std::size_t i = 0; i < next.coeffs.size(); ++i)
                next.coeffs[i] = ef[i] * (state.coeffs[i] - 0.5 * a * nl.value.coeffs[i]) -
                                 0.5 * a * nl2.value.coeffs[i];
        }
    } else {
        kernels::cmul_real(next.coeffs, ef);
    }
    check_finite(next, t + cfg.dt);
    return next;
}

/// 0.5 * sum_k (1 - exp(-2 |kappa|^alpha dt)) |c_k|^2 * L^n: the exact
/// H^{alpha/2} dissipation integral of the integrating-factor flow over one
/// step starting from c.
double dissipation_increment(const SpectralField& state, const SolverConfig& cfg,
                             const std::vector<double>& ef) {
    std::vector<double> w(ef.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.5 * (1.0 - ef[i] * ef[i]);
    return std::pow(cfg.grid.L, cfg.grid.n) * kernels::weighted_mod2_sum(state.coeffs, w);
}

} // namespace

SpectralField step(const SpectralField& state, const SolverConfig& cfg) {
    cfg.validate();
    require_same_grid(state.grid, cfg.grid, "step");
    return step_at(state, cfg, 0.0);
}

Trajectory run(const SolverConfig& cfg) {
    cfg.validate();
    Trajectory traj;
    traj.grid = cfg.grid;

    IcSpec ic = cfg.ic;
    if (cfg.seed != 0) ic.seed = cfg.seed;
    SpectralField state = make_initial_condition(cfg.grid, ic);

    std::set<double> wanted(cfg.snapshot_times.begin(), cfg.snapshot_times.end());

    const std::vector<double> ef = dissipation_factor(cfg.grid, cfg.dt);
    const long n_steps = cfg.t_end <= 0.0 ? 0 : static_cast<long>(std::llround(cfg.t_end / cfg.dt));

    auto record_norms = [&](double t, double incr) {
        RealField f = to_real(state);
        Norms nm = norms(f, state);
        traj.norms.push_back({t, nm.l2, nm.sup, nm.h_alpha_half, incr});
    };
    auto record_snapshot = [&](double t) { traj.snapshots.push_back({t, to_real(state)}); };

    record_norms(0.0, 0.0);
    record_snapshot(0.0);

    double next_cadence = cfg.snapshot_dt > 0.0 ? cfg.snapshot_dt : std::numeric_limits<double>::infinity();
    for (long s = 0; s < n_steps; ++s) {
        const double t0 = static_cast<double>(s) * cfg.dt;
        const double t1 = static_cast<double>(s + 1) * cfg.dt;
        double incr = dissipation_increment(state, cfg, ef);
        try {
            state = step_at(state, cfg, t0);
        } catch (const numerical_error& e) {
            traj.status = std::string(e.kind()) == "cfl" ? RunStatus::CflRefused : RunStatus::BlewUp;
            traj.t_fail = t0;
            traj.fail_reason = e.what();
            return traj;
        }
        record_norms(t1, incr);

        bool want = false;
        if (t1 + 1e-12 >= next_cadence) {
            want = true;
            while (next_cadence <= t1 + 1e-12) next_cadence += cfg.snapshot_dt;
        }
        for (auto it = wanted.begin(); it != wanted.end();) {
            if (*it <= t1 + 1e-9) {
                want = true;
                it = wanted.erase(it);
            } else {
                break;
            }
        }
        if (want || s == n_steps - 1) record_snapshot(t1);
    }
    return traj;
}

const Snapshot& Trajectory::at_time(double t) const {
    for (const auto& s : snapshots)
        if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
    throw validation_error("Trajectory: no snapshot at t = " + std::to_string(t));
}

bool Trajectory::has_time(double t) const {
    for (const auto& s : snapshots)
        if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return true;
    return false;
}

LevelSetEnergyResult level_set_energy_check(const Trajectory& traj, double lambda, double t1,
                                            double t2, double tol_rel) {
    if (!(t1 < t2)) throw validation_error("level_set_energy_check: need t1 < t2");
    if (lambda < 0.0) throw validation_error("level_set_energy_check: lambda must be >= 0");
    const Snapshot& s1 = traj.at_time(t1);
    const Snapshot& s2 = traj.at_time(t2);

    auto truncate = [&](const RealField& f) {
        RealField out = f;
        for (auto& v : out.samples) v = std::max(v - lambda, 0.0);
        return out;
    };
    auto l2sq = [](const RealField& f) {
        return f.grid.cell_volume() * kernels::sum_squares(f.samples);
    };

    LevelSetEnergyResult res;
    res.lhs = l2sq(truncate(s2.field)) - l2sq(truncate(s1.field));

    // trapezoid of the truncated dissipation over snapshots inside [t1, t2]
    std::vector<std::pair<double, double>> series; // (t, |Lambda^{a/2} theta_lambda|^2)
    for (const auto& s : traj.snapshots) {
        if (s.t < t1 - 1e-12 || s.t > t2 + 1e-12) continue;
        RealField tl = truncate(s.field);
        double h = sobolev_seminorm(to_spectral(tl), traj.grid.alpha);
        series.emplace_back(s.t, h * h);
    }
    if (series.size() < 2) throw validation_error("level_set_energy_check: missing snapshots");
    double D = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i)
        D += 0.5 * (series[i].second + series[i - 1].second) * (series[i].first - series[i - 1].first);
    res.dissipation = D;
    res.rhs = -2.0 * D;

    const double base = traj.norms.empty() ? 1.0 : traj.norms.front().l2;
    res.tolerance = tol_rel * base * base;
    res.satisfied = res.lhs + 2.0 * D <= res.tolerance;
    res.paper_form_satisfied = res.lhs - 2.0 * D <= res.tolerance;
    return res;
}

DecayFit decay_exponent(const Trajectory& traj, double t_a, double t_b) {
    if (!(t_a > 0.0) || !(t_b > t_a)) throw validation_error("decay_exponent: bad window");
    std::vector<double> lt, ls, supv, tv;
    for (const auto& r : traj.norms) {
        if (r.t < t_a - 1e-12 || r.t > t_b + 1e-12) continue;
        if (!(r.sup > 0.0)) throw validation_error("decay_exponent: sup must stay positive");
        lt.push_back(std::log(r.t));
        ls.push_back(std::log(r.sup));
        supv.push_back(r.sup);
        tv.push_back(r.t);
    }
    if (lt.size() < 4) throw validation_error("decay_exponent: window too small");

    auto fit = [](const std::vector<double>& x, const std::vector<double>& y, std::size_t b,
                  std::size_t e) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(e - b);
        for (std::size_t i = b; i < e; ++i) {
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };

    DecayFit out;
    out.fitted_slope = fit(lt, ls, 0, lt.size());
    out.slope_first_half = fit(lt, ls, 0, lt.size() / 2);
    out.slope_second_half = fit(lt, ls, lt.size() / 2, lt.size());
    const double dev = std::abs(out.slope_first_half - out.slope_second_half);
    out.power_law = dev <= std::max(0.35 * std::abs(out.fitted_slope), 0.25);

    const double theta0_l2 = traj.norms.front().l2;
    const double p = traj.grid.n / (2.0 * traj.grid.alpha);
    for (std::size_t i = 0; i < tv.size(); ++i)
        out.C_estimate = std::max(out.C_estimate, std::pow(tv[i], p) * supv[i] / theta0_l2);
    return out;
}

} // namespace sqg
