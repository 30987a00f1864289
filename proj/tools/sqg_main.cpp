// Command-line front end: simulation, extension, De Giorgi diagnostics,
// constants audit, decay fits and the verification families.

#include "sqg/barrier.hpp"
#include "sqg/constants.hpp"
#include "sqg/degiorgi.hpp"
#include "sqg/extension.hpp"
#include "sqg/fft.hpp"
#include "sqg/io.hpp"
#include "sqg/kernels.hpp"
#include "sqg/solver.hpp"
#include "sqg/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
    bool json_errors = false;
    int jobs = 0;
};

json ledger_to_json(const sqg::ConstantsLedger& led) {
    json j;
    j["alpha"] = led.alpha;
    j["epsilon"] = led.epsilon;
    if (led.alpha0) j["alpha0"] = *led.alpha0;
    j["c0"] = led.c0;
    j["r0"] = led.r0;
    j["a"] = led.a;
    j["a_max"] = led.a_max;
    j["lambda"] = led.lambda;
    j["lambda_source"] = led.lambda_source;
    j["lambda_starstar"] = led.lambda_starstar;
    j["eta"] = led.eta;
    j["C1"] = led.C1;
    j["C_alpha"] = led.C_alpha;
    j["K_plus"] = led.K_plus;
    j["q4_measure"] = led.q4_measure;
    j["epsilon_tilde"] = led.epsilon_tilde;
    j["shrink_radius"] = led.shrink_radius;
    if (led.alpha0) {
        j["A_lower"] = led.A_lower;
        j["B_upper"] = led.B_upper;
    }
    json verdicts = json::array();
    for (const auto& v : led.verdicts) {
        verdicts.push_back({{"name", v.name},
                            {"lhs", v.lhs},
                            {"rhs", v.rhs},
                            {"holds", v.holds},
                            {"slack", v.slack}});
    }
    j["verdicts"] = verdicts;
    j["chain_holds"] = led.chain_holds;
    return j;
}

json norms_tail_json(const sqg::Trajectory& traj) {
    const auto& last = traj.norms.back();
    return json{{"t", last.t}, {"l2", last.l2}, {"sup", last.sup},
                {"h_alpha_half", last.h_alpha_half}};
}

std::string status_string(sqg::RunStatus s) {
    switch (s) {
        case sqg::RunStatus::Completed: return "completed";
        case sqg::RunStatus::BlewUp: return "blow_up";
        case sqg::RunStatus::CflRefused: return "cfl_refused";
    }
    return "unknown";
}

int print_checks(const std::vector<sqg::CheckResult>& checks, bool as_json) {
    bool ok = true;
    if (as_json) {
        json arr = json::array();
        for (const auto& c : checks) {
            arr.push_back({{"name", c.name},
                           {"value", c.value},
                           {"threshold", c.threshold},
                           {"pass", c.pass}});
            ok = ok && c.pass;
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const auto& c : checks) {
            std::printf("[%s] %-55s value=%.6g threshold=%.3g\n", c.pass ? "PASS" : "FAIL",
                        c.name.c_str(), c.value, c.threshold);
            ok = ok && c.pass;
        }
    }
    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral dissipative advection solver and regularity diagnostics"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_flag("--json", g.json_errors, "machine-readable output and errors");
    app.add_option("--jobs", g.jobs, "worker threads (default: OpenMP runtime)");

    // ---- simulate ----
    std::string sim_config;
    bool sim_dump_snapshots = false;
    auto* sim = app.add_subcommand("simulate", "run the solver from a JSON config");
    sim->add_option("--config", sim_config, "run configuration (sqg-run/1)")->required();
    sim->add_flag("--snapshots", sim_dump_snapshots, "write every snapshot as a checkpoint");

    // ---- extend ----
    std::string ext_input, ext_output;
    int ext_levels = 48;
    double ext_zmin = 1e-4, ext_zmax = 8.0, ext_L = sqg::kTwoPi;
    bool ext_trace = false;
    auto* ext = app.add_subcommand("extend", "lift a checkpoint to theta*(x,z)");
    ext->add_option("--input", ext_input, "field checkpoint")->required();
    ext->add_option("--out", ext_output, "report path (default: stdout)");
    ext->add_option("--levels", ext_levels, "z levels");
    ext->add_option("--z-min", ext_zmin, "smallest level");
    ext->add_option("--z-max", ext_zmax, "largest level");
    ext->add_option("--domain-length", ext_L, "torus period of the checkpointed grid");
    ext->add_flag("--trace", ext_trace, "also compute the weighted normal trace");

    // ---- diagnose ----
    auto* diag = app.add_subcommand("diagnose", "De Giorgi diagnostics");
    diag->require_subcommand(1);

    std::string osc_config, osc_out;
    double osc_rho = 0.0, osc_rbase = 1.0;
    int osc_kmax = 8;
    auto* osc = diag->add_subcommand("oscillation", "oscillation decay over nested cylinders");
    osc->add_option("--config", osc_config, "run configuration")->required();
    osc->add_option("--rho", osc_rho, "shrink factor (default: c0^2 a / 128)");
    osc->add_option("--r-base", osc_rbase, "outermost radius");
    osc->add_option("--k-max", osc_kmax, "ladder length");
    osc->add_option("--out", osc_out, "report path (default: stdout)");

    std::string ls_config, ls_out;
    double ls_radius = 4.0;
    auto* ls = diag->add_subcommand("levelsets", "weighted level-set measures over a cylinder");
    ls->add_option("--config", ls_config, "run configuration")->required();
    ls->add_option("--radius", ls_radius, "cylinder radius");
    ls->add_option("--out", ls_out, "report path (default: stdout)");

    std::string iso_config, iso_out;
    double iso_t = -1.0, iso_cap = 1.0;
    auto* iso = diag->add_subcommand("isoperimetric", "intermediate-set inequality on a slice");
    iso->add_option("--config", iso_config, "run configuration")->required();
    iso->add_option("--time", iso_t, "slice time (default: final)");
    iso->add_option("--energy-cap", iso_cap, "floor for C**");
    iso->add_option("--out", iso_out, "report path (default: stdout)");

    double rec_C = 1.0, rec_beta = 2.0, rec_seed = 0.5;
    int rec_kmax = 400;
    std::string rec_out;
    auto* rec = diag->add_subcommand("recursion", "superlinear recursion A_k = C^k A_{k-3}^beta");
    rec->add_option("--growth", rec_C, "growth constant C");
    rec->add_option("--beta", rec_beta, "superlinear exponent");
    rec->add_option("--seed-a", rec_seed, "uniform seed magnitude");
    rec->add_option("--k-max", rec_kmax, "iteration budget");
    rec->add_option("--out", rec_out, "report path (default: stdout)");

    // ---- constants ----
    double con_alpha = 0.75, con_c0 = -1.0, con_alpha0 = -1.0, con_afrac = 0.99, con_cu = 1.0;
    bool con_barrier = false;
    std::string con_out, con_sweep;
    auto* con = app.add_subcommand("constants", "explicit constants audit");
    con->add_option("--alpha", con_alpha, "dissipation order in (0,1)");
    con->add_option("--c0", con_c0, "inner radius (default: window midpoint)");
    con->add_option("--alpha0", con_alpha0, "lower order for the modified-flow constants");
    con->add_option("--a-frac", con_afrac, "a as a fraction of 4/2^{1/alpha}");
    con->add_option("--cu", con_cu, "velocity bound C_u");
    con->add_flag("--barrier", con_barrier, "estimate lambda from the barrier quadrature");
    con->add_option("--sweep", con_sweep, "alpha sweep lo:hi:step (c0 at each midpoint)");
    con->add_option("--out", con_out, "report path (default: stdout)");

    // ---- decay ----
    std::string dec_config, dec_out;
    double dec_ta = 0.02, dec_tb = 0.5;
    auto* dec = app.add_subcommand("decay", "sup-norm decay fit over a window");
    dec->add_option("--config", dec_config, "run configuration")->required();
    dec->add_option("--t-a", dec_ta, "window start");
    dec->add_option("--t-b", dec_tb, "window end");
    dec->add_option("--out", dec_out, "report path (default: stdout)");

    // ---- verify ----
    double ver_alpha = 0.8;
    int ver_n = 64, ver_seeds = 10;
    auto* ver = app.add_subcommand("verify", "identity verification families");
    ver->require_subcommand(1);
    ver->add_option("--alpha", ver_alpha, "dissipation order");
    ver->add_option("--n", ver_n, "grid points per axis");
    ver->add_option("--seeds", ver_seeds, "random fields per family");
    auto* ver_riesz = ver->add_subcommand("riesz", "velocity identities");
    auto* ver_ext = ver->add_subcommand("extension-identity", "extension multiplier identities");
    auto* ver_neu = ver->add_subcommand("neumann", "weighted normal trace");
    auto* ver_energy = ver->add_subcommand("energy", "scheme energy behaviour");
    auto* ver_all = ver->add_subcommand("all", "all four families");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (g.jobs > 0) omp_set_num_threads(g.jobs);

    auto emit = [&](const json& report, const std::string& path) {
        if (path.empty()) {
            std::cout << report.dump(2) << "\n";
        } else {
            sqg::write_report(path, report);
            if (!g.json_errors) std::cout << "wrote " << path << "\n";
        }
    };

    try {
        if (*sim) {
            sqg::RunConfigFile cfg = sqg::load_run_config(sim_config);
            fs::create_directories(cfg.output_dir);
            sqg::Trajectory traj = sqg::run(cfg.solver);
            const fs::path dir = cfg.output_dir;
            sqg::write_norms_csv(dir / (cfg.prefix + "_norms.csv"), traj.norms);
            sqg::write_checkpoint(dir / (cfg.prefix + "_final.sqgf"),
                                  traj.snapshots.back().field, traj.snapshots.back().t);
            if (sim_dump_snapshots) {
                for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
                    char name[64];
                    std::snprintf(name, sizeof name, "_snap_%04zu.sqgf", i);
                    sqg::write_checkpoint(dir / (cfg.prefix + name), traj.snapshots[i].field,
                                          traj.snapshots[i].t);
                }
            }
            json results{{"status", status_string(traj.status)},
                         {"steps", traj.norms.size() - 1},
                         {"snapshots", traj.snapshots.size()},
                         {"final", norms_tail_json(traj)}};
            if (traj.status != sqg::RunStatus::Completed) {
                results["t_fail"] = traj.t_fail;
                results["reason"] = traj.fail_reason;
            }
            json report = sqg::make_report(
                "simulate",
                {{"config", sim_config}, {"seed", cfg.solver.seed}, {"alpha", cfg.solver.grid.alpha}},
                results);
            emit(report, (dir / (cfg.prefix + "_report.json")).string());
            return traj.status == sqg::RunStatus::Completed ? 0 : 2;
        }

        if (*ext) {
            sqg::Checkpoint cp = sqg::read_checkpoint(ext_input, ext_L);
            sqg::RealField f(cp.grid, cp.samples);
            sqg::SpectralField F = sqg::to_spectral(f);
            auto ladder = sqg::geometric_ladder(ext_zmin, ext_zmax, ext_levels);
            sqg::ExtensionField E = sqg::extend(F, ladder, true);
            json per_level = json::array();
            for (std::size_t j = 0; j < E.level_count(); ++j) {
                std::span<const double> vals(E.level(j), E.grid.size());
                double sup = 0.0, ss = 0.0;
                for (double v : vals) {
                    sup = std::max(sup, std::abs(v));
                    ss += v * v;
                }
                per_level.push_back({{"z", E.z_levels[j]},
                                     {"sup", sup},
                                     {"l2", std::sqrt(cp.grid.cell_volume() * ss)}});
            }
            json results{{"levels", per_level},
                         {"dirichlet_energy", sqg::weighted_dirichlet_energy(E)}};
            if (ext_trace) {
                sqg::NeumannRatios r = sqg::neumann_mode_ratios(F, E);
                results["trace"] = {{"d_alpha", r.d_alpha}, {"spread", r.spread},
                                    {"modes", r.modes}};
            }
            emit(sqg::make_report("extend",
                                  {{"input", ext_input},
                                   {"alpha", cp.grid.alpha},
                                   {"z_min", ext_zmin},
                                   {"z_max", ext_zmax},
                                   {"levels", ext_levels}},
                                  results),
                 ext_output);
            return 0;
        }

        if (*osc) {
            sqg::RunConfigFile cfg = sqg::load_run_config(osc_config);
            sqg::Trajectory traj = sqg::run(cfg.solver);
            if (traj.status != sqg::RunStatus::Completed)
                throw sqg::numerical_error("run", "solver run failed: " + traj.fail_reason);
            auto ladder = sqg::geometric_ladder(cfg.z_min, cfg.z_max, cfg.z_count);
            auto ext_traj = sqg::ExtendedTrajectory::from_trajectory(traj, ladder);
            double rho = osc_rho;
            if (rho <= 0.0) {
                sqg::DeriveOptions dopts;
                dopts.a_frac = cfg.a_frac;
                rho = sqg::derive(cfg.solver.grid.alpha, cfg.c0, dopts).shrink_radius;
            }
            auto seq = sqg::oscillation_decay_sequence(ext_traj, rho, osc_kmax, osc_rbase,
                                                       cfg.solver.t_end);
            json entries = json::array();
            for (std::size_t i = 0; i < seq.radii.size(); ++i)
                entries.push_back({{"r", seq.radii[i]}, {"osc", seq.oscs[i]}});
            json results{{"entries", entries},
                         {"floor_truncated", seq.floor_truncated},
                         {"fitted_exponent", seq.fit_exponent(0)},
                         {"fitted_exponent_tail", seq.fit_exponent(2)}};
            emit(sqg::make_report("oscillation",
                                  {{"config", osc_config}, {"rho", rho}, {"r_base", osc_rbase}},
                                  results),
                 osc_out);
            return 0;
        }

        if (*ls) {
            sqg::RunConfigFile cfg = sqg::load_run_config(ls_config);
            sqg::Trajectory traj = sqg::run(cfg.solver);
            if (traj.status != sqg::RunStatus::Completed)
                throw sqg::numerical_error("run", "solver run failed: " + traj.fail_reason);
            auto ladder = sqg::geometric_ladder(cfg.z_min, cfg.z_max, cfg.z_count);
            auto ext_traj = sqg::ExtendedTrajectory::from_trajectory(traj, ladder);
            sqg::Cylinder cyl{ls_radius, cfg.solver.t_end, cfg.solver.grid.alpha};
            sqg::Slab slab = ext_traj.slab(cyl);
            auto st = sqg::level_set_stats(slab, 1.0 - cfg.solver.grid.alpha);
            json results{{"measA", st.measA}, {"measB", st.measB}, {"measC", st.measC},
                         {"S", st.S},         {"dirichlet", st.dirichlet}, {"total", st.total},
                         {"K_plus", sqg::k_plus(std::max(st.S, 1e-12), st.total)}};
            emit(sqg::make_report("levelsets", {{"config", ls_config}, {"radius", ls_radius}},
                                  results),
                 ls_out);
            return 0;
        }

        if (*iso) {
            sqg::RunConfigFile cfg = sqg::load_run_config(iso_config);
            sqg::Trajectory traj = sqg::run(cfg.solver);
            if (traj.status != sqg::RunStatus::Completed)
                throw sqg::numerical_error("run", "solver run failed: " + traj.fail_reason);
            const double t = iso_t < 0.0 ? traj.snapshots.back().t : iso_t;
            auto ladder = sqg::geometric_ladder(cfg.z_min, cfg.z_max, cfg.z_count);
            auto ext_traj = sqg::ExtendedTrajectory::from_trajectory(traj, ladder);
            sqg::Cylinder cyl{4.0, std::max(t, std::pow(4.0, cfg.solver.grid.alpha)),
                              cfg.solver.grid.alpha};
            sqg::Slab slab = ext_traj.slab(cyl, 1);
            auto res = sqg::isoperimetric_check(slab, 1.0 - cfg.solver.grid.alpha, iso_cap);
            json results{{"lhs", res.lhs},     {"rhs", res.rhs},    {"satisfied", res.satisfied},
                         {"Cstar", res.Cstar}, {"energy", res.energy},
                         {"fractions", {{"A", res.fracA}, {"B", res.fracB}, {"C", res.fracC}}}};
            emit(sqg::make_report("isoperimetric", {{"config", iso_config}, {"time", t}}, results),
                 iso_out);
            return 0;
        }

        if (*rec) {
            sqg::RecursionSpec spec;
            spec.C = rec_C;
            spec.beta = rec_beta;
            spec.seedA = {rec_seed, rec_seed, rec_seed};
            spec.k_max = rec_kmax;
            auto res = sqg::degiorgi_recursion(spec);
            json results{{"converges", res.converges},
                         {"threshold_found", res.threshold_found},
                         {"threshold_epsilon0", res.threshold_epsilon0},
                         {"outcome", res.outcome == sqg::RecursionOutcome::Converged   ? "converged"
                                     : res.outcome == sqg::RecursionOutcome::Diverged ? "diverged"
                                                                                      : "undetermined"}};
            emit(sqg::make_report("recursion",
                                  {{"growth", rec_C}, {"beta", rec_beta}, {"seed", rec_seed},
                                   {"k_max", rec_kmax}},
                                  results),
                 rec_out);
            return 0;
        }

        if (*con) {
            auto audit_one = [&](double alpha, std::optional<double> c0_opt) {
                sqg::C0Window win = sqg::admissible_c0(
                    alpha, con_alpha0 > 0.0 ? std::optional<double>(con_alpha0) : std::nullopt);
                json j{{"alpha", alpha},
                       {"window", {{"lower", win.lower},
                                   {"upper", win.upper},
                                   {"empty", win.empty()},
                                   {"width", win.width()},
                                   {"binding", win.binding}}}};
                if (win.empty()) return j;
                const double c0 = c0_opt.value_or(win.midpoint());
                sqg::DeriveOptions opts;
                if (con_alpha0 > 0.0) opts.alpha0 = con_alpha0;
                opts.a_frac = con_afrac;
                opts.C_u = con_cu;
                if (con_barrier) {
                    sqg::BarrierSpec bs;
                    bs.alpha = alpha;
                    bs.c0 = c0;
                    bs.omega = std::min(0.1, 0.5 * (1.0 - c0));
                    opts.lambda = sqg::lambda_estimate(bs);
                }
                j["ledger"] = ledger_to_json(sqg::derive(alpha, c0, opts));
                return j;
            };

            json results;
            if (!con_sweep.empty()) {
                double lo, hi, step;
                if (std::sscanf(con_sweep.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
                    step <= 0.0)
                    throw sqg::validation_error("constants: --sweep expects lo:hi:step");
                json arr = json::array();
                for (double a = lo; a <= hi + 1e-12; a += step)
                    arr.push_back(audit_one(std::min(a, hi), std::nullopt));
                results["sweep"] = arr;
            } else {
                results = audit_one(con_alpha,
                                    con_c0 > 0.0 ? std::optional<double>(con_c0) : std::nullopt);
            }
            json report = sqg::make_report(
                "constants", {{"alpha", con_alpha}, {"a_frac", con_afrac}}, results);
            if (g.json_errors && con_out.empty()) {
                std::cout << report.dump(2) << "\n";
            } else {
                emit(report, con_out);
            }
            return 0;
        }

        if (*dec) {
            sqg::RunConfigFile cfg = sqg::load_run_config(dec_config);
            sqg::Trajectory traj = sqg::run(cfg.solver);
            if (traj.status != sqg::RunStatus::Completed)
                throw sqg::numerical_error("run", "solver run failed: " + traj.fail_reason);
            auto fit = sqg::decay_exponent(traj, dec_ta, dec_tb);
            json results{{"fitted_slope", fit.fitted_slope},
                         {"C_estimate", fit.C_estimate},
                         {"power_law", fit.power_law},
                         {"slope_first_half", fit.slope_first_half},
                         {"slope_second_half", fit.slope_second_half},
                         {"expected_slope", -cfg.solver.grid.n / (2.0 * cfg.solver.grid.alpha)}};
            emit(sqg::make_report("decay",
                                  {{"config", dec_config}, {"t_a", dec_ta}, {"t_b", dec_tb}},
                                  results),
                 dec_out);
            return 0;
        }

        if (*ver) {
            std::vector<sqg::CheckResult> checks;
            auto append = [&](std::vector<sqg::CheckResult> v) {
                checks.insert(checks.end(), v.begin(), v.end());
            };
            if (*ver_riesz || *ver_all) append(sqg::verify_riesz(ver_alpha, ver_n, ver_seeds));
            if (*ver_ext || *ver_all)
                append(sqg::verify_extension_identity(ver_alpha, std::min(ver_n, 64), ver_seeds));
            if (*ver_neu || *ver_all) append(sqg::verify_neumann(ver_alpha, std::min(ver_n, 64)));
            if (*ver_energy || *ver_all)
                append(sqg::verify_energy(ver_alpha, ver_n, std::min(ver_seeds, 5)));
            return print_checks(checks, g.json_errors);
        }
    } catch (const sqg::validation_error& e) {
        if (g.json_errors)
            std::cerr << json{{"error", {{"type", "validation"}, {"message", e.what()}}}}.dump()
                      << "\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const sqg::numerical_error& e) {
        if (g.json_errors)
            std::cerr << json{{"error",
                               {{"type", "numerical"}, {"kind", e.kind()}, {"message", e.what()}}}}
                             .dump()
                      << "\n";
        else
            std::cerr << "numerical failure (" << e.kind() << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        if (g.json_errors)
            std::cerr << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump()
                      << "\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
