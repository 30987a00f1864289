#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqg/constants.hpp"
#include "sqg/degiorgi.hpp"
#include "sqg/fft.hpp"

#include <cmath>
#include <random>

using namespace sqg;

namespace {

GridSpec grid2(int N, double alpha, double L = kTwoPi) {
    GridSpec g;
    g.n = 2;
    g.N = N;
    g.alpha = alpha;
    g.L = L;
    return g;
}

Slab box_slab(int nx, double r, const std::vector<double>& zs, std::vector<double> ts,
              double dx_override = 0.0) {
    Slab s;
    s.n = 2;
    const double dx = dx_override > 0.0 ? dx_override : 2.0 * r / nx;
    for (int i = 0; i < nx; ++i) s.xs.push_back(-r + dx * (i + 0.5));
    s.dx = dx;
    s.zs = zs;
    s.z_clip_lo = 0.0;
    s.z_clip_hi = r;
    s.ts = std::move(ts);
    return s;
}

std::vector<double> uniform_levels(double lo, double hi, int count) {
    std::vector<double> z(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        z[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
    return z;
}

} // namespace

TEST_CASE("weighted measure: closed forms, additivity, emptiness") {
    // empty set
    Box empty;
    empty.n = 2;
    empty.x_lo = {0.0, 0.0};
    empty.x_hi = {0.0, 1.0};
    empty.z_lo = 0.0;
    empty.z_hi = 1.0;
    empty.t_lo = 0.0;
    empty.t_hi = 1.0;
    CHECK(weighted_measure(empty, 0.5) == 0.0);

    // full Q4* at n = 2, alpha = 0.5: 8^2 * (4^{1.5}/1.5) * 4^{0.5} = 2048/3
    Box q4;
    q4.n = 2;
    q4.x_lo = {-4.0, -4.0};
    q4.x_hi = {4.0, 4.0};
    q4.z_lo = 0.0;
    q4.z_hi = 4.0;
    q4.t_lo = 1.0 - 2.0;
    q4.t_hi = 1.0;
    const double closed = 2048.0 / 3.0;
    CHECK(std::abs(weighted_measure(q4, 0.5) - closed) <= 1e-10 * closed);
    CHECK(q4_weighted_measure(2, 0.5) == doctest::Approx(closed).epsilon(1e-14));

    // Monte Carlo cross-check of the z^eps weight
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t M = 400000;
    double acc = 0.0;
    for (std::size_t i = 0; i < M; ++i) acc += std::pow(4.0 * unif(rng), 0.5);
    const double mc = 64.0 * 2.0 * 4.0 * acc / static_cast<double>(M); // area * t * E[z^eps] * zlen
    CHECK(std::abs(mc - closed) / closed <= 5e-3);

    // disjoint additivity on random axis splits
    for (int trial = 0; trial < 20; ++trial) {
        const double cut = 0.1 + 3.8 * unif(rng);
        Box lowz = q4, hiz = q4;
        lowz.z_hi = cut;
        hiz.z_lo = cut;
        const double total = weighted_measure(q4, 0.37);
        const double split = weighted_measure(lowz, 0.37) + weighted_measure(hiz, 0.37);
        CHECK(std::abs(total - split) <= 1e-10 * total);
    }

    // monotone under inclusion
    Box small = q4;
    small.x_hi = {1.0, 4.0};
    CHECK(weighted_measure(small, 0.5) < weighted_measure(q4, 0.5));
}

TEST_CASE("level-set statistics: constants, clamping, ramp slab split") {
    const double eps = 0.5; // alpha = 0.5
    auto zs = uniform_levels(0.05, 3.95, 24);
    std::vector<double> ts{-0.5, 0.25, 1.0};
    Slab s = box_slab(64, 4.0, zs, ts);
    s.ts.front() = 1.0 - 2.0; // window (1 - 4^alpha, 1]
    s.ts[1] = 0.0;

    // theta* = -1/2 everywhere -> v = 2 theta* = -1: all mass in A
    s.fill([](const std::array<double, 2>&, double, double) { return -0.5; });
    LevelSetStats a = level_set_stats(s, eps);
    CHECK(a.measA == doctest::Approx(a.total).epsilon(1e-12));
    CHECK(a.measB == 0.0);
    CHECK(a.measC == 0.0);

    // theta* = 1/4 -> v = 1/2: all mass in C, S clamps at 1/100
    s.fill([](const std::array<double, 2>&, double, double) { return 0.25; });
    LevelSetStats c = level_set_stats(s, eps);
    CHECK(c.measC == doctest::Approx(c.total).epsilon(1e-12));
    CHECK(c.S == 0.01);

    // linear ramp theta* = x1/4: v = x1/2, A = {x1 <= 0}, C = {0 < x1 < 2},
    // B = {x1 >= 2}; closed-form slab split of the weighted measure
    s.fill([](const std::array<double, 2>& x, double, double) { return 0.25 * x[0]; });
    LevelSetStats ramp = level_set_stats(s, eps);
    const double zpart = z_weight(0.0, 4.0, eps);
    const double tpart = 2.0;
    CHECK(ramp.measA == doctest::Approx(4.0 * 8.0 * zpart * tpart).epsilon(1e-10));
    CHECK(ramp.measC == doctest::Approx(2.0 * 8.0 * zpart * tpart).epsilon(1e-10));
    CHECK(ramp.measB == doctest::Approx(2.0 * 8.0 * zpart * tpart).epsilon(1e-10));
    // partition identity
    CHECK(ramp.measA + ramp.measB + ramp.measC == doctest::Approx(ramp.total).epsilon(1e-10));
}

TEST_CASE("isoperimetric check: trivial cases and the smoothed step") {
    const double eps = 0.25;
    auto zs = uniform_levels(0.05, 3.95, 16);

    // A empty -> rhs = 0, trivially satisfied
    Slab s = box_slab(48, 4.0, zs, {1.0});
    s.fill([](const std::array<double, 2>&, double, double) { return 2.0; });
    auto triv = isoperimetric_check(s, eps, 1.0);
    CHECK(triv.rhs == 0.0);
    CHECK(triv.satisfied);

    // z-independent step in x1 smoothed over width w: energy ~ 1/w while
    // frac(C) ~ w, so rhs/lhs stays bounded as w -> 0
    double prev_ratio = 0.0;
    for (double w : {0.5, 0.25, 0.125}) {
        Slab st = box_slab(128, 4.0, zs, {1.0});
        st.fill([&](const std::array<double, 2>& x, double, double) {
            // v = 2 theta* ramps 0 -> 1 over [0, w]
            const double v = std::clamp(x[0] / w, 0.0, 1.0);
            return 0.5 * (v == 0.0 ? -0.05 : (v == 1.0 ? 1.05 : v));
        });
        auto res = isoperimetric_check(st, eps, 1.0);
        CHECK(res.satisfied);
        const double ratio = res.rhs / res.lhs;
        CHECK(ratio <= 1.0);
        if (prev_ratio > 0.0) CHECK(ratio <= 4.0 * prev_ratio + 1.0);
        prev_ratio = ratio;
    }
}

TEST_CASE("isoperimetric corpus over random band-limited extension slices") {
    GridSpec g = grid2(48, 0.75, 4.0 * kPi);
    auto ladder = geometric_ladder(1e-3, 3.9, 20);
    std::size_t nontrivial = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        IcSpec ic;
        ic.preset = "random_hk";
        ic.seed = seed;
        ic.params["k_max"] = 6;
        ic.normalize = "sup";
        ic.normalize_value = 0.8;
        SpectralField theta = make_initial_condition(g, ic);
        // shift so v = 2 theta* straddles [0, 1]
        theta.mode(0, 0) = {0.25, 0.0};
        std::vector<std::pair<double, SpectralField>> snaps;
        snaps.emplace_back(1.0, theta);
        ExtendedTrajectory traj(g, std::move(snaps), ladder);
        Cylinder cyl{4.0, std::pow(4.0, 0.75), 0.75};
        Slab slab = traj.slab(cyl, 1);
        auto res = isoperimetric_check(slab, 1.0 - 0.75, 1.0);
        CHECK(res.satisfied);
        if (res.fracA > 0.0 && res.fracB > 0.0) {
            ++nontrivial;
            CHECK(res.Cstar <= 10.0 * std::max(res.energy, 1.0));
        }
    }
    CHECK(nontrivial >= 20);
}

TEST_CASE("oscillation: constants, nesting, and the cylinder slab machinery") {
    GridSpec g = grid2(64, 0.75);
    SpectralField c(g);
    c.mode(0, 0) = {1.3, 0.0};
    std::vector<std::pair<double, SpectralField>> snaps;
    snaps.emplace_back(0.6, c);
    snaps.emplace_back(1.0, c);
    ExtendedTrajectory traj(g, std::move(snaps), geometric_ladder(1e-3, 2.0, 16));

    CHECK(oscillation(traj, {1.0, 1.0, 0.75}) == doctest::Approx(0.0));

    // nested monotonicity on a genuine field
    IcSpec ic;
    ic.preset = "random_hk";
    ic.seed = 9;
    ic.params["k_max"] = 8;
    SpectralField theta = make_initial_condition(g, ic);
    std::vector<std::pair<double, SpectralField>> snaps2;
    snaps2.emplace_back(1.0, theta);
    ExtendedTrajectory t2(g, std::move(snaps2), geometric_ladder(1e-3, 2.0, 16));
    double prev = -1.0;
    for (double r : {0.125, 0.25, 0.5, 1.0}) {
        const double osc = oscillation(t2, {r, 1.0, 0.75});
        if (prev >= 0.0) CHECK(osc >= prev);
        prev = osc;
    }
    Cylinder too_wide{2.0, 1.0, 0.75};
    CHECK_THROWS_AS(too_wide.validate(), validation_error);

    // adding a constant leaves the oscillation unchanged
    SpectralField shifted = theta;
    shifted.mode(0, 0) += 5.0;
    std::vector<std::pair<double, SpectralField>> snaps3;
    snaps3.emplace_back(1.0, shifted);
    ExtendedTrajectory t3(g, std::move(snaps3), geometric_ladder(1e-3, 2.0, 16));
    CHECK(oscillation(t3, {1.0, 1.0, 0.75}) ==
          doctest::Approx(oscillation(t2, {1.0, 1.0, 0.75})).epsilon(1e-10));

    // no snapshots inside the window
    ExtendedTrajectory early(g, {{0.1, theta}}, geometric_ladder(1e-3, 2.0, 16));
    CHECK_THROWS_AS((void)oscillation(early, {0.5, 1.0, 0.75}), validation_error);
}

TEST_CASE("oscillation decay sequence: constants, analytic profile, floor flag") {
    // constant data: all zeros
    GridSpec g = grid2(64, 0.75);
    SpectralField c(g);
    c.mode(0, 0) = {2.0, 0.0};
    ExtendedTrajectory traj(g, {{1.0, c}}, geometric_ladder(1e-3, 2.0, 16));
    auto seq0 = oscillation_decay_sequence(traj, 0.5, 4, 1.0);
    for (double o : seq0.oscs) CHECK(o == 0.0);

    // |x1|^alpha frozen profile on the boundary slice: osc over B_r is
    // exactly r^alpha, so the fitted exponent recovers alpha. (A ladder whose
    // smallest level exceeds every radius keeps the slab at z = 0 only.)
    const double alpha = 0.75;
    GridSpec gp = grid2(512, alpha);
    RealField prof(gp);
    for (int i = 0; i < gp.N; ++i) {
        double x = gp.dx() * i;
        if (x >= kPi) x -= kTwoPi;
        const double v = std::pow(std::abs(x), alpha);
        for (int j = 0; j < gp.N; ++j)
            prof.samples[static_cast<std::size_t>(i) * gp.N + j] = v;
    }
    SpectralField prof_hat = to_spectral(prof);
    ExtendedTrajectory pt(gp, {{1.0, prof_hat}}, {8.0});
    auto seq = oscillation_decay_sequence(pt, 0.5, 6, 0.5);
    REQUIRE(seq.radii.size() >= 4);
    const double slope = seq.fit_exponent(0);
    CHECK(slope == doctest::Approx(alpha).epsilon(0.05 / alpha));

    // over the full cylinders the alpha-kernel tail against the alpha-growth
    // of the profile is borderline and theta*(0, z) gains a log factor, which
    // drags the fitted exponent below alpha; pin the phenomenon
    ExtendedTrajectory pt_full(gp, {{1.0, prof_hat}}, geometric_ladder(1e-4, 2.0, 40));
    auto seq_full = oscillation_decay_sequence(pt_full, 0.5, 6, 0.5);
    const double slope_full = seq_full.fit_exponent(0);
    CHECK(slope_full < alpha);
    CHECK(slope_full > alpha - 0.35);

    // resolution floor: the default shrink factor collapses immediately
    auto tiny = oscillation_decay_sequence(pt_full, 0.004, 6, 1.0);
    CHECK(tiny.floor_truncated);
    CHECK(tiny.radii.size() == 1);
    CHECK(std::isnan(tiny.fit_exponent(0)));
}

TEST_CASE("holder seminorm: constants, Lipschitz cosine, sharpening step") {
    GridSpec g = grid2(128, 1.0);
    RealField c(g);
    for (auto& v : c.samples) v = 4.2;
    CHECK(holder_seminorm(c, 0.7) == 0.0);

    RealField f(g);
    for (int i = 0; i < g.N; ++i)
        for (int j = 0; j < g.N; ++j)
            f.samples[static_cast<std::size_t>(i) * g.N + j] = std::cos(g.dx() * i);
    const double lip = holder_seminorm(f, 1.0);
    CHECK(lip <= 1.0 + 1e-10);
    CHECK(lip >= 0.95);

    // smoothed step of width w: C_est grows like w^{exponent - 1}
    const double expo = 0.5;
    double prev = 0.0;
    for (double w : {0.5, 0.25, 0.125}) {
        RealField st(g);
        for (int i = 0; i < g.N; ++i) {
            double x = g.dx() * i;
            if (x >= kPi) x -= kTwoPi;
            const double v = std::clamp(x / w, -1.0, 1.0);
            for (int j = 0; j < g.N; ++j)
                st.samples[static_cast<std::size_t>(i) * g.N + j] = v;
        }
        const double est = holder_seminorm(st, expo);
        if (prev > 0.0) CHECK(est / prev == doctest::Approx(std::pow(0.5, expo - 1.0)).epsilon(0.2));
        prev = est;
    }

    CHECK_THROWS_AS((void)holder_seminorm(c, 1.5), validation_error);
}

TEST_CASE("recursion: closed-form threshold, zero seed, monotone families") {
    RecursionSpec spec;
    spec.C = 1.0;
    spec.beta = 2.0;
    spec.seedA = {0.5, 0.5, 0.5};
    auto res = degiorgi_recursion(spec);
    CHECK(res.converges);
    CHECK(res.threshold_found);
    CHECK(std::abs(res.threshold_epsilon0 - 1.0) <= 1e-6);

    spec.seedA = {0.0, 0.0, 0.0};
    CHECK(degiorgi_recursion(spec).converges);

    spec.seedA = {1.5, 1.5, 1.5};
    CHECK(!degiorgi_recursion(spec).converges);

    // monotone: threshold decreases in C at beta = 4/3, increases in beta
    double prev = 1e300;
    for (double C : {1.5, 2.0, 4.0, 8.0}) {
        RecursionSpec s;
        s.C = C;
        s.beta = 4.0 / 3.0;
        auto r = degiorgi_recursion(s);
        REQUIRE(r.threshold_found);
        CHECK(r.threshold_epsilon0 < prev);
        prev = r.threshold_epsilon0;
    }
    double prev_beta = 0.0;
    for (double beta : {1.25, 4.0 / 3.0, 1.5, 2.0}) {
        RecursionSpec s;
        s.C = 2.0;
        s.beta = beta;
        auto r = degiorgi_recursion(s);
        REQUIRE(r.threshold_found);
        CHECK(r.threshold_epsilon0 >= prev_beta);
        prev_beta = r.threshold_epsilon0;
    }

    // bisection reproducibility
    RecursionSpec s;
    s.C = 2.0;
    s.beta = 4.0 / 3.0;
    auto r1 = degiorgi_recursion(s);
    auto r2 = degiorgi_recursion(s);
    CHECK(r1.threshold_epsilon0 == r2.threshold_epsilon0);
}

TEST_CASE("K+ arithmetic and monotonicity") {
    const double q4 = q4_weighted_measure(2, 0.5);
    CHECK(k_plus(0.01, q4) == 68950);
    CHECK(k_plus(1.0, q4) == static_cast<long>(std::ceil(2.0 * q4)));
    long prev = k_plus(0.001, q4);
    for (double S : {0.002, 0.005, 0.01, 0.5}) {
        const long k = k_plus(S, q4);
        CHECK(k < prev);
        prev = k;
    }
    CHECK_THROWS_AS((void)k_plus(0.0, q4), validation_error);
}

TEST_CASE("iterated dyadic rescaling composes to 2^k (theta* - 1) + 1") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> field(257);
    for (auto& v : field) v = unif(rng);
    for (int k = 1; k <= 6; ++k) {
        for (std::size_t i = 0; i < field.size(); ++i) {
            double iterated = field[i];
            for (int j = 0; j < k; ++j) iterated = 2.0 * (iterated - 0.5);
            const double closed = std::pow(2.0, k) * (field[i] - 1.0) + 1.0;
            CHECK(iterated == doctest::Approx(closed).epsilon(1e-12));
        }
    }
}

TEST_CASE("named level-set constants sit inside the admissible window") {
    using namespace level_set_constants;
    CHECK(kMLower < 2.0 * kExponentHalfM);
    CHECK(2.0 * kExponentHalfM < kMUpper);
    CHECK(kB == 0.1);
}

TEST_CASE("oscillation decay of the dissipative linear flow beats the (1 - eta) ladder") {
    // geometric decay of oscillations over nested cylinders for the linear
    // flow, compared against the conservative end eta = lambda/2 of the
    // bracket, with lambda from the constants ledger heuristic
    const double alpha = 0.75;
    SolverConfig cfg;
    cfg.grid = grid2(256, alpha);
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.flow_scale = 0.0;
    cfg.snapshot_dt = 0.02;
    cfg.ic.preset = "random_hk";
    cfg.ic.params["k_max"] = 40;
    cfg.ic.normalize = "sup";
    cfg.seed = 19;
    Trajectory traj = run(cfg);
    auto ext = ExtendedTrajectory::from_trajectory(traj, geometric_ladder(1e-4, 2.0, 32));
    auto seq = oscillation_decay_sequence(ext, 0.5, 5, 1.0);
    REQUIRE(seq.radii.size() >= 4);

    ConstantsLedger led = derive(alpha, 0.6);
    auto eta = eta_from_lambda(led.lambda_starstar, led.lambda);
    const double eta_conservative = eta.bracket_lo; // lambda / 2
    // fitted per-step factor of the tail of the ladder
    double worst_factor = 0.0;
    for (std::size_t i = 2; i < seq.oscs.size(); ++i)
        worst_factor = std::max(worst_factor, seq.oscs[i] / seq.oscs[i - 1]);
    CHECK(worst_factor <= 1.0 - eta_conservative);
}
