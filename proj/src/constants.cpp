#include "sqg/constants.hpp"

#include "sqg/degiorgi.hpp"

#include <algorithm>

namespace sqg {

C0Window admissible_c0(double alpha, std::optional<double> alpha0) {
    // alpha = 1 is admitted so the audit can report the closed window at the
    // shifted-cube limit instead of erroring
    if (!(alpha > 0.0) || alpha > 1.0)
        throw validation_error("admissible_c0: alpha must lie in (0,1]");
    if (alpha0 && (!(*alpha0 > 0.0) || *alpha0 > alpha))
        throw validation_error("admissible_c0: alpha0 must lie in (0, alpha]");

    C0Window w;
    const double lb_metro = 32.0 / std::pow(64.0, 1.0 / alpha);
    const double lb_shift = std::pow(32.0, 1.0 - 1.0 / alpha);
    w.lower = lb_metro;
    w.binding = "32/64^{1/alpha}";
    if (lb_shift > w.lower) {
        w.lower = lb_shift;
        w.binding = "32^{1-1/alpha}";
    }
    if (alpha0) {
        const double lb_a0 = std::pow(2.0, -1.0 / *alpha0);
        if (lb_a0 > w.lower) {
            w.lower = lb_a0;
            w.binding = "2^{-1/alpha0}";
        }
    }
    w.upper = 1.0;
    return w;
}

ConstantsLedger derive(double alpha, double c0, const DeriveOptions& opts) {
    C0Window win = admissible_c0(alpha, opts.alpha0);
    if (win.empty() || !(c0 > win.lower) || !(c0 < win.upper))
        throw validation_error("derive: c0 = " + std::to_string(c0) +
                               " outside the admissible window (" + std::to_string(win.lower) +
                               ", 1)");
    if (!(opts.a_frac > 0.0) || !(opts.a_frac < 1.0))
        throw validation_error("derive: a_frac must lie in (0,1)");

    ConstantsLedger led;
    led.alpha = alpha;
    led.epsilon = 1.0 - alpha;
    led.alpha0 = opts.alpha0;
    led.c0 = c0;
    led.r0 = c0 / std::pow(64.0, 1.0 / alpha);
    led.a_max = 4.0 / std::pow(2.0, 1.0 / alpha);
    led.a = opts.a_frac * led.a_max;
    led.shrink_radius = c0 * c0 * led.a / 128.0;
    if (opts.lambda) {
        led.lambda = *opts.lambda;
        led.lambda_source = "barrier";
    } else {
        led.lambda = 1.0 - std::pow(c0, alpha);
        led.lambda_source = "heuristic";
    }
    led.lambda_starstar = 1.5 * led.lambda; // midpoint of (lambda, 2 lambda)
    led.eta = 0.5 * led.lambda_starstar;
    led.C1 = 64.0 / c0;
    led.C_alpha = 256.0 * std::pow(128.0 / (led.a * c0 * c0), alpha);
    led.q4_measure = q4_weighted_measure(2, alpha);
    led.K_plus = k_plus(0.01, led.q4_measure);
    led.epsilon_tilde =
        (1.0 / opts.generic_C) * std::pow(2.0, -7.0 * (led.epsilon - alpha) / alpha);
    if (opts.alpha0) {
        const double a0 = *opts.alpha0;
        led.A_lower = 1.0 - std::pow(std::pow(2.0, 1.0 / a0) * c0, 2.0 * a0 - 1.0);
        led.B_upper = opts.C_u * std::pow(2.0, 17.0 / a0);
    }
    chain_check(led);
    return led;
}

std::vector<Verdict> chain_check(ConstantsLedger& led) {
    if (!(led.alpha > 0.0) || !(led.c0 > 0.0) || !(led.r0 > 0.0))
        throw validation_error("chain_check: ledger incomplete");
    std::vector<Verdict> v;
    auto add = [&](std::string name, double lhs, double rhs) {
        Verdict verdict{std::move(name), lhs, rhs, lhs < rhs, rhs - lhs};
        v.push_back(verdict);
    };
    const double r0a = std::pow(led.r0, led.alpha);
    add("osc_reduction: 2(1-eta) < 256 r0^alpha", 2.0 * (1.0 - led.eta), 256.0 * r0a);
    add("shrink_radius: r0 < c0^2 a / 128", led.r0, led.shrink_radius);
    add("velocity_bound: r0^{-alpha} < C1", std::pow(led.r0, -led.alpha), led.C1);
    add("r0_window_upper: r0 < c0^2 / (2^{1/alpha} 32)", led.r0,
        led.c0 * led.c0 / (std::pow(2.0, 1.0 / led.alpha) * 32.0));
    add("r0_window_lower: c0 / 128^{1/alpha} < r0",
        led.c0 / std::pow(128.0, 1.0 / led.alpha), led.r0);
    led.verdicts = v;
    led.chain_holds = std::all_of(v.begin(), v.end(), [](const Verdict& w) { return w.holds; });
    return v;
}

EtaResult eta_from_lambda(double lambda_starstar, std::optional<double> lambda) {
    if (!(lambda_starstar > 0.0) || !(lambda_starstar < 1.0))
        throw validation_error("eta_from_lambda: lambda** must lie in (0,1)");
    EtaResult res;
    res.eta = 0.5 * lambda_starstar;
    if (lambda) {
        if (!(*lambda > 0.0) || !(*lambda < 1.0))
            throw validation_error("eta_from_lambda: lambda must lie in (0,1)");
        res.bracket_lo = 0.5 * *lambda;
        res.bracket_hi = *lambda;
    }
    return res;
}

} // namespace sqg
