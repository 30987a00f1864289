#pragma once

#include "sqg/errors.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace sqg {

/// Admissible interval for the inner-box radius c0 at dissipation order
/// alpha: the larger of 32/64^{1/alpha} and 32^{1-1/alpha} from below
/// (with 2^{-1/alpha0} joining when alpha0 is given), 1 from above.
struct C0Window {
    double lower = 0.0;
    double upper = 1.0;
    std::string binding; // which bound supplies `lower`
    bool empty() const { return !(lower < upper); }
    double midpoint() const { return 0.5 * (lower + upper); }
    double width() const { return std::max(0.0, upper - lower); }
};

C0Window admissible_c0(double alpha, std::optional<double> alpha0 = std::nullopt);

struct Verdict {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double slack = 0.0; // rhs - lhs, positive when satisfied
};

/// The explicit constants chain as functions of alpha (and alpha0 for the
/// modified-flow regime), plus the inequality verdicts.
struct ConstantsLedger {
    double alpha = 0.0;
    double epsilon = 0.0; // 1 - alpha
    std::optional<double> alpha0;
    double c0 = 0.0;
    double omega = 0.0;   // barrier cube half-width used for lambda
    double r0 = 0.0;      // c0 / 64^{1/alpha}
    double a = 0.0;       // a_frac * 4 / 2^{1/alpha}
    double a_max = 0.0;   // 4 / 2^{1/alpha}
    double lambda = 0.0;  // from the barrier when supplied, else 1 - c0^alpha
    std::string lambda_source;
    double lambda_starstar = 0.0; // midpoint of the (lambda, 2 lambda) bracket
    double eta = 0.0;             // lambda_starstar / 2
    double C1 = 0.0;              // 64 / c0
    double C_alpha = 0.0;         // 256 (128 / (a c0^2))^alpha
    long K_plus = 0;              // ceil((1/S + 1) |Q4*|) at S = 1/100, n = 2
    double q4_measure = 0.0;
    double epsilon_tilde = 0.0;   // (1/C) 2^{-7(eps-alpha)/alpha}
    double A_lower = 0.0;         // 1 - (2^{1/alpha0} c0)^{2 alpha0 - 1} (alpha0 runs)
    double B_upper = 0.0;         // C_u 2^{17/alpha0}
    double shrink_radius = 0.0;   // c0^2 a / 128
    std::vector<Verdict> verdicts;
    bool chain_holds = false;
};

struct DeriveOptions {
    std::optional<double> alpha0;
    double a_frac = 0.99;     // a as a fraction of its supremum
    double generic_C = 1.0;   // the unpinned absolute constant inside epsilon_tilde
    double C_u = 1.0;         // velocity bound entering B_upper
    std::optional<double> lambda; // externally measured (barrier); else heuristic
};

/// Populate every derived constant; c0 must lie inside admissible_c0.
ConstantsLedger derive(double alpha, double c0, const DeriveOptions& opts = {});

/// Evaluate the named inequalities of the chain with slack; fills
/// ledger.verdicts and the overall flag, and returns the verdict list.
std::vector<Verdict> chain_check(ConstantsLedger& ledger);

struct EtaResult {
    double eta = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

/// eta = lambda**/2; when lambda is supplied, also the bracket
/// (lambda/2, lambda) implied by lambda < lambda** < 2 lambda.
EtaResult eta_from_lambda(double lambda_starstar,
                          std::optional<double> lambda = std::nullopt);

} // namespace sqg
