#pragma once

#include "sqg/field.hpp"

#include <string>
#include <vector>

namespace sqg {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

inline bool all_pass(const std::vector<CheckResult>& v) {
    for (const auto& c : v)
        if (!c.pass) return false;
    return true;
}

/// Per-mode Riesz velocity identities (spectral divergence-freeness,
/// modulus isometry, the fixed single-mode convention) on random fields.
std::vector<CheckResult> verify_riesz(double alpha, int N, int seeds = 20);

/// Extension multiplier identities: the alpha = 1 closed form e^{-zeta},
/// small-zeta series/quadrature agreement, and the two-route energy identity
/// (per-mode constancy and cross-field constancy) at the requested alpha.
std::vector<CheckResult> verify_extension_identity(double alpha, int N, int fields = 12);

/// Neumann-trace diagnostics: per-mode ratio spread at the requested alpha,
/// and the alpha = 1 signed ratio against Lambda theta.
std::vector<CheckResult> verify_neumann(double alpha, int N);

/// Scheme energy diagnostics on short runs: monotone discrete L2 with the
/// per-step energy identity, the maximum principle, mean conservation, and
/// truncated level-set energy checks.
std::vector<CheckResult> verify_energy(double alpha, int N, int seeds = 5);

} // namespace sqg
