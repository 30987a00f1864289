#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

/// Bad inputs: mismatched grids, out-of-range parameters, malformed files.
/// Maps to CLI exit code 1.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Failures of the numerics themselves: blow-up, CFL refusal, quadrature
/// non-convergence, unresolved tails. Maps to CLI exit code 2.
class numerical_error : public std::runtime_error {
public:
    numerical_error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

} // namespace sqg
