#pragma once

#include "sqg/field.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace sqg {

/// Initial-condition preset descriptor. Presets:
///   "random_hk"         band-limited white noise, mean-zero
///                       params: k_min (1), k_max (N/3), rough (0: if 1, the
///                       band default widens to N/2-1)
///   "gaussian_vortices" sum of signed periodized Gaussians
///                       params: count (8), sigma (0.35 * L/2pi), amplitude (1)
///   "shear"             single mode: amplitude * cos(k . x)
///                       params: k1 (1), k2 (0), amplitude (1)
/// normalize: "none" | "l2" | "sup" rescales so the chosen norm equals
/// normalize_value.
struct IcSpec {
    std::string preset = "random_hk";
    std::uint64_t seed = 1;
    std::map<std::string, double> params;
    std::string normalize = "none";
    double normalize_value = 1.0;

    double param(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
};

/// Build the spectral initial state for a preset. Mean-zero for random_hk and
/// gaussian_vortices. random_hk modes are seeded per integer wavevector, so
/// the same (seed, band) yields the same physical field on any grid that
/// resolves the band.
SpectralField make_initial_condition(const GridSpec& grid, const IcSpec& ic);

/// Deterministic 64-bit mix (splitmix64 finalizer).
std::uint64_t hash_mix(std::uint64_t x);

} // namespace sqg
