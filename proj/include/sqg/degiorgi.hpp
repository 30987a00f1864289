#pragma once

#include "sqg/extension.hpp"
#include "sqg/solver.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace sqg {

/// Parabolic cylinder Q_r* = B_r x [0, r) x (t_anchor - r^alpha, t_anchor].
struct Cylinder {
    double r = 1.0;
    double t_anchor = 1.0;
    double alpha = 1.0;

    void validate() const {
        if (!(r > 0.0)) throw validation_error("Cylinder: r must be positive");
        if (!(alpha > 0.0) || alpha > 2.0) throw validation_error("Cylinder: alpha in (0,2]");
        if (std::pow(r, alpha) > t_anchor + 1e-12)
            throw validation_error("Cylinder: r^alpha must not exceed t_anchor");
    }
    double t_lo() const { return t_anchor - std::pow(r, alpha); }
};

/// Axis-aligned box in (x, z, t); exact z^eps weighted measure.
struct Box {
    int n = 2;
    std::array<double, 2> x_lo{0.0, 0.0};
    std::array<double, 2> x_hi{0.0, 0.0};
    double z_lo = 0.0, z_hi = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
};

/// Exact z^eps slab integral over [z_lo, z_hi].
double z_weight(double z_lo, double z_hi, double eps);

/// |box|_{z^eps} = prod(x extents) * (z_hi^{1+eps} - z_lo^{1+eps})/(1+eps) * (t extent).
double weighted_measure(const Box& box, double eps);

/// Discretized (x, z, t) sample block over a cylinder (or any product grid):
/// x coordinates per axis (shared), z levels and times, with nodal values.
/// Cell weights come from dual cells: uniform in x and t, exact z^eps slabs
/// in z clipped to [z_clip_lo, z_clip_hi].
struct Slab {
    int n = 2;
    std::vector<double> xs;     // shared coordinate list per x axis
    double dx = 0.0;
    std::vector<double> zs;     // strictly increasing, may start at 0
    std::vector<double> ts;     // strictly increasing
    double z_clip_lo = 0.0, z_clip_hi = 0.0;
    std::vector<double> values; // [(t * nz + z) * nx^n + xnode]

    std::size_t x_count() const;
    std::size_t node_count() const { return ts.size() * zs.size() * x_count(); }
    double& at(std::size_t it, std::size_t iz, std::size_t ix);
    double at(std::size_t it, std::size_t iz, std::size_t ix) const;

    /// Fill from a callable f(xvec, z, t).
    void fill(const std::function<double(const std::array<double, 2>&, double, double)>& f);

    /// z^eps dual-cell weight per (z-level, and per x/t node).
    std::vector<double> node_weights(double eps) const;
    double total_weighted_measure(double eps) const;
};

/// Build the coordinate skeleton of a slab covering a cylinder on a periodic
/// grid of spacing dx (x nodes within |x| <= r on the torus), z levels from
/// the ladder intersected with [0, r) (a z = 0 level is always included),
/// and the given times.
Slab make_cylinder_slab(const Cylinder& cyl, const GridSpec& grid,
                        const std::vector<double>& z_ladder, std::vector<double> times);

/// Weighted-measure statistics of the sets {v <= 0}, {v >= 1}, {0 < v < 1}
/// for v = 2 * theta* over a slab. S is measC clamped at 1/100.
struct LevelSetStats {
    double measA = 0.0;
    double measB = 0.0;
    double measC = 0.0;
    double S = 0.0;
    double dirichlet = 0.0; // z^eps weighted Dirichlet energy of (2 theta*)_+
    double total = 0.0;     // weighted measure of the sampled region
};

LevelSetStats level_set_stats(const Slab& slab, double eps, double s_cap = 0.01);

struct IsoperimetricResult {
    double lhs = 0.0;       // C** * fraction(C)
    double rhs = 0.0;       // fraction(A)^2 * fraction(B)^2
    bool satisfied = false;
    double Cstar = 0.0;     // minimal constant rhs / fraction(C)
    double energy = 0.0;    // weighted Dirichlet energy of the slice
    double fracA = 0.0, fracB = 0.0, fracC = 0.0;
};

/// De Giorgi isoperimetric check on one time slice (a slab with a single t).
/// Class measures enter as fractions of the slice's weighted measure;
/// C** = max(energy, energy_cap).
IsoperimetricResult isoperimetric_check(const Slab& slice, double eps, double energy_cap);

/// Spectral snapshots promotable to theta* slices on demand; the slab builder
/// restricts to the cylinder's x window and z < r.
class ExtendedTrajectory {
public:
    ExtendedTrajectory(GridSpec grid, std::vector<std::pair<double, SpectralField>> snaps,
                       std::vector<double> z_ladder = geometric_ladder());

    static ExtendedTrajectory from_trajectory(const Trajectory& traj,
                                              std::vector<double> z_ladder = geometric_ladder());

    const GridSpec& grid() const { return grid_; }
    double alpha() const { return grid_.alpha; }

    /// Sampled values over the cylinder; times are the snapshots inside the
    /// cylinder's window (at most max_times of them, evenly thinned).
    Slab slab(const Cylinder& cyl, std::size_t max_times = 6) const;

private:
    GridSpec grid_;
    std::vector<std::pair<double, SpectralField>> snaps_;
    std::vector<double> ladder_;
    ExtensionMultiplier Q_;
};

/// sup - inf over the slab nodes of a cylinder. Throws on an empty node set.
double oscillation(const ExtendedTrajectory& traj, const Cylinder& cyl);
double oscillation(const Slab& slab);

struct OscillationSequence {
    std::vector<double> radii;
    std::vector<double> oscs;
    bool floor_truncated = false; // hit the 4-cell resolution floor
    /// log-log slope fitted on entries [drop_first, end); NaN if < 2 points.
    double fit_exponent(std::size_t drop_first = 0) const;
};

/// Oscillations over nested cylinders r_k = r_base * rho^k, k = 0..k_max,
/// truncated (and flagged) at the 4-grid-cell resolution floor.
OscillationSequence oscillation_decay_sequence(const ExtendedTrajectory& traj, double rho,
                                               int k_max, double r_base = 1.0,
                                               double t_anchor = 1.0);

/// Max over dyadic axis offsets h of |f(x+h e_d) - f(x)| / |h|^exponent.
double holder_seminorm(const RealField& theta, double exponent);

/// Superlinear recursion A_k = C^k A_{k-3}^beta, beta = n/(n - alpha/2).
struct RecursionSpec {
    double C = 1.0;
    double beta = 2.0;
    std::array<double, 3> seedA{1.0, 1.0, 1.0};
    int k_max = 400;

    void validate() const {
        if (!(C > 0.0)) throw validation_error("RecursionSpec: C must be positive");
        if (!(beta > 1.0)) throw validation_error("RecursionSpec: beta must exceed 1");
        if (k_max < 6) throw validation_error("RecursionSpec: k_max too small");
    }
};

enum class RecursionOutcome { Converged, Diverged, Undetermined };

struct RecursionResult {
    RecursionOutcome outcome = RecursionOutcome::Undetermined;
    bool converges = false;
    double threshold_epsilon0 = 0.0; // sup seed magnitude with A_k -> 0
    bool threshold_found = false;
};

/// Iterate the recursion (in log space) for the given seed and bisect the
/// uniform-seed magnitude for the convergence/divergence boundary.
RecursionResult degiorgi_recursion(const RecursionSpec& spec);

/// Classification of a single seed triple.
RecursionOutcome recursion_outcome(double C, double beta, const std::array<double, 3>& seed,
                                   int k_max);

/// ceil((1/S + 1) |Q4*|_{z^eps}); S > 0.
long k_plus(double S, double q4_weighted_measure);

/// |Q_4*|_{z^eps} for dimension n and order alpha (closed form).
double q4_weighted_measure(int n, double alpha);

/// The named small constants of the level-set machinery.
namespace level_set_constants {
inline constexpr double kB = 0.1;            // interpolation weight b
inline constexpr double kExponentHalfM = 0.05; // m/2 with m = 0.1
inline constexpr double kMLower = 1.0 / 14.0; // admissible m window
inline constexpr double kMUpper = 1.0 / 6.0;  // min{1/2, 1/6}
} // namespace level_set_constants

} // namespace sqg
