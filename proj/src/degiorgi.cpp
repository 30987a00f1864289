#include "sqg/degiorgi.hpp"

#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sqg {

double z_weight(double z_lo, double z_hi, double eps) {
    if (z_hi <= z_lo) return 0.0;
    return (std::pow(z_hi, 1.0 + eps) - std::pow(z_lo, 1.0 + eps)) / (1.0 + eps);
}

double weighted_measure(const Box& box, double eps) {
    double m = z_weight(box.z_lo, box.z_hi, eps);
    for (int d = 0; d < box.n; ++d) {
        const double w = box.x_hi[static_cast<std::size_t>(d)] - box.x_lo[static_cast<std::size_t>(d)];
        if (w <= 0.0) return 0.0;
        m *= w;
    }
    const double wt = box.t_hi - box.t_lo;
    return wt <= 0.0 ? 0.0 : m * wt;
}

std::size_t Slab::x_count() const {
    std::size_t c = 1;
    for (int d = 0; d < n; ++d) c *= xs.size();
    return c;
}

double& Slab::at(std::size_t it, std::size_t iz, std::size_t ix) {
    return values[(it * zs.size() + iz) * x_count() + ix];
}
double Slab::at(std::size_t it, std::size_t iz, std::size_t ix) const {
    return values[(it * zs.size() + iz) * x_count() + ix];
}

void Slab::fill(const std::function<double(const std::array<double, 2>&, double, double)>& f) {
    values.assign(node_count(), 0.0);
    const std::size_t nx = x_count();
    for (std::size_t it = 0; it < ts.size(); ++it)
        for (std::size_t iz = 0; iz < zs.size(); ++iz)
            for (std::size_t ix = 0; ix < nx; ++ix) {
                std::array<double, 2> x{0.0, 0.0};
                std::size_t rem = ix;
                for (int d = n - 1; d >= 0; --d) {
                    x[static_cast<std::size_t>(d)] = xs[rem % xs.size()];
                    rem /= xs.size();
                }
                at(it, iz, ix) = f(x, zs[iz], ts[it]);
            }
}

std::vector<double> Slab::node_weights(double eps) const {
    // dual-cell weights: uniform dx^n in x, uniform in t (half cells at the
    // ends), exact z^eps slabs clipped to [z_clip_lo, z_clip_hi]
    std::vector<double> zw(zs.size(), 0.0);
    for (std::size_t j = 0; j < zs.size(); ++j) {
        const double lo = j == 0 ? z_clip_lo : 0.5 * (zs[j - 1] + zs[j]);
        const double hi = j + 1 == zs.size() ? z_clip_hi : 0.5 * (zs[j] + zs[j + 1]);
        zw[j] = z_weight(std::max(lo, z_clip_lo), std::min(hi, z_clip_hi), eps);
    }
    std::vector<double> tw(ts.size(), 1.0);
    if (ts.size() > 1) {
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double lo = i == 0 ? ts.front() : 0.5 * (ts[i - 1] + ts[i]);
            const double hi = i + 1 == ts.size() ? ts.back() : 0.5 * (ts[i] + ts[i + 1]);
            tw[i] = hi - lo;
        }
    }
    double xw = 1.0;
    for (int d = 0; d < n; ++d) xw *= dx;

    std::vector<double> w(node_count());
    const std::size_t nx = x_count();
    for (std::size_t it = 0; it < ts.size(); ++it)
        for (std::size_t iz = 0; iz < zs.size(); ++iz) {
            const double base = tw[it] * zw[iz] * xw;
            double* row = w.data() + (it * zs.size() + iz) * nx;
            for (std::size_t ix = 0; ix < nx; ++ix) row[ix] = base;
        }
    return w;
}

double Slab::total_weighted_measure(double eps) const {
    auto w = node_weights(eps);
    double s = 0.0;
    for (double v : w) s += v;
    return s;
}

Slab make_cylinder_slab(const Cylinder& cyl, const GridSpec& grid,
                        const std::vector<double>& z_ladder, std::vector<double> times) {
    cyl.validate();
    grid.validate();
    if (2.0 * cyl.r > grid.L)
        throw validation_error("make_cylinder_slab: cylinder exceeds the torus half-width");
    Slab s;
    s.n = grid.n;
    s.dx = grid.dx();
    // torus-centered x nodes with |x| <= r
    for (int i = 0; i < grid.N; ++i) {
        double x = i * s.dx;
        if (x >= 0.5 * grid.L) x -= grid.L;
        if (std::abs(x) <= cyl.r + 1e-12) s.xs.push_back(x);
    }
    std::sort(s.xs.begin(), s.xs.end());
    if (s.xs.empty()) throw validation_error("make_cylinder_slab: no x nodes inside the cylinder");

    s.zs.push_back(0.0);
    for (double z : z_ladder)
        if (z > 0.0 && z < cyl.r) s.zs.push_back(z);
    s.z_clip_lo = 0.0;
    s.z_clip_hi = cyl.r;

    std::sort(times.begin(), times.end());
    s.ts = std::move(times);
    if (s.ts.empty()) throw validation_error("make_cylinder_slab: empty time set");
    return s;
}

LevelSetStats level_set_stats(const Slab& slab, double eps, double s_cap) {
    if (eps < 0.0 || eps >= 1.0) throw validation_error("level_set_stats: eps must lie in [0,1)");
    if (slab.values.size() != slab.node_count())
        throw validation_error("level_set_stats: slab values not filled");
    LevelSetStats out;
    const auto w = slab.node_weights(eps);
    // classify v = 2 theta*
    std::vector<double> v(slab.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * slab.values[i];
    auto sums = kernels::classify_weighted(v, w, 0.0, 1.0);
    out.measA = sums.below;
    out.measB = sums.above;
    out.measC = sums.between;
    out.total = out.measA + out.measB + out.measC;
    out.S = std::min(out.measC, s_cap);

    // z^eps weighted Dirichlet energy of (2 theta*)_+ by finite differences,
    // summed over time dual cells
    double energy = 0.0;
    const std::size_t nx1 = slab.xs.size();
    const std::size_t nxall = slab.x_count();
    std::vector<double> tw(slab.ts.size(), 1.0);
    if (slab.ts.size() > 1)
        for (std::size_t i = 0; i < slab.ts.size(); ++i) {
            const double lo = i == 0 ? slab.ts.front() : 0.5 * (slab.ts[i - 1] + slab.ts[i]);
            const double hi = i + 1 == slab.ts.size() ? slab.ts.back() : 0.5 * (slab.ts[i] + slab.ts[i + 1]);
            tw[i] = hi - lo;
        }
    std::vector<double> zw(slab.zs.size(), 0.0);
    for (std::size_t j = 0; j < slab.zs.size(); ++j) {
        const double lo = j == 0 ? slab.z_clip_lo : 0.5 * (slab.zs[j - 1] + slab.zs[j]);
        const double hi = j + 1 == slab.zs.size() ? slab.z_clip_hi : 0.5 * (slab.zs[j] + slab.zs[j + 1]);
        zw[j] = z_weight(lo, hi, eps);
    }
    auto vp = [&](std::size_t it, std::size_t iz, std::size_t ix) {
        return std::max(2.0 * slab.at(it, iz, ix), 0.0);
    };
    double xcell = 1.0;
    for (int d = 0; d < slab.n; ++d) xcell *= slab.dx;
    for (std::size_t it = 0; it < slab.ts.size(); ++it) {
        double slice = 0.0;
        for (std::size_t iz = 0; iz < slab.zs.size(); ++iz) {
            for (std::size_t ix = 0; ix < nxall; ++ix) {
                double g2 = 0.0;
                // x gradients, forward differences inside the block
                std::size_t stride = 1;
                for (int d = slab.n - 1; d >= 0; --d) {
                    const std::size_t coord = (ix / stride) % nx1;
                    if (coord + 1 < nx1) {
                        const double diff =
                            (vp(it, iz, ix + stride) - vp(it, iz, ix)) / slab.dx;
                        g2 += diff * diff;
                    }
                    stride *= nx1;
                }
                if (iz + 1 < slab.zs.size()) {
                    const double dz = slab.zs[iz + 1] - slab.zs[iz];
                    const double diff = (vp(it, iz + 1, ix) - vp(it, iz, ix)) / dz;
                    g2 += diff * diff;
                }
                slice += zw[iz] * xcell * g2;
            }
        }
        energy += tw[it] * slice;
    }
    out.dirichlet = energy;
    return out;
}

IsoperimetricResult isoperimetric_check(const Slab& slice, double eps, double energy_cap) {
    if (slice.ts.size() != 1)
        throw validation_error("isoperimetric_check: expects a single time slice");
    LevelSetStats st = level_set_stats(slice, eps);
    IsoperimetricResult out;
    out.energy = st.dirichlet;
    if (st.total <= 0.0) throw validation_error("isoperimetric_check: empty slice");
    out.fracA = st.measA / st.total;
    out.fracB = st.measB / st.total;
    out.fracC = st.measC / st.total;
    const double cstar_given = std::max(st.dirichlet, energy_cap);
    out.lhs = cstar_given * out.fracC;
    out.rhs = out.fracA * out.fracA * out.fracB * out.fracB;
    out.satisfied = out.lhs >= out.rhs - 1e-12;
    out.Cstar = out.fracC > 0.0 ? out.rhs / out.fracC
                                : (out.rhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return out;
}

ExtendedTrajectory::ExtendedTrajectory(GridSpec grid,
                                       std::vector<std::pair<double, SpectralField>> snaps,
                                       std::vector<double> z_ladder)
    : grid_(grid), snaps_(std::move(snaps)), ladder_(std::move(z_ladder)), Q_(grid.alpha) {
    grid_.validate();
    if (snaps_.empty()) throw validation_error("ExtendedTrajectory: no snapshots");
    std::sort(snaps_.begin(), snaps_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

ExtendedTrajectory ExtendedTrajectory::from_trajectory(const Trajectory& traj,
                                                       std::vector<double> z_ladder) {
    std::vector<std::pair<double, SpectralField>> snaps;
    snaps.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) snaps.emplace_back(s.t, to_spectral(s.field));
    return ExtendedTrajectory(traj.grid, std::move(snaps), std::move(z_ladder));
}

Slab ExtendedTrajectory::slab(const Cylinder& cyl, std::size_t max_times) const {
    cyl.validate();
    const double t_lo = cyl.t_lo();
    std::vector<double> times;
    for (const auto& [t, F] : snaps_)
        if (t > t_lo - 1e-12 && t <= cyl.t_anchor + 1e-12) times.push_back(t);
    if (times.empty())
        throw validation_error("ExtendedTrajectory::slab: no snapshots inside the cylinder window");
    if (max_times > 0 && times.size() > max_times) {
        std::vector<double> thin;
        for (std::size_t i = 0; i < max_times; ++i)
            thin.push_back(times[i * (times.size() - 1) / (max_times - 1)]);
        thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
        times = std::move(thin);
    }

    Slab s = make_cylinder_slab(cyl, grid_, ladder_, times);

    // x node indices on the torus for the slab coordinates
    std::vector<std::size_t> xidx;
    for (double x : s.xs) {
        double wrapped = x < 0.0 ? x + grid_.L : x;
        auto i = static_cast<std::size_t>(std::llround(wrapped / grid_.dx())) %
                 static_cast<std::size_t>(grid_.N);
        xidx.push_back(i);
    }

    s.values.assign(s.node_count(), 0.0);
    const std::size_t nodes = grid_.size();
    std::vector<double> kmag(nodes);
    {
        std::array<int, 3> idx{0, 0, 0};
        const double ks = grid_.k_scale();
        for (std::size_t flat = 0; flat < nodes; ++flat) {
            unflatten(flat, grid_, idx);
            double k2 = 0.0;
            for (int d = 0; d < grid_.n; ++d) {
                double kd = wavenumber(idx[static_cast<std::size_t>(d)], grid_.N);
                k2 += kd * kd;
            }
            kmag[flat] = ks * std::sqrt(k2);
        }
    }

    for (std::size_t it = 0; it < s.ts.size(); ++it) {
        const SpectralField* F = nullptr;
        for (const auto& [t, snap] : snaps_)
            if (std::abs(t - s.ts[it]) <= 1e-12 * std::max(1.0, std::abs(t))) F = &snap;
        if (F == nullptr) throw validation_error("ExtendedTrajectory::slab: snapshot lookup failed");

        const std::ptrdiff_t nz = static_cast<std::ptrdiff_t>(s.zs.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t jz = 0; jz < nz; ++jz) {
            const std::size_t izz = static_cast<std::size_t>(jz);
            const double z = s.zs[izz];
            SpectralField slice = *F;
            if (z > 0.0) {
                std::vector<double> mult(nodes);
                for (std::size_t flat = 0; flat < nodes; ++flat)
                    mult[flat] = Q_.eval(kmag[flat] * z);
                kernels::cmul_real_serial(slice.coeffs, mult);
            }
            RealField r = to_real(slice);
            // gather the x-window
            const std::size_t nx1 = s.xs.size();
            const std::size_t nxall = s.x_count();
            for (std::size_t ix = 0; ix < nxall; ++ix) {
                std::size_t flat = 0, rem = ix;
                std::array<std::size_t, 2> coords{0, 0};
                for (int d = s.n - 1; d >= 0; --d) {
                    coords[static_cast<std::size_t>(d)] = rem % nx1;
                    rem /= nx1;
                }
                for (int d = 0; d < s.n; ++d)
                    flat = flat * static_cast<std::size_t>(grid_.N) +
                           xidx[coords[static_cast<std::size_t>(d)]];
                s.at(it, izz, ix) = r.samples[flat];
            }
        }
    }
    return s;
}

double oscillation(const Slab& slab) {
    if (slab.values.empty()) throw validation_error("oscillation: empty node set");
    double lo = slab.values[0], hi = slab.values[0];
    for (double v : slab.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

double oscillation(const ExtendedTrajectory& traj, const Cylinder& cyl) {
    return oscillation(traj.slab(cyl));
}

double OscillationSequence::fit_exponent(std::size_t drop_first) const {
    std::vector<double> lx, ly;
    for (std::size_t i = drop_first; i < radii.size(); ++i) {
        if (!(oscs[i] > 0.0)) continue;
        lx.push_back(std::log(radii[i]));
        ly.push_back(std::log(oscs[i]));
    }
    if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

OscillationSequence oscillation_decay_sequence(const ExtendedTrajectory& traj, double rho,
                                               int k_max, double r_base, double t_anchor) {
    if (!(rho > 0.0) || !(rho < 1.0))
        throw validation_error("oscillation_decay_sequence: rho must lie in (0,1)");
    OscillationSequence seq;
    const double floor = 4.0 * traj.grid().dx();
    double r = r_base;
    for (int k = 0; k <= k_max; ++k, r *= rho) {
        if (r < floor) {
            seq.floor_truncated = true;
            break;
        }
        Cylinder cyl{r, t_anchor, traj.alpha()};
        seq.radii.push_back(r);
        seq.oscs.push_back(oscillation(traj, cyl));
    }
    return seq;
}

double holder_seminorm(const RealField& theta, double exponent) {
    if (!(exponent > 0.0) || exponent > 1.0)
        throw validation_error("holder_seminorm: exponent must lie in (0,1]");
    const GridSpec& g = theta.grid;
    const double dx = g.dx();
    double best = 0.0;
    const std::size_t total = g.size();
    std::array<int, 3> idx{0, 0, 0};
    for (int p = 0; (1 << p) <= g.N / 2; ++p) {
        const int off = 1 << p;
        const double h = std::pow(off * dx, exponent);
        for (int d = 0; d < g.n; ++d) {
            // stride of axis d in the row-major layout
            std::size_t stride = 1;
            for (int dd = g.n - 1; dd > d; --dd) stride *= static_cast<std::size_t>(g.N);
            for (std::size_t flat = 0; flat < total; ++flat) {
                unflatten(flat, g, idx);
                const int coord = idx[static_cast<std::size_t>(d)];
                const int shifted = (coord + off) % g.N;
                const std::size_t other = flat + (static_cast<std::size_t>(shifted) -
                                                  static_cast<std::size_t>(coord)) * stride;
                const double diff = std::abs(theta.samples[other] - theta.samples[flat]);
                best = std::max(best, diff / h);
            }
        }
    }
    return best;
}

RecursionOutcome recursion_outcome(double C, double beta, const std::array<double, 3>& seed,
                                   int k_max) {
    // Log-space iteration L_k = k logC + beta L_{k-3}. Once a residue class
    // satisfies L_k + B_k <= -1 with B_k = |logC| (k/(beta-1) + 3 beta/(beta-1)^2)
    // its tail is dominated by -beta^m and heads to -inf; symmetrically
    // L_k - B_k >= 1 certifies divergence. -inf encodes an exact zero seed.
    const double neg_inf = -std::numeric_limits<double>::infinity();
    const double logC = std::log(C);
    const double b1 = 1.0 / (beta - 1.0);
    const double b2 = 3.0 * beta / ((beta - 1.0) * (beta - 1.0));
    std::array<double, 3> logA;
    std::array<bool, 3> collapsed{false, false, false};
    for (std::size_t i = 0; i < 3; ++i) {
        logA[i] = seed[i] > 0.0 ? std::log(seed[i]) : neg_inf;
        collapsed[i] = seed[i] <= 0.0;
    }
    auto all_collapsed = [&] { return collapsed[0] && collapsed[1] && collapsed[2]; };
    if (all_collapsed()) return RecursionOutcome::Converged;
    for (int k = 3; k <= k_max; ++k) {
        const std::size_t r = static_cast<std::size_t>(k % 3);
        if (collapsed[r]) continue;
        const double next = k * logC + beta * logA[r];
        logA[r] = next;
        const double bound = std::abs(logC) * (k * b1 + b2);
        if (next + bound <= -1.0) {
            collapsed[r] = true;
            if (all_collapsed()) return RecursionOutcome::Converged;
        } else if (next - bound >= 1.0) {
            return RecursionOutcome::Diverged;
        }
    }
    return RecursionOutcome::Undetermined;
}

RecursionResult degiorgi_recursion(const RecursionSpec& spec) {
    spec.validate();
    RecursionResult res;
    res.outcome = recursion_outcome(spec.C, spec.beta, spec.seedA, spec.k_max);
    res.converges = res.outcome == RecursionOutcome::Converged;

    auto conv = [&](double s) {
        return recursion_outcome(spec.C, spec.beta, {s, s, s}, spec.k_max) ==
               RecursionOutcome::Converged;
    };
    // the boundary can sit at exp(-O(log C * beta/(beta-1)^2)), so bracket
    // from far below and bisect in log space to relative precision
    double lo = 1e-290;
    if (!conv(lo)) return res; // threshold_found stays false
    double hi = lo;
    while (hi < 1e12 && conv(hi)) hi *= 4.0;
    if (hi >= 1e12) return res;
    lo = hi / 4.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-7 * hi; ++it) {
        const double mid = std::sqrt(lo * hi);
        (conv(mid) ? lo : hi) = mid;
    }
    res.threshold_epsilon0 = 0.5 * (lo + hi);
    res.threshold_found = true;
    return res;
}

long k_plus(double S, double q4) {
    if (!(S > 0.0)) throw validation_error("k_plus: S must be positive");
    if (!(q4 > 0.0)) throw validation_error("k_plus: cylinder measure must be positive");
    return static_cast<long>(std::ceil((1.0 / S + 1.0) * q4));
}

double q4_weighted_measure(int n, double alpha) {
    const double eps = 1.0 - alpha;
    return std::pow(8.0, n) * z_weight(0.0, 4.0, eps) * std::pow(4.0, alpha);
}

} // namespace sqg
