#include "sqg/barrier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace sqg {

namespace {

constexpr int kGL = 6;
constexpr double kGLx[kGL] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                              0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
constexpr double kGLw[kGL] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                              0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

struct Cell {
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{0.0, 0.0};
};

double kernel_value(int n, double alpha, double z, const std::vector<double>& x,
                    const std::array<double, 2>& y) {
    double r2 = z * z;
    for (int d = 0; d < n; ++d) {
        const double dd = x[static_cast<std::size_t>(d)] - y[static_cast<std::size_t>(d)];
        r2 += dd * dd;
    }
    return std::pow(z, alpha) / std::pow(r2, 0.5 * (n + alpha));
}

double gl_cell(int n, double alpha, double z, const std::vector<double>& x, const Cell& c) {
    if (n == 1) {
        const double mid = 0.5 * (c.lo[0] + c.hi[0]), half = 0.5 * (c.hi[0] - c.lo[0]);
        double s = 0.0;
        for (int i = 0; i < kGL; ++i)
            s += kGLw[i] * kernel_value(n, alpha, z, x, {mid + half * kGLx[i], 0.0});
        return s * half;
    }
    const double mx = 0.5 * (c.lo[0] + c.hi[0]), hx = 0.5 * (c.hi[0] - c.lo[0]);
    const double my = 0.5 * (c.lo[1] + c.hi[1]), hy = 0.5 * (c.hi[1] - c.lo[1]);
    double s = 0.0;
    for (int i = 0; i < kGL; ++i)
        for (int j = 0; j < kGL; ++j)
            s += kGLw[i] * kGLw[j] *
                 kernel_value(n, alpha, z, x, {mx + hx * kGLx[i], my + hy * kGLx[j]});
    return s * hx * hy;
}

double cube_integral(int n, double alpha, double z, const std::vector<double>& x, Cell c,
                     int depth = 0) {
    // kernel varies on the scale sqrt(z^2 + dist^2); refine cells larger than
    // half of it
    double d2 = z * z;
    double diam = 0.0;
    for (int d = 0; d < n; ++d) {
        const double lo = c.lo[static_cast<std::size_t>(d)], hi = c.hi[static_cast<std::size_t>(d)];
        const double xd = x[static_cast<std::size_t>(d)];
        const double gap = xd < lo ? lo - xd : (xd > hi ? xd - hi : 0.0);
        d2 += gap * gap;
        diam = std::max(diam, hi - lo);
    }
    const double scale = std::sqrt(d2);
    if (depth >= 12 || diam <= 0.5 * scale) return gl_cell(n, alpha, z, x, c);

    double total = 0.0;
    if (n == 1) {
        const double mid = 0.5 * (c.lo[0] + c.hi[0]);
        total += cube_integral(n, alpha, z, x, {{c.lo[0], 0.0}, {mid, 0.0}}, depth + 1);
        total += cube_integral(n, alpha, z, x, {{mid, 0.0}, {c.hi[0], 0.0}}, depth + 1);
    } else {
        const double mx = 0.5 * (c.lo[0] + c.hi[0]);
        const double my = 0.5 * (c.lo[1] + c.hi[1]);
        total += cube_integral(n, alpha, z, x, {{c.lo[0], c.lo[1]}, {mx, my}}, depth + 1);
        total += cube_integral(n, alpha, z, x, {{mx, c.lo[1]}, {c.hi[0], my}}, depth + 1);
        total += cube_integral(n, alpha, z, x, {{c.lo[0], my}, {mx, c.hi[1]}}, depth + 1);
        total += cube_integral(n, alpha, z, x, {{mx, my}, {c.hi[0], c.hi[1]}}, depth + 1);
    }
    return total;
}

} // namespace

double barrier_kernel(const BarrierSpec& spec, const std::vector<double>& x, double z) {
    if (static_cast<int>(x.size()) != spec.n)
        throw validation_error("barrier_kernel: point dimension mismatch");
    if (z <= 0.0) return 0.0;
    double total = 0.0;
    for (double center : {-4.0, 4.0}) {
        Cell c;
        for (int d = 0; d < spec.n; ++d) {
            c.lo[static_cast<std::size_t>(d)] = center - spec.omega;
            c.hi[static_cast<std::size_t>(d)] = center + spec.omega;
        }
        total += cube_integral(spec.n, spec.alpha, z, x, c);
    }
    return total;
}

BarrierResult barrier_field(const BarrierSpec& spec, const BarrierGrid& grid) {
    spec.validate();
    if (grid.nx < 3 || grid.nz < 2) throw validation_error("barrier_field: grid too coarse");

    BarrierResult res;
    res.K_exact = barrier_kernel(spec, std::vector<double>(static_cast<std::size_t>(spec.n), 0.0), 4.0);
    res.K_paper_form =
        2.0 * std::pow(spec.omega, spec.n) * std::pow(1.0 + spec.n, -0.5 * (spec.n + spec.alpha));
    res.K_discrepancy = res.K_paper_form / res.K_exact;

    auto coords = [](double lo, double hi, int count) {
        std::vector<double> v(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
        return v;
    };

    struct Sample {
        std::vector<double> x;
        double z;
        bool top;
    };
    std::vector<Sample> boundary;
    const auto xs = coords(-4.0, 4.0, grid.nx);

    // top face z = 4
    if (spec.n == 1) {
        for (double x : xs) boundary.push_back({{x}, 4.0, true});
    } else {
        for (double a : xs)
            for (double b : xs) boundary.push_back({{a, b}, 4.0, true});
    }
    // lateral walls, z uniform on (0, 4]
    std::vector<double> zwall(static_cast<std::size_t>(grid.nz));
    for (int j = 1; j <= grid.nz; ++j)
        zwall[static_cast<std::size_t>(j - 1)] = 4.0 * j / grid.nz;
    for (int d = 0; d < spec.n; ++d) {
        for (double side : {-4.0, 4.0}) {
            if (spec.n == 1) {
                for (double z : zwall) boundary.push_back({{side}, z, false});
            } else {
                for (double other : xs)
                    for (double z : zwall) {
                        std::vector<double> x(2);
                        x[static_cast<std::size_t>(d)] = side;
                        x[static_cast<std::size_t>(1 - d)] = other;
                        boundary.push_back({x, z, false});
                    }
            }
        }
    }

    double inf_all = std::numeric_limits<double>::infinity();
    double inf_top = std::numeric_limits<double>::infinity();
    double argmin_z = 0.0;
    const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(boundary.size());
#pragma omp parallel
    {
        double local_inf = std::numeric_limits<double>::infinity();
        double local_top = std::numeric_limits<double>::infinity();
        double local_z = 0.0;
#pragma omp for schedule(dynamic, 8) nowait
        for (std::ptrdiff_t i = 0; i < nb; ++i) {
            const auto& s = boundary[static_cast<std::size_t>(i)];
            const double v = barrier_kernel(spec, s.x, s.z) / res.K_exact;
            if (v < local_inf) {
                local_inf = v;
                local_z = s.z;
            }
            if (s.top) local_top = std::min(local_top, v);
        }
#pragma omp critical
        {
            if (local_inf < inf_all) {
                inf_all = local_inf;
                argmin_z = local_z;
            }
            inf_top = std::min(inf_top, local_top);
        }
    }
    res.inf_boundary = inf_all;
    res.inf_top = inf_top;
    res.boundary_argmin_z = argmin_z;

    // sup over B_{c0}* samples
    const auto xi = coords(-spec.c0, spec.c0, grid.nx);
    std::vector<Sample> inner;
    for (int j = 0; j < grid.nz; ++j) {
        const double z = spec.c0 * (j + 0.5) / grid.nz;
        if (spec.n == 1) {
            for (double x : xi) inner.push_back({{x}, z, false});
        } else {
            for (double a : xi)
                for (double b : xi) inner.push_back({{a, b}, z, false});
        }
    }
    double sup_inner = 0.0;
    const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(inner.size());
#pragma omp parallel
    {
        double local = 0.0;
#pragma omp for schedule(dynamic, 8) nowait
        for (std::ptrdiff_t i = 0; i < ni; ++i) {
            const auto& s = inner[static_cast<std::size_t>(i)];
            local = std::max(local, barrier_kernel(spec, s.x, s.z) / res.K_exact);
        }
#pragma omp critical
        sup_inner = std::max(sup_inner, local);
    }
    res.sup_inner = sup_inner;

    res.deep_interior_value =
        barrier_kernel(spec, std::vector<double>(static_cast<std::size_t>(spec.n), 0.0), 1e-3) /
        res.K_exact;
    return res;
}

double lambda_estimate(const BarrierSpec& spec, const BarrierGrid& grid) {
    BarrierResult res = barrier_field(spec, grid);
    const double lambda = 1.0 - res.sup_inner;
    if (!(lambda > 0.0))
        throw numerical_error("barrier", "lambda_estimate: barrier sup reaches 1 on the inner box");
    return lambda;
}

} // namespace sqg
