#include "sqg/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

namespace sqg::kernels {

namespace {
std::atomic<bool> g_parallel{true};
constexpr std::size_t kChunk = 8192;

inline std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }
} // namespace

void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }
bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }

// ---------------------------------------------------------------- cmul_real

void cmul_real_serial(std::span<cplx> a, std::span<const double> m) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) a[i] *= m[i];
}

void cmul_real_omp(std::span<cplx> a, std::span<const double> m) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] *= m[static_cast<std::size_t>(i)];
}

void cmul_real(std::span<cplx> a, std::span<const double> m) {
    parallel_enabled() ? cmul_real_omp(a, m) : cmul_real_serial(a, m);
}

// ------------------------------------------------------------- cmul_complex

void cmul_complex_serial(std::span<cplx> a, std::span<const cplx> m) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) a[i] *= m[i];
}

void cmul_complex_omp(std::span<cplx> a, std::span<const cplx> m) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] *= m[static_cast<std::size_t>(i)];
}

void cmul_complex(std::span<cplx> a, std::span<const cplx> m) {
    parallel_enabled() ? cmul_complex_omp(a, m) : cmul_complex_serial(a, m);
}

// -------------------------------------------------------------- product_sum

void product_sum_serial(std::span<const double> u1, std::span<const double> g1,
                        std::span<const double> u2, std::span<const double> g2,
                        std::span<double> out) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = u1[i] * g1[i] + u2[i] * g2[i];
}

void product_sum_omp(std::span<const double> u1, std::span<const double> g1,
                     std::span<const double> u2, std::span<const double> g2,
                     std::span<double> out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::size_t j = static_cast<std::size_t>(i);
        out[j] = u1[j] * g1[j] + u2[j] * g2[j];
    }
}

void product_sum(std::span<const double> u1, std::span<const double> g1,
                 std::span<const double> u2, std::span<const double> g2,
                 std::span<double> out) {
    parallel_enabled() ? product_sum_omp(u1, g1, u2, g2, out)
                       : product_sum_serial(u1, g1, u2, g2, out);
}

// -------------------------------------------------------------- reductions

namespace {

template <typename F>
double chunked_sum(std::size_t n, bool par, F&& chunk_sum) {
    const std::size_t nc = chunk_count(n);
    if (nc == 0) return 0.0;
    std::vector<double> partial(nc, 0.0);
    if (par) {
        const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(nc);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < m; ++c) {
            const std::size_t cc = static_cast<std::size_t>(c);
            partial[cc] = chunk_sum(cc * kChunk, std::min(n, (cc + 1) * kChunk));
        }
    } else {
        for (std::size_t c = 0; c < nc; ++c)
            partial[c] = chunk_sum(c * kChunk, std::min(n, (c + 1) * kChunk));
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

} // namespace

double sum_squares_serial(std::span<const double> a) {
    return chunked_sum(a.size(), false, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += a[i] * a[i];
        return s;
    });
}

double sum_squares_omp(std::span<const double> a) {
    return chunked_sum(a.size(), true, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += a[i] * a[i];
        return s;
    });
}

double sum_squares(std::span<const double> a) {
    return parallel_enabled() ? sum_squares_omp(a) : sum_squares_serial(a);
}

double weighted_mod2_sum_serial(std::span<const cplx> c, std::span<const double> w) {
    return chunked_sum(c.size(), false, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += w[i] * std::norm(c[i]);
        return s;
    });
}

double weighted_mod2_sum_omp(std::span<const cplx> c, std::span<const double> w) {
    return chunked_sum(c.size(), true, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s += w[i] * std::norm(c[i]);
        return s;
    });
}

double weighted_mod2_sum(std::span<const cplx> c, std::span<const double> w) {
    return parallel_enabled() ? weighted_mod2_sum_omp(c, w) : weighted_mod2_sum_serial(c, w);
}

namespace {
template <typename F>
double chunked_max(std::size_t n, bool par, F&& chunk_max) {
    const std::size_t nc = chunk_count(n);
    if (nc == 0) return 0.0;
    std::vector<double> partial(nc, 0.0);
    if (par) {
        const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(nc);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < m; ++c) {
            const std::size_t cc = static_cast<std::size_t>(c);
            partial[cc] = chunk_max(cc * kChunk, std::min(n, (cc + 1) * kChunk));
        }
    } else {
        for (std::size_t c = 0; c < nc; ++c)
            partial[c] = chunk_max(c * kChunk, std::min(n, (c + 1) * kChunk));
    }
    double s = 0.0;
    for (double p : partial) s = std::max(s, p);
    return s;
}
} // namespace

double max_abs_serial(std::span<const double> a) {
    return chunked_max(a.size(), false, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s = std::max(s, std::abs(a[i]));
        return s;
    });
}

double max_abs_omp(std::span<const double> a) {
    return chunked_max(a.size(), true, [&](std::size_t b, std::size_t e) {
        double s = 0.0;
        for (std::size_t i = b; i < e; ++i) s = std::max(s, std::abs(a[i]));
        return s;
    });
}

double max_abs(std::span<const double> a) {
    return parallel_enabled() ? max_abs_omp(a) : max_abs_serial(a);
}

// --------------------------------------------------------- classify_weighted

namespace {
template <bool Par>
ClassifySums classify_impl(std::span<const double> v, std::span<const double> w,
                           double lo, double hi) {
    const std::size_t n = v.size();
    const std::size_t nc = chunk_count(n);
    ClassifySums total;
    if (nc == 0) return total;
    std::vector<ClassifySums> partial(nc);
    auto chunk = [&](std::size_t c) {
        ClassifySums s;
        const std::size_t b = c * kChunk, e = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = b; i < e; ++i) {
            if (v[i] <= lo)
                s.below += w[i];
            else if (v[i] >= hi)
                s.above += w[i];
            else
                s.between += w[i];
        }
        partial[c] = s;
    };
    if constexpr (Par) {
        const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(nc);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < m; ++c) chunk(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < nc; ++c) chunk(c);
    }
    for (const auto& p : partial) {
        total.below += p.below;
        total.between += p.between;
        total.above += p.above;
    }
    return total;
}
} // namespace

ClassifySums classify_weighted_serial(std::span<const double> v, std::span<const double> w,
                                      double lo, double hi) {
    return classify_impl<false>(v, w, lo, hi);
}

ClassifySums classify_weighted_omp(std::span<const double> v, std::span<const double> w,
                                   double lo, double hi) {
    return classify_impl<true>(v, w, lo, hi);
}

ClassifySums classify_weighted(std::span<const double> v, std::span<const double> w,
                               double lo, double hi) {
    return parallel_enabled() ? classify_weighted_omp(v, w, lo, hi)
                              : classify_weighted_serial(v, w, lo, hi);
}

} // namespace sqg::kernels
