#pragma once

#include <complex>
#include <cstddef>
#include <span>

// Data-parallel inner loops shared by the spectral operators, the solver and
// the diagnostics. Every kernel has a serial reference implementation and an
// OpenMP one; the dispatching wrapper picks per the global toggle. Reductions
// accumulate over fixed-size chunks in chunk order, so results are bitwise
// identical between the two paths and independent of the thread count.

namespace sqg::kernels {

void set_parallel(bool on);
bool parallel_enabled();

/// RAII guard for flipping the kernel mode inside a scope (used by tests and
/// the benchmark).
class ParallelGuard {
public:
    explicit ParallelGuard(bool on) : saved_(parallel_enabled()) { set_parallel(on); }
    ~ParallelGuard() { set_parallel(saved_); }
    ParallelGuard(const ParallelGuard&) = delete;
    ParallelGuard& operator=(const ParallelGuard&) = delete;

private:
    bool saved_;
};

using cplx = std::complex<double>;

// a[i] *= m[i]
void cmul_real(std::span<cplx> a, std::span<const double> m);
void cmul_real_serial(std::span<cplx> a, std::span<const double> m);
void cmul_real_omp(std::span<cplx> a, std::span<const double> m);

// a[i] *= m[i]
void cmul_complex(std::span<cplx> a, std::span<const cplx> m);
void cmul_complex_serial(std::span<cplx> a, std::span<const cplx> m);
void cmul_complex_omp(std::span<cplx> a, std::span<const cplx> m);

// out[i] = u1[i]*g1[i] + u2[i]*g2[i]  (advection product u . grad)
void product_sum(std::span<const double> u1, std::span<const double> g1,
                 std::span<const double> u2, std::span<const double> g2,
                 std::span<double> out);
void product_sum_serial(std::span<const double> u1, std::span<const double> g1,
                        std::span<const double> u2, std::span<const double> g2,
                        std::span<double> out);
void product_sum_omp(std::span<const double> u1, std::span<const double> g1,
                     std::span<const double> u2, std::span<const double> g2,
                     std::span<double> out);

// sum_i a[i]^2, deterministic chunked accumulation
double sum_squares(std::span<const double> a);
double sum_squares_serial(std::span<const double> a);
double sum_squares_omp(std::span<const double> a);

// sum_i w[i] |c[i]|^2
double weighted_mod2_sum(std::span<const cplx> c, std::span<const double> w);
double weighted_mod2_sum_serial(std::span<const cplx> c, std::span<const double> w);
double weighted_mod2_sum_omp(std::span<const cplx> c, std::span<const double> w);

double max_abs(std::span<const double> a);
double max_abs_serial(std::span<const double> a);
double max_abs_omp(std::span<const double> a);

/// Weighted three-way classification of nodal values against levels lo < hi:
/// sums node weights w[i] into below (v <= lo), above (v >= hi) and
/// between buckets. Used by the level-set diagnostics.
struct ClassifySums {
    double below = 0.0;
    double between = 0.0;
    double above = 0.0;
};
ClassifySums classify_weighted(std::span<const double> v, std::span<const double> w,
                               double lo, double hi);
ClassifySums classify_weighted_serial(std::span<const double> v, std::span<const double> w,
                                      double lo, double hi);
ClassifySums classify_weighted_omp(std::span<const double> v, std::span<const double> w,
                                   double lo, double hi);

} // namespace sqg::kernels
