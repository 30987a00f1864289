// Timing comparison of the serial reference kernels against the OpenMP ones,
// plus a whole solver step in both modes.

#include "sqg/fft.hpp"
#include "sqg/initial_conditions.hpp"
#include "sqg/kernels.hpp"
#include "sqg/solver.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

using namespace sqg;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    fn(); // warm up
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const char* name, std::size_t n, double serial, double parallel) {
    std::printf("%-22s n=%9zu  serial %10.3f us   omp %10.3f us   speedup %5.2fx\n", name, n,
                serial * 1e6, parallel * 1e6, serial / parallel);
}

} // namespace

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
    omp_set_num_threads(threads);
    std::printf("kernel benchmark with %d threads\n\n", threads);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    for (std::size_t n : {1u << 14, 1u << 18, 1u << 21}) {
        std::vector<std::complex<double>> c(n);
        std::vector<double> m(n), a(n), b(n), u(n), v(n), out(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = {unif(rng), unif(rng)};
            m[i] = unif(rng);
            a[i] = unif(rng);
            b[i] = unif(rng);
            u[i] = unif(rng);
            v[i] = unif(rng);
            w[i] = std::abs(unif(rng));
        }
        const int reps = n > (1u << 20) ? 20 : 200;

        report("cmul_real", n,
               time_of([&] { kernels::cmul_real_serial(c, m); }, reps),
               time_of([&] { kernels::cmul_real_omp(c, m); }, reps));
        report("product_sum", n,
               time_of([&] { kernels::product_sum_serial(u, a, v, b, out); }, reps),
               time_of([&] { kernels::product_sum_omp(u, a, v, b, out); }, reps));
        report("sum_squares", n,
               time_of([&] { kernels::sum_squares_serial(a); }, reps),
               time_of([&] { kernels::sum_squares_omp(a); }, reps));
        report("weighted_mod2_sum", n,
               time_of([&] { kernels::weighted_mod2_sum_serial(c, w); }, reps),
               time_of([&] { kernels::weighted_mod2_sum_omp(c, w); }, reps));
        report("max_abs", n,
               time_of([&] { kernels::max_abs_serial(a); }, reps),
               time_of([&] { kernels::max_abs_omp(a); }, reps));
        report("classify_weighted", n,
               time_of([&] { kernels::classify_weighted_serial(a, w, 0.0, 0.5); }, reps),
               time_of([&] { kernels::classify_weighted_omp(a, w, 0.0, 0.5); }, reps));
        std::printf("\n");
    }

    // one full solver step, serial vs parallel kernel mode
    for (int N : {128, 256}) {
        SolverConfig cfg;
        cfg.grid.N = N;
        cfg.grid.alpha = 0.75;
        cfg.dt = 1e-3;
        cfg.ic.preset = "gaussian_vortices";
        cfg.ic.normalize = "sup";
        SpectralField state = make_initial_condition(cfg.grid, cfg.ic);

        double serial, parallel;
        {
            kernels::ParallelGuard guard(false);
            serial = time_of([&] { auto next = step(state, cfg); }, 20);
        }
        {
            kernels::ParallelGuard guard(true);
            parallel = time_of([&] { auto next = step(state, cfg); }, 20);
        }
        std::printf("solver step N=%-5d        serial %10.3f ms   omp %10.3f ms   speedup %5.2fx\n",
                    N, serial * 1e3, parallel * 1e3, serial / parallel);
    }
    return 0;
}
