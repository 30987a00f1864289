#include "sqg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace sqg {

namespace {

// One cached plan per (n, N, sign). Plans are created against scratch buffers
// with FFTW_UNALIGNED so fftw_execute_dft may run on arbitrary caller arrays.
class PlanCache {
public:
    static fftw_plan get(int n, int N, int sign) {
        static PlanCache cache;
        std::scoped_lock lock(cache.mu_);
        auto key = std::make_tuple(n, N, sign);
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end()) return it->second;

        std::size_t total = 1;
        std::vector<int> dims(static_cast<std::size_t>(n), N);
        for (int d = 0; d < n; ++d) total *= static_cast<std::size_t>(N);
        fftw_complex* buf = fftw_alloc_complex(total);
        fftw_plan p = fftw_plan_dft(n, dims.data(), buf, buf, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        cache.plans_.emplace(key, p);
        return p;
    }

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [k, p] : plans_) fftw_destroy_plan(p);
    }
    std::mutex mu_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

} // namespace

SpectralField to_spectral(const RealField& f) {
    f.grid.validate();
    const std::size_t total = f.grid.size();
    SpectralField out(f.grid);
    std::vector<std::complex<double>> in(total);
    for (std::size_t i = 0; i < total; ++i) in[i] = {f.samples[i], 0.0};

    fftw_plan p = PlanCache::get(f.grid.n, f.grid.N, FFTW_FORWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.coeffs.data()));
    const double scale = 1.0 / static_cast<double>(total);
    for (auto& c : out.coeffs) c *= scale;
    return out;
}

RealField to_real(const SpectralField& F) {
    F.grid.validate();
    const std::size_t total = F.grid.size();
    std::vector<std::complex<double>> work(total);
    fftw_plan p = PlanCache::get(F.grid.n, F.grid.N, FFTW_BACKWARD);
    // const_cast is safe: FFTW does not modify the input of an out-of-place c2c.
    fftw_execute_dft(p,
                     reinterpret_cast<fftw_complex*>(
                         const_cast<std::complex<double>*>(F.coeffs.data())),
                     reinterpret_cast<fftw_complex*>(work.data()));
    RealField out(F.grid);
    for (std::size_t i = 0; i < total; ++i) out.samples[i] = work[i].real();
    return out;
}

double SpectralField::hermitian_defect() const {
    double worst = 0.0;
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        unflatten(flat, grid, idx);
        std::size_t conj_flat = 0;
        for (int d = 0; d < grid.n; ++d) {
            int neg = (grid.N - idx[static_cast<std::size_t>(d)]) % grid.N;
            conj_flat = conj_flat * static_cast<std::size_t>(grid.N) + static_cast<std::size_t>(neg);
        }
        std::complex<double> diff = coeffs[flat] - std::conj(coeffs[conj_flat]);
        worst = std::max(worst, std::abs(diff));
    }
    return worst;
}

} // namespace sqg
