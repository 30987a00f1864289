#include "sqg/extension.hpp"

#include "sqg/fft.hpp"
#include "sqg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace sqg {

double poisson_normalization(int n, double alpha) {
    if (n < 1) throw validation_error("poisson_normalization: n must be >= 1");
    if (!(alpha > 0.0) || alpha >= 2.0)
        throw validation_error("poisson_normalization: alpha must lie in (0,2)");
    return std::exp(std::lgamma(0.5 * (n + alpha)) - std::lgamma(0.5 * alpha)) /
           std::pow(kPi, 0.5 * n);
}

namespace {

/// 10-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 10;
constexpr double kGLx[kGL] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
                              -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
                              0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
                              0.9739065285171717};
constexpr double kGLw[kGL] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820,
                              0.2692667193099963, 0.2955242247147529, 0.2955242247147529,
                              0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                              0.0666713443086881};

template <typename F>
double gl_panel(double a, double b, F&& f) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kGL; ++i) s += kGLw[i] * f(mid + half * kGLx[i]);
    return s * half;
}

} // namespace

ExtensionMultiplier::ExtensionMultiplier(double alpha) : alpha_(alpha), nu_(0.5 * alpha) {
    if (!(alpha > 0.0) || alpha >= 2.0)
        throw validation_error("ExtensionMultiplier: alpha must lie in (0,2)");
    log_gamma_nu_ = std::lgamma(nu_);
}

double ExtensionMultiplier::quadrature(double zeta, int panels_per_unit) const {
    // integral of exp(nu*u - e^u - (zeta^2/4) e^{-u}) du over the real line;
    // the saddle at e^u ~ zeta/2 has width ~ zeta^{-1/2} in u, so the panel
    // density grows with sqrt(zeta)
    const double q = 0.25 * zeta * zeta;
    const double u_hi = 7.0;
    double u_lo = -50.0 / nu_;
    if (q > 0.0) u_lo = std::max(u_lo, std::log(q / 745.0));
    u_lo = std::min(u_lo, -1.0);

    const double density = panels_per_unit * std::max(1.0, std::sqrt(zeta) / 3.0);
    const int panels = std::max(4, static_cast<int>((u_hi - u_lo) * density));
    const double w = (u_hi - u_lo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        total += gl_panel(u_lo + p * w, u_lo + (p + 1) * w, [&](double u) {
            const double eu = std::exp(u);
            return std::exp(nu_ * u - eu - q / eu);
        });
    }
    return total;
}

double ExtensionMultiplier::eval(double zeta) const {
    if (zeta < 0.0) throw validation_error("ExtensionMultiplier: zeta must be >= 0");
    if (zeta == 0.0) return 1.0;
    if (zeta > 1400.0) return 0.0; // below double underflow of exp(-zeta)

    {
        std::shared_lock lock(mu_);
        auto it = cache_.find(zeta);
        if (it != cache_.end()) return it->second;
    }

    double value;
    if (zeta < 1e-5) {
        // small-zeta expansion; remainder O(zeta^{2+alpha})
        const double c1 = std::exp(std::lgamma(1.0 - nu_) - std::lgamma(1.0 + nu_));
        value = 1.0 - c1 * std::pow(0.5 * zeta, 2.0 * nu_) +
                zeta * zeta / (4.0 * (1.0 - nu_));
        achieved_error_ = std::pow(zeta, 2.0 + 2.0 * nu_);
    } else {
        const double coarse = quadrature(zeta, 2);
        const double fine = quadrature(zeta, 4);
        const double scale = std::exp(log_gamma_nu_);
        value = fine / scale;
        const double err = std::abs(fine - coarse) / std::max(fine, 1e-300);
        achieved_error_ = err;
        if (!(err < 1e-9) && fine > 1e-280)
            throw numerical_error("quadrature",
                                  "extension multiplier quadrature did not converge (rel err " +
                                      std::to_string(err) + " at zeta = " + std::to_string(zeta) + ")");
    }

    std::unique_lock lock(mu_);
    cache_.emplace(zeta, value);
    return value;
}

double ExtensionMultiplier::dz(double k_mag, double z) const {
    if (!(z > 0.0)) throw validation_error("ExtensionMultiplier::dz: z must be positive");
    const double zeta = k_mag * z;
    if (zeta == 0.0) return 0.0;
    if (zeta > 1400.0) return 0.0;
    // Q'(zeta) = -(zeta / (2 Gamma(nu))) int s^{nu-2} exp(-s - zeta^2/4s) ds
    const double q = 0.25 * zeta * zeta;
    const double u_hi = 7.0;
    double u_lo = std::max(std::log(q / 745.0), -745.0);
    u_lo = std::min(u_lo, -1.0);
    auto integ = [&](int ppu) {
        const int panels = std::max(4, static_cast<int>((u_hi - u_lo) * ppu));
        const double w = (u_hi - u_lo) / panels;
        double total = 0.0;
        for (int p = 0; p < panels; ++p)
            total += gl_panel(u_lo + p * w, u_lo + (p + 1) * w, [&](double u) {
                const double eu = std::exp(u);
                return std::exp((nu_ - 1.0) * u - eu - q / eu);
            });
        return total;
    };
    const double fine = integ(4);
    return -k_mag * 0.5 * zeta * fine / std::exp(log_gamma_nu_);
}

std::vector<double> geometric_ladder(double z_min, double z_max, int count) {
    if (!(z_min > 0.0) || !(z_max > z_min) || count < 2)
        throw validation_error("geometric_ladder: need 0 < z_min < z_max, count >= 2");
    std::vector<double> z(static_cast<std::size_t>(count));
    const double r = std::pow(z_max / z_min, 1.0 / (count - 1));
    double v = z_min;
    for (int i = 0; i < count; ++i, v *= r) z[static_cast<std::size_t>(i)] = v;
    z.back() = z_max;
    return z;
}

ExtensionField extend(const SpectralField& theta, std::vector<double> z_levels,
                      bool include_boundary) {
    theta.grid.validate();
    if (z_levels.empty()) throw validation_error("extend: empty z ladder");
    for (std::size_t i = 0; i < z_levels.size(); ++i) {
        if (!(z_levels[i] > 0.0)) throw validation_error("extend: z levels must be positive");
        if (i > 0 && z_levels[i] <= z_levels[i - 1])
            throw validation_error("extend: z levels must be strictly increasing");
    }

    ExtensionField E;
    E.grid = theta.grid;
    E.epsilon = 1.0 - theta.grid.alpha;
    if (include_boundary) {
        E.z_levels.push_back(0.0);
        for (double z : z_levels) E.z_levels.push_back(z);
    } else {
        E.z_levels = z_levels;
    }
    const std::size_t nodes = theta.grid.size();
    E.values.assign(E.level_count() * nodes, 0.0);

    ExtensionMultiplier Q(theta.grid.alpha);
    const double ks = theta.grid.k_scale();

    // |kappa| per mode, shared across levels
    std::vector<double> kmag(nodes);
    {
        std::array<int, 3> idx{0, 0, 0};
        for (std::size_t flat = 0; flat < nodes; ++flat) {
            unflatten(flat, theta.grid, idx);
            double k2 = 0.0;
            for (int d = 0; d < theta.grid.n; ++d) {
                double kd = wavenumber(idx[static_cast<std::size_t>(d)], theta.grid.N);
                k2 += kd * kd;
            }
            kmag[flat] = ks * std::sqrt(k2);
        }
    }

    const std::ptrdiff_t levels = static_cast<std::ptrdiff_t>(E.level_count());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t j = 0; j < levels; ++j) {
        const std::size_t jj = static_cast<std::size_t>(j);
        const double z = E.z_levels[jj];
        SpectralField slice = theta;
        if (z > 0.0) {
            std::vector<double> mult(nodes);
            for (std::size_t flat = 0; flat < nodes; ++flat) mult[flat] = Q.eval(kmag[flat] * z);
            kernels::cmul_real_serial(slice.coeffs, mult);
        }
        RealField r = to_real(slice);
        std::copy(r.samples.begin(), r.samples.end(), E.level(jj));
    }
    return E;
}

namespace {

std::vector<std::size_t> positive_levels(const ExtensionField& E) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < E.level_count(); ++j)
        if (E.z_levels[j] > 0.0) out.push_back(j);
    return out;
}

} // namespace

RealField neumann_trace(const ExtensionField& E, double alpha) {
    const auto pos = positive_levels(E);
    if (pos.size() < 3)
        throw validation_error("neumann_trace: need at least 3 positive z levels");
    const std::size_t m = std::min<std::size_t>(5, pos.size());
    const double eps = 1.0 - alpha;

    std::vector<SpectralField> slices;
    std::vector<double> zs;
    for (std::size_t j = 0; j < m; ++j) {
        RealField f(E.grid);
        std::copy(E.level(pos[j]), E.level(pos[j]) + E.grid.size(), f.samples.begin());
        slices.push_back(to_spectral(f));
        zs.push_back(E.z_levels[pos[j]]);
    }

    using cd = std::complex<double>;
    const std::size_t nodes = E.grid.size();
    const std::size_t nh = m - 1;
    std::vector<std::vector<cd>> h(nh, std::vector<cd>(nodes));
    std::vector<double> zbar(nh);
    for (std::size_t j = 0; j < nh; ++j) {
        zbar[j] = std::sqrt(zs[j] * zs[j + 1]);
        const double w = std::pow(zbar[j], eps) / (zs[j + 1] - zs[j]);
        for (std::size_t i = 0; i < nodes; ++i)
            h[j][i] = w * (slices[j + 1].coeffs[i] - slices[j].coeffs[i]);
    }

    auto richardson = [&](const std::vector<std::vector<cd>>& g, const std::vector<double>& pts,
                          double p) {
        std::vector<std::vector<cd>> out(g.size() - 1, std::vector<cd>(nodes));
        std::vector<double> opts(g.size() - 1);
        for (std::size_t j = 0; j + 1 < g.size(); ++j) {
            const double rho = pts[j + 1] / pts[j];
            const double rp = std::pow(rho, p);
            for (std::size_t i = 0; i < nodes; ++i)
                out[j][i] = (rp * g[j][i] - g[j + 1][i]) / (rp - 1.0);
            opts[j] = pts[j];
        }
        return std::make_pair(out, opts);
    };

    auto sum_abs_diff = [&](const std::vector<std::vector<cd>>& g) {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) s += std::abs(g[1][i] - g[0][i]);
        return s;
    };

    auto [g1, z1] = richardson(h, zbar, 2.0 - alpha);
    std::vector<cd> limit;
    if (g1.size() >= 2) {
        const double defect0 = sum_abs_diff(h);
        const double defect1 = sum_abs_diff(g1);
        if (defect1 > 1.5 * defect0 && defect0 > 1e-12)
            throw numerical_error("extrapolation", "Neumann trace extrapolation diverges");
        auto [g2, z2] = richardson(g1, z1, 2.0);
        limit = g2.front();
    } else {
        limit = g1.front();
    }

    SpectralField T(E.grid);
    T.coeffs = std::move(limit);
    T.coeffs[0] = {0.0, 0.0};
    return to_real(T);
}

NeumannRatios neumann_mode_ratios(const SpectralField& theta, const ExtensionField& E,
                                  double rel_floor) {
    RealField trace = neumann_trace(E, theta.grid.alpha);
    SpectralField T = to_spectral(trace);

    double cmax = 0.0;
    for (const auto& c : theta.coeffs) cmax = std::max(cmax, std::abs(c));
    const double floor = rel_floor * cmax;
    const double ks = theta.grid.k_scale();

    std::vector<double> ratios;
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < theta.coeffs.size(); ++flat) {
        unflatten(flat, theta.grid, idx);
        double k2 = 0.0;
        for (int d = 0; d < theta.grid.n; ++d) {
            double kd = wavenumber(idx[static_cast<std::size_t>(d)], theta.grid.N);
            k2 += kd * kd;
        }
        if (k2 == 0.0 || std::abs(theta.coeffs[flat]) < floor) continue;
        const double lam = std::pow(ks * std::sqrt(k2), theta.grid.alpha);
        const std::complex<double> r = T.coeffs[flat] / (lam * theta.coeffs[flat]);
        ratios.push_back(r.real());
    }

    NeumannRatios out;
    out.modes = ratios.size();
    if (ratios.empty()) return out;
    std::sort(ratios.begin(), ratios.end());
    out.d_alpha = ratios[ratios.size() / 2];
    out.spread = (ratios.back() - ratios.front()) / std::max(std::abs(out.d_alpha), 1e-300);
    return out;
}

EnergyIdentityResult weighted_energy_identity(const RealField& H, double alpha, double z_max) {
    H.grid.validate();
    if (!(z_max > 0.0)) throw validation_error("weighted_energy_identity: z_max must be positive");
    SpectralField Hs = to_spectral(H);

    EnergyIdentityResult res;
    const double l2 = l2_norm(Hs);
    if (l2 == 0.0) return res; // defined stays false
    if (std::abs(Hs.coeffs[0]) > 1e-10 * l2)
        throw validation_error("weighted_energy_identity: H must be mean-zero");

    const double eps = 1.0 - alpha;
    const double lhs = std::pow(sobolev_seminorm(Hs, alpha), 2);

    ExtensionMultiplier Q(alpha);

    // J(U) = int_0^U u^eps Q(u)^2 du over geometric GL panels; cached per
    // (alpha, kappa, z_max) since the mode set repeats across fields.
    static std::map<std::tuple<double, double, double>, std::pair<double, double>> j_cache;
    static std::mutex j_mu;

    auto mode_integral = [&](double kappa) -> std::pair<double, double> {
        const auto key = std::make_tuple(alpha, kappa, z_max);
        {
            std::scoped_lock lock(j_mu);
            auto it = j_cache.find(key);
            if (it != j_cache.end()) return it->second;
        }
        const double U = kappa * z_max;
        double J = 0.0;
        double hi = U;
        for (int p = 0; p < 60 && hi > 1e-14 * U; ++p) {
            const double lo = 0.5 * hi;
            J += gl_panel(lo, hi, [&](double u) { return std::pow(u, eps) * std::pow(Q.eval(u), 2); });
            hi = lo;
        }
        J += std::pow(hi, 1.0 + eps) / (1.0 + eps); // head, Q ~ 1 there
        // tail bound: Q(u)^2 <= Q(U)^2 exp(-2(u-U)) for u >= U (up to a
        // modest constant folded into the 1.2)
        const double qU = Q.eval(U);
        const double tail =
            1.2 * qU * qU * std::pow(U + 1.0, eps) * (0.5 + 0.25 / std::max(U, 1e-12));
        const double I = std::pow(kappa, -1.0 - eps) * J;
        const double tail_z = std::pow(kappa, -1.0 - eps) * tail;
        auto value = std::make_pair(I, tail_z);
        std::scoped_lock lock(j_mu);
        j_cache.emplace(key, value);
        return value;
    };

    double rhs = 0.0, tail_total = 0.0;
    const double ks = H.grid.k_scale();
    const double vol = std::pow(H.grid.L, H.grid.n);
    std::array<int, 3> idx{0, 0, 0};
    for (std::size_t flat = 0; flat < Hs.coeffs.size(); ++flat) {
        unflatten(flat, H.grid, idx);
        double k2 = 0.0;
        for (int d = 0; d < H.grid.n; ++d) {
            double kd = wavenumber(idx[static_cast<std::size_t>(d)], H.grid.N);
            k2 += kd * kd;
        }
        if (k2 == 0.0) continue;
        const double a2 = std::norm(Hs.coeffs[flat]);
        if (a2 == 0.0) continue;
        const double kappa = ks * std::sqrt(k2);
        auto [I, tail] = mode_integral(kappa);
        if (tail > 1e-6 * I)
            throw numerical_error("tail", "weighted_energy_identity: z_max too small to resolve "
                                          "the tail of mode |kappa| = " +
                                              std::to_string(kappa));
        rhs += vol * kappa * kappa * a2 * I;
        tail_total += vol * kappa * kappa * a2 * tail;
    }

    res.lhs = lhs;
    res.rhs = rhs;
    res.tail_bound = tail_total;
    res.defined = rhs > 0.0;
    res.ratio = res.defined ? lhs / rhs : 0.0;
    return res;
}

double weighted_dirichlet_energy(const ExtensionField& E) {
    const std::size_t levels = E.level_count();
    if (levels < 2) throw validation_error("weighted_dirichlet_energy: need >= 2 levels");
    const std::size_t nodes = E.grid.size();
    const double cell = E.grid.cell_volume();

    // per-level integrals of |grad_x f|^2 and f itself for d_z differencing
    std::vector<double> gx2(levels, 0.0);
    for (std::size_t j = 0; j < levels; ++j) {
        RealField f(E.grid);
        std::copy(E.level(j), E.level(j) + nodes, f.samples.begin());
        SpectralField F = to_spectral(f);
        double s = 0.0;
        for (int d = 0; d < E.grid.n; ++d) {
            RealField g = to_real(derivative(F, d));
            s += cell * kernels::sum_squares(g.samples);
        }
        gx2[j] = s;
    }
    std::vector<double> dz2(levels, 0.0);
    for (std::size_t j = 0; j < levels; ++j) {
        const std::size_t jm = j == 0 ? 0 : j - 1;
        const std::size_t jp = j + 1 == levels ? j : j + 1;
        const double dz = E.z_levels[jp] - E.z_levels[jm];
        double s = 0.0;
        const double* lo = E.level(jm);
        const double* hi = E.level(jp);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double d = (hi[i] - lo[i]) / dz;
            s += d * d;
        }
        dz2[j] = cell * s;
    }

    // z-quadrature with exact z^eps weights over dual cells
    auto zw = [&](double a, double b) {
        return (std::pow(b, 1.0 + E.epsilon) - std::pow(a, 1.0 + E.epsilon)) / (1.0 + E.epsilon);
    };
    double energy = 0.0;
    for (std::size_t j = 0; j < levels; ++j) {
        const double lo = j == 0 ? E.z_levels[0] : 0.5 * (E.z_levels[j - 1] + E.z_levels[j]);
        const double hi =
            j + 1 == levels ? E.z_levels[levels - 1] : 0.5 * (E.z_levels[j] + E.z_levels[j + 1]);
        energy += zw(lo, hi) * (gx2[j] + dz2[j]);
    }
    return energy;
}

} // namespace sqg
