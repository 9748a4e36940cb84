// kernels.cpp: Drude spectral density, correlation kernels and kernel tables

#include "slnoise/kernels.hpp"

#include "fft.hpp"
#include "slnoise/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sln {
namespace {

constexpr double kPi = std::numbers::pi;
using Gauss = boost::math::quadrature::gauss<double, 20>;

double drude_factor(double omega, double omega_c) {
    const double u = omega / omega_c;
    const double d = 1.0 + u * u;
    return 1.0 / (d * d);
}

// w coth(beta w / 2) with the removable singularity at w = 0.
double w_coth(double w, double beta) {
    const double x = 0.5 * beta * w;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return (2.0 / beta) * (1.0 + x2 / 3.0 - x2 * x2 / 45.0);
    }
    return w / std::tanh(x);
}

// Lambda(w) = J(w) coth(beta w / 2) for 0 <= w <= omega_c.
double lambda_in_band(double w, const BathParams& p) {
    return drude_factor(w, p.omega_c) * w_coth(w, p.beta);
}

struct TimeIntegrals {
    double cos_lambda; // int_0^wc Lambda(w) cos(w t) dw
    double sin_j;      // int_0^wc J(w) sin(w t) dw
};

// Panels resolve half an oscillation period each; 20-point rule per panel.
TimeIntegrals drude_time_integrals(double t, const BathParams& p) {
    const auto panels = static_cast<std::size_t>(4 + std::ceil(p.omega_c * std::abs(t) / kPi));
    const double h = p.omega_c / static_cast<double>(panels);
    TimeIntegrals out{0.0, 0.0};
    for (std::size_t i = 0; i < panels; ++i) {
        const double a = h * static_cast<double>(i);
        const double b = a + h;
        out.cos_lambda += Gauss::integrate(
            [&](double w) { return lambda_in_band(w, p) * std::cos(w * t); }, a, b);
        out.sin_j += Gauss::integrate(
            [&](double w) { return w * drude_factor(w, p.omega_c) * std::sin(w * t); }, a, b);
    }
    return out;
}

} // namespace

void BathParams::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidArgument("beta must be positive, got " + std::to_string(beta));
    if (!(omega_c > 0.0) || !std::isfinite(omega_c))
        throw InvalidArgument("omega_c must be positive, got " + std::to_string(omega_c));
}

FrequencyGrid FrequencyGrid::make(std::size_t n, double dt) {
    if (n < 2 || n % 2 != 0) throw InvalidArgument("frequency grid needs an even sample count");
    if (!(dt > 0.0)) throw InvalidArgument("frequency grid needs dt > 0");
    return FrequencyGrid{n, dt};
}

double FrequencyGrid::spacing() const { return 2.0 * kPi / (static_cast<double>(n) * dt); }

double FrequencyGrid::omega(std::size_t k) const {
    const auto ki = static_cast<long long>(k);
    const auto ni = static_cast<long long>(n);
    return spacing() * static_cast<double>(ki < ni / 2 ? ki : ki - ni);
}

double FrequencyGrid::time(std::size_t j) const {
    const auto ji = static_cast<long long>(j);
    const auto ni = static_cast<long long>(n);
    return dt * static_cast<double>(ji < ni / 2 ? ji : ji - ni);
}

double spectral_density(double omega, const BathParams& params) {
    if (omega <= 0.0 || omega > params.omega_c) return 0.0;
    return omega * drude_factor(omega, params.omega_c);
}

double k_etaeta_freq(double omega, const BathParams& params) {
    const double w = std::abs(omega);
    if (w > params.omega_c) return 0.0;
    return lambda_in_band(w, params);
}

cplx k_etanu_freq(double omega, const BathParams& params) {
    const double wc = params.omega_c;
    const double w = std::abs(omega);
    if (std::abs(w - wc) <= 1e-12 * wc)
        throw SingularPoint("K_etanu(w) diverges logarithmically at |w| = omega_c");

    const double sgn = omega > 0.0 ? 1.0 : (omega < 0.0 ? -1.0 : 0.0);
    const double re = -sgn * spectral_density(w, params);

    // x^2 [f(x) - f(w)] / (x^2 - w^2) with the difference of Drude factors
    // expanded so the removable singularity at x = w cancels analytically.
    const double v = (w / wc) * (w / wc);
    const double fw = drude_factor(w, wc);
    auto smooth = [&](double x) {
        const double u = (x / wc) * (x / wc);
        const double du = 1.0 + u;
        return -x * x * (2.0 + u + v) * fw / (wc * wc * du * du);
    };
    double smooth_part = 0.0;
    constexpr int kPanels = 4;
    for (int i = 0; i < kPanels; ++i) {
        const double a = wc * i / kPanels;
        smooth_part += Gauss::integrate(smooth, a, a + wc / kPanels);
    }

    // PV int_0^wc x^2 / (x^2 - w^2) dx
    const double singular_part = wc + 0.5 * w * std::log(std::abs((wc - w) / (wc + w)));
    const double im = -(2.0 / kPi) * (smooth_part + fw * singular_part);
    return {re, im};
}

cplx kernel_time(double t, const BathParams& params, KernelKind which) {
    if (which == KernelKind::EtaEta) {
        return {drude_time_integrals(t, params).cos_lambda / kPi, 0.0};
    }
    if (t < 0.0) return {0.0, 0.0};
    const double theta = t == 0.0 ? 0.5 : 1.0;
    const double r = -2.0 * theta * drude_time_integrals(t, params).sin_j / kPi;
    return {0.0, r};
}

double KernelTable::max_abs_r() const {
    double m = 0.0;
    for (const auto& r : r_w) m = std::max(m, std::abs(r));
    return m;
}

KernelTable build_kernel_table(const FrequencyGrid& grid, const KernelSource& source) {
    const std::size_t n = grid.n;
    if (n < 2 || n % 2 != 0 || !(grid.dt > 0.0))
        throw InvalidArgument("kernel table needs an even sample count and dt > 0");

    KernelTable table;
    table.grid = grid;
    table.k_etaeta_t.assign(n, 0.0);
    std::vector<double> r_t(n, 0.0); // R(t) = -i K_etanu(t)

    if (const auto* bath = std::get_if<BathParams>(&source)) {
        bath->validate();
        table.bath = *bath;
        for (std::size_t j = 0; j <= n / 2; ++j) {
            const double t = grid.dt * static_cast<double>(j);
            const auto integrals = drude_time_integrals(t, *bath);
            const double kee = integrals.cos_lambda / kPi;
            table.k_etaeta_t[j] = kee;
            table.k_etaeta_t[grid.mirror(j)] = kee;
            // j = n/2 is the wrapped time -n dt / 2 and stays causal-zero.
            if (j > 0 && j < n / 2) r_t[j] = -2.0 * integrals.sin_j / kPi;
        }
    } else {
        const auto& kernel = std::get<CustomKernel>(source);
        if (!kernel) throw InvalidArgument("custom kernel is empty");
        for (std::size_t j = 0; j < n; ++j) {
            const double t = grid.time(j);
            const cplx k = kernel(t);
            table.k_etaeta_t[j] = k.real();
            if (t > 0.0) r_t[j] = 2.0 * k.imag();
            else if (t == 0.0) r_t[j] = k.imag(); // Theta(0) = 1/2
        }
    }

    std::vector<cplx> kee_w(n), r_w(n);
    for (std::size_t j = 0; j < n; ++j) {
        kee_w[j] = table.k_etaeta_t[j];
        r_w[j] = r_t[j];
    }
    detail::fft_forward(kee_w);
    detail::fft_forward(r_w);

    double kee_max = 0.0, r_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        kee_w[k] *= grid.dt;
        r_w[k] *= grid.dt;
        kee_max = std::max(kee_max, std::abs(kee_w[k]));
        r_max = std::max(r_max, std::abs(r_w[k]));
    }

    // K~_etaeta real and even; R~(-w) = conj R~(w).
    table.k_etaeta_w.assign(n, 0.0);
    table.r_w.assign(n, cplx{});
    double kee_corr = 0.0, r_corr = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t m = grid.mirror(k);
        const double kee = 0.5 * (kee_w[k].real() + kee_w[m].real());
        kee_corr = std::max(kee_corr, std::abs(kee_w[k] - cplx{kee, 0.0}));
        table.k_etaeta_w[k] = kee;

        const double re = 0.5 * (r_w[k].real() + r_w[m].real());
        const double im = 0.5 * (r_w[k].imag() - r_w[m].imag());
        r_corr = std::max(r_corr, std::abs(r_w[k] - cplx{re, im}));
        table.r_w[k] = {re, im};
    }
    table.max_asymmetry = std::max(kee_max > 0.0 ? kee_corr / kee_max : 0.0,
                                   r_max > 0.0 ? r_corr / r_max : 0.0);
    if (table.max_asymmetry > 1e-6)
        throw AsymmetryExceeded("kernel table symmetrisation corrected " +
                                std::to_string(table.max_asymmetry) +
                                " relative; refine the grid or check the kernel");

    for (auto& k : table.k_etaeta_w) {
        if (k < 0.0) {
            k = 0.0;
            ++table.clamped_bins;
        }
    }

    table.k_etanu_w.resize(n);
    table.k_etanu_t.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        table.k_etanu_w[k] = cplx{0.0, 1.0} * table.r_w[k];
        table.k_etanu_t[k] = cplx{0.0, r_t[k]};
    }
    return table;
}

} // namespace sln
