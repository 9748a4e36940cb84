#include "oracles.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_odeiv2.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace oracle {
namespace {

constexpr double kPi = std::numbers::pi;

struct Workspace {
    gsl_integration_workspace* w;
    Workspace() : w(gsl_integration_workspace_alloc(4000)) {}
    ~Workspace() { gsl_integration_workspace_free(w); }
};

double thunk(double x, void* p) { return (*static_cast<std::function<double(double)>*>(p))(x); }

double drude_j(double w, const sln::BathParams& p) {
    if (w <= 0.0 || w > p.omega_c) return 0.0;
    const double u = w / p.omega_c;
    return w / ((1.0 + u * u) * (1.0 + u * u));
}

// w coth(beta w / 2) written with exponentials rather than tanh.
double w_coth(double w, double beta) {
    if (w == 0.0) return 2.0 / beta;
    const double e = std::exp(-beta * w);
    return w * (1.0 + e) / -std::expm1(-beta * w);
}

double qag(std::function<double(double)> f, double a, double b) {
    Workspace ws;
    gsl_function F{&thunk, &f};
    double result = 0.0, err = 0.0;
    const int rc = gsl_integration_qag(&F, a, b, 0.0, 1e-13, 4000, GSL_INTEG_GAUSS61, ws.w, &result, &err);
    if (rc != GSL_SUCCESS && rc != GSL_EROUND) throw std::runtime_error("qag failed");
    return result;
}

// Splits [0, wc] so each panel holds a few oscillations.
double oscillatory(std::function<double(double)> f, double wc, double t) {
    const int panels = 1 + static_cast<int>(wc * std::abs(t) / (2.0 * kPi));
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) sum += qag(f, wc * i / panels, wc * (i + 1) / panels);
    return sum;
}

} // namespace

double im_k_etanu_pv(double omega, const sln::BathParams& p) {
    gsl_set_error_handler_off();
    const double w = std::abs(omega);
    if (w == 0.0) {
        return -(2.0 / kPi) * qag([&](double x) { return drude_j(x, p) / x; }, 0.0, p.omega_c);
    }
    std::function<double(double)> g = [&](double x) { return x * drude_j(x, p) / (x + w); };
    Workspace ws;
    gsl_function F{&thunk, &g};
    double result = 0.0, err = 0.0;
    const int rc = gsl_integration_qawc(&F, 0.0, p.omega_c, w, 0.0, 1e-13, 4000, ws.w, &result, &err);
    if (rc != GSL_SUCCESS && rc != GSL_EROUND) throw std::runtime_error("qawc failed");
    return -(2.0 / kPi) * result;
}

double im_k_etanu_closed(double omega, const sln::BathParams& p) {
    const double wc = p.omega_c;
    const double w = std::abs(omega);
    const double f = 1.0 / std::pow(1.0 + (w / wc) * (w / wc), 2);
    const double first = -(2.0 / kPi) * (wc + 0.5 * w * std::log(std::abs((wc - w) / (wc + w)))) * f;
    const double d = wc * wc + w * w;
    const double second = std::pow(wc, 3) * ((6.0 - kPi) * wc * wc + (kPi - 2.0) * w * w) / (4.0 * kPi * d * d);
    return first + second;
}

double k_etaeta_time(double t, const sln::BathParams& p) {
    gsl_set_error_handler_off();
    return oscillatory([&](double w) { return drude_j(w, p) / (w == 0.0 ? 1.0 : w) * w_coth(w, p.beta) * std::cos(w * t); },
                       p.omega_c, t) /
           kPi;
}

double r_time(double t, const sln::BathParams& p) {
    if (t < 0.0) return 0.0;
    gsl_set_error_handler_off();
    const double theta = t == 0.0 ? 0.5 : 1.0;
    return -2.0 * theta / kPi * oscillatory([&](double w) { return drude_j(w, p) * std::sin(w * t); }, p.omega_c, t);
}

DirectCovariance direct_covariance(const std::vector<sln::NoisePair>& pairs, std::size_t max_lag) {
    const std::size_t len = pairs.front().eta.size();
    const std::size_t origins = len - max_lag;
    const double nr = static_cast<double>(pairs.size());
    // Covariance matrices over the full grid.
    std::vector<cplx> ee(len * len), nn(len * len), en(len * len);
    for (const auto& p : pairs) {
        for (std::size_t i = 0; i < len; ++i) {
            for (std::size_t j = 0; j < len; ++j) {
                ee[i * len + j] += p.eta[i] * p.eta[j] / nr;
                nn[i * len + j] += p.nu[i] * p.nu[j] / nr;
                en[i * len + j] += p.eta[i] * p.nu[j] / nr;
            }
        }
    }
    DirectCovariance out;
    out.etaeta.assign(max_lag + 1, cplx{});
    out.nunu.assign(max_lag + 1, cplx{});
    out.etanu.assign(2 * max_lag + 1, cplx{});
    for (std::size_t l = 0; l <= max_lag; ++l) {
        for (std::size_t s = 0; s < origins; ++s) {
            out.etaeta[l] += ee[(s + l) * len + s];
            out.nunu[l] += nn[(s + l) * len + s];
            out.etanu[max_lag + l] += en[(s + l) * len + s];
            if (l > 0) out.etanu[max_lag - l] += en[s * len + s + l];
        }
        out.etaeta[l] /= static_cast<double>(origins);
        out.nunu[l] /= static_cast<double>(origins);
        out.etanu[max_lag + l] /= static_cast<double>(origins);
        if (l > 0) out.etanu[max_lag - l] /= static_cast<double>(origins);
    }
    return out;
}

namespace {

double cr_quad(double t) {
    return qag([](double s) { return 0.5 * std::exp(-2.0 * s) * std::cos(s); }, 0.0, t);
}
double ci_quad(double t) {
    return qag([](double s) { return 0.5 * std::exp(-2.0 * s) * std::sin(s); }, 0.0, t);
}

int master_rhs(double t, const double y[], double dydt[], void*) {
    Eigen::Matrix2cd rho;
    rho << cplx{y[0], y[1]}, cplx{y[2], y[3]}, cplx{y[4], y[5]}, cplx{y[6], y[7]};
    Eigen::Matrix2cd sz;
    sz << 1.0, 0.0, 0.0, -1.0;
    const Eigen::Matrix2cd h = -0.5 * sz;
    const Eigen::Matrix2cd f = sz;
    const double cr = t > 0.0 ? cr_quad(t) : 0.0;
    const double ci = t > 0.0 ? ci_quad(t) : 0.0;
    auto comm = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) -> Eigen::Matrix2cd { return a * b - b * a; };
    const cplx i{0.0, 1.0};
    const Eigen::Matrix2cd rhs = comm(h, rho) - i * cr * comm(f, comm(f, rho)) + ci * comm(f * f, rho);
    const Eigen::Matrix2cd d = -i * rhs;
    dydt[0] = d(0, 0).real();
    dydt[1] = d(0, 0).imag();
    dydt[2] = d(0, 1).real();
    dydt[3] = d(0, 1).imag();
    dydt[4] = d(1, 0).real();
    dydt[5] = d(1, 0).imag();
    dydt[6] = d(1, 1).real();
    dydt[7] = d(1, 1).imag();
    return GSL_SUCCESS;
}

} // namespace

Eigen::Matrix2cd qnd_master_equation(double t, const Eigen::Matrix2cd& rho0) {
    gsl_set_error_handler_off();
    double y[8] = {rho0(0, 0).real(), rho0(0, 0).imag(), rho0(0, 1).real(), rho0(0, 1).imag(),
                   rho0(1, 0).real(), rho0(1, 0).imag(), rho0(1, 1).real(), rho0(1, 1).imag()};
    if (t > 0.0) {
        gsl_odeiv2_system sys{&master_rhs, nullptr, 8, nullptr};
        gsl_odeiv2_driver* drv = gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_rk8pd, 1e-4, 1e-13, 1e-13);
        double t0 = 0.0;
        const int rc = gsl_odeiv2_driver_apply(drv, &t0, t, y);
        gsl_odeiv2_driver_free(drv);
        if (rc != GSL_SUCCESS) throw std::runtime_error("ode driver failed");
    }
    Eigen::Matrix2cd out;
    out << cplx{y[0], y[1]}, cplx{y[2], y[3]}, cplx{y[4], y[5]}, cplx{y[6], y[7]};
    return out;
}

} // namespace oracle
