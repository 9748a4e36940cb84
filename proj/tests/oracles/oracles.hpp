// oracles.hpp: Independent reference computations for the tests (GSL based)

#pragma once

#include <slnoise/kernels.hpp>
#include <slnoise/noise.hpp>

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// -(2/pi) PV int_0^wc x J(x) / (x^2 - w^2) dx by GSL's adaptive Cauchy rule.
double im_k_etanu_pv(double omega, const sln::BathParams& p);

// Arctangent closed form of the same integral, with the squared denominator
// on the second term.
double im_k_etanu_closed(double omega, const sln::BathParams& p);

// (1/pi) int_0^wc J coth(beta w / 2) cos(w t) dw by adaptive Gauss-Kronrod.
double k_etaeta_time(double t, const sln::BathParams& p);

// R(t) = -(2/pi) Theta(t) int_0^wc J sin(w t) dw, Theta(0) = 1/2.
double r_time(double t, const sln::BathParams& p);

// Full sample covariance <a_i b_j> averaged over realizations, then averaged
// along diagonals j = i - lag for origins i - lag in [0, origins). Brute force.
struct DirectCovariance {
    std::vector<cplx> etaeta, nunu; // lags 0..L
    std::vector<cplx> etanu;        // lags -L..L
};
DirectCovariance direct_covariance(const std::vector<sln::NoisePair>& pairs, std::size_t max_lag);

// Dense-output integration of the dephasing master equation
//   i d rho / dt = [H, rho] - i C_r [f, [f, rho]] + C_i [f^2, rho]
// with H = -sigma_z / 2, f = sigma_z and C_r, C_i integrated numerically from K.
Eigen::Matrix2cd qnd_master_equation(double t, const Eigen::Matrix2cd& rho0);

} // namespace oracle
