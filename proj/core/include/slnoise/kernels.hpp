// kernels.hpp: Bath spectral density and the eta/nu correlation kernels
//
// Conventions (hbar = k_B = 1):
//   K_etaeta(t) = (1/pi) int_0^wc J(w) coth(beta w / 2) cos(w t) dw
//   K_etanu(t)  = -2i Theta(t) (1/pi) int_0^wc J(w) sin(w t) dw = i R(t)
//   K~(w)       = int K(t) exp(-i w t) dt
// J is the Drude form with a hard cutoff at omega_c.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace sln {

using cplx = std::complex<double>;

struct BathParams {
    double beta{1.0};     // inverse temperature
    double omega_c{25.0}; // hard cutoff frequency

    void validate() const;
};

/// Sampled frequency grid implied by an n-point DFT with spacing dt.
///
/// Bins are stored in natural FFT order: index k < n/2 holds +k*dw, index
/// k >= n/2 holds (k - n)*dw. The single Nyquist bin n/2 is its own mirror.
struct FrequencyGrid {
    std::size_t n{0};
    double dt{0.0};

    static FrequencyGrid make(std::size_t n, double dt);

    double spacing() const;                  // dw = 2 pi / (n dt)
    double omega(std::size_t k) const;       // angular frequency of bin k
    double time(std::size_t j) const;        // wrapped time of sample j, in [-n dt / 2, n dt / 2)
    std::size_t mirror(std::size_t k) const { return (n - k) % n; }

    bool operator==(const FrequencyGrid&) const = default;
};

/// User-supplied complex correlation K(t). The table takes
/// K_etaeta(t) = Re K(t) and K_etanu(t) = 2i Theta(t) Im K(t).
using CustomKernel = std::function<cplx(double)>;

using KernelSource = std::variant<BathParams, CustomKernel>;

enum class KernelKind { EtaEta, EtaNu };

double spectral_density(double omega, const BathParams& params);

// J(|w|) coth(beta |w| / 2), finite at w = 0.
double k_etaeta_freq(double omega, const BathParams& params);

/// Fourier transform of K_etanu.
///
/// Re = -sgn(w) J(|w|). Im is the principal value
/// -(2/pi) PV int_0^wc w' J(w') / (w'^2 - w^2) dw', evaluated by subtracting
/// f(w) from the Drude factor f inside the integrand: the remainder is smooth
/// and integrated by Gauss-Legendre, the subtracted piece is analytic.
/// Throws SingularPoint when |w| coincides with omega_c.
cplx k_etanu_freq(double omega, const BathParams& params);

// Time-domain kernel by composite Gauss-Legendre quadrature; Theta(0) = 1/2.
cplx kernel_time(double t, const BathParams& params, KernelKind which);

struct KernelTable {
    FrequencyGrid grid;
    std::vector<double> k_etaeta_w; // K~_etaeta, real, even, >= 0
    std::vector<cplx> k_etanu_w;    // K~_etanu, Re odd, Im even
    std::vector<cplx> r_w;          // R~ = -i K~_etanu, R~*(-w) = R~(w)
    std::vector<double> k_etaeta_t; // K_etaeta at grid.time(j)
    std::vector<cplx> k_etanu_t;    // K_etanu at grid.time(j), zero for t < 0
    std::optional<BathParams> bath; // set in Drude mode
    double max_asymmetry{0.0};      // largest symmetrisation correction relative to the array maximum
    std::size_t clamped_bins{0};    // bins of K~_etaeta raised from a negative value to zero

    double max_abs_r() const;
};

/// Samples the time-domain kernels on the wrapped grid and transforms them
/// with a dt-scaled DFT, then enforces the even/odd structure exactly.
/// Throws AsymmetryExceeded when the correction exceeds 1e-6 relative.
KernelTable build_kernel_table(const FrequencyGrid& grid, const KernelSource& source);

} // namespace sln
