// dynamics.hpp: Stochastic two-level trajectories and the exact dephasing oracle
//
// With H = (Delta sigma_x + eps(t) sigma_z) / 2 and coupling alpha sigma_z:
//   d sx / dt = -(eps - 2 alpha eta) sy
//   d sy / dt = -Delta sz + (eps - 2 alpha eta) sx
//   d sz / dt = Delta sy + i alpha nu tr
//   d tr / dt = i alpha nu sz

#pragma once

#include "slnoise/kernels.hpp"
#include "slnoise/noise.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace sln {

struct Drive {
    enum class Kind { Constant, LinearSweep };
    Kind kind{Kind::Constant};
    double value{-1.0}; // eps for Constant, kappa for LinearSweep (eps = kappa t)

    static Drive constant(double eps) { return {Kind::Constant, eps}; }
    static Drive sweep(double kappa) { return {Kind::LinearSweep, kappa}; }
    double at(double t) const { return kind == Kind::Constant ? value : value * t; }
};

struct SystemModel {
    double delta{1.0};
    Drive epsilon{};
    double alpha{0.05};
    double t0{0.0};
    Eigen::Matrix2cd rho0{Eigen::Matrix2cd::Zero()};

    // rho0 = |0><0|, i.e. sz = 1, tr = 1.
    static Eigen::Matrix2cd spin_up();
};

struct TrajectoryState {
    cplx sx, sy, sz, tr;
    double t{0.0};

    static TrajectoryState from_density(const Eigen::Matrix2cd& rho, double t = 0.0);
    Eigen::Matrix2cd density() const; // (tr I + sx X + sy Y + sz Z) / 2
    double magnitude() const;         // largest component modulus
};

struct Trajectory {
    std::vector<TrajectoryState> states; // one per integrator step, including t0
    bool diverged{false};
    std::size_t diverged_at{0}; // first step with a component above 1e12
};

inline constexpr double kDivergenceThreshold = 1e12;

// Classical RK4 with step 2 * noise.dt; the noise samples at even indices are
// the step boundaries and odd indices the midpoints.
Trajectory integrate_trajectory(const SystemModel& model, const NoisePair& noise);

// Same update from explicit half-step noise arrays (equal lengths, odd).
Trajectory integrate_trajectory(const SystemModel& model, const std::vector<cplx>& eta, const std::vector<cplx>& nu,
                                double half_dt);

// 2 exp(-pi Delta^2 / (2 kappa)) - 1
double lz_asymptote(double delta, double kappa);

// Pure dephasing: H = -sigma_z / 2, f = sigma_z, K(t) = exp(-2|t| + i t) / 2.
namespace qnd {

cplx kernel(double t);
double c_r(double t); // int_0^t Re K
double c_i(double t); // int_0^t Im K
double g(double t);   // int_0^t c_r
Eigen::Matrix2cd rho0(); // I/2 + sx/2 + 0.6 sy
Eigen::Matrix2cd exact(double t, const Eigen::Matrix2cd& rho_init = rho0());

struct SlnSetup {
    KernelTable table;
    SystemModel model;
};

// Kernel table from K(t) on `grid` and the matching model: Delta = 0, eps = -1, alpha = 1.
SlnSetup sln_config(const FrequencyGrid& grid);

} // namespace qnd

} // namespace sln
