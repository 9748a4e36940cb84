#include "slnoise/dynamics.hpp"

#include "slnoise/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sln {
namespace {

constexpr cplx kI{0.0, 1.0};

struct Deriv {
    cplx sx, sy, sz, tr;
};

Deriv rhs(const SystemModel& m, double t, const TrajectoryState& s, cplx eta, cplx nu) {
    const cplx e = m.epsilon.at(t) - 2.0 * m.alpha * eta;
    const cplx ian = kI * m.alpha * nu;
    return {-e * s.sy, -m.delta * s.sz + e * s.sx, m.delta * s.sy + ian * s.tr, ian * s.sz};
}

TrajectoryState axpy(const TrajectoryState& s, double h, const Deriv& d) {
    return {s.sx + h * d.sx, s.sy + h * d.sy, s.sz + h * d.sz, s.tr + h * d.tr, s.t};
}

} // namespace

Eigen::Matrix2cd SystemModel::spin_up() {
    Eigen::Matrix2cd r = Eigen::Matrix2cd::Zero();
    r(0, 0) = 1.0;
    return r;
}

TrajectoryState TrajectoryState::from_density(const Eigen::Matrix2cd& rho, double t) {
    TrajectoryState s;
    s.tr = rho(0, 0) + rho(1, 1);
    s.sz = rho(0, 0) - rho(1, 1);
    s.sx = rho(0, 1) + rho(1, 0);
    s.sy = kI * (rho(0, 1) - rho(1, 0));
    s.t = t;
    return s;
}

Eigen::Matrix2cd TrajectoryState::density() const {
    Eigen::Matrix2cd r;
    r(0, 0) = 0.5 * (tr + sz);
    r(1, 1) = 0.5 * (tr - sz);
    r(0, 1) = 0.5 * (sx - kI * sy);
    r(1, 0) = 0.5 * (sx + kI * sy);
    return r;
}

double TrajectoryState::magnitude() const {
    return std::max({std::abs(sx), std::abs(sy), std::abs(sz), std::abs(tr)});
}

Trajectory integrate_trajectory(const SystemModel& model, const NoisePair& noise) {
    return integrate_trajectory(model, noise.eta, noise.nu, noise.dt);
}

Trajectory integrate_trajectory(const SystemModel& model, const std::vector<cplx>& eta, const std::vector<cplx>& nu,
                                double half_dt) {
    if (eta.size() != nu.size()) throw GridMismatch("eta and nu lengths differ");
    if (eta.size() < 3 || eta.size() % 2 == 0)
        throw GridMismatch("half-step noise needs an odd number of samples (two per step plus one)");
    if (!(half_dt > 0.0)) throw InvalidArgument("noise spacing must be positive");

    const std::size_t steps = (eta.size() - 1) / 2;
    const double h = 2.0 * half_dt;
    Trajectory out;
    out.states.reserve(steps + 1);
    TrajectoryState s = TrajectoryState::from_density(model.rho0, model.t0);
    out.states.push_back(s);

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = model.t0 + h * static_cast<double>(k);
        const std::size_t i0 = 2 * k, i1 = 2 * k + 1, i2 = 2 * k + 2;
        const Deriv k1 = rhs(model, t, s, eta[i0], nu[i0]);
        const Deriv k2 = rhs(model, t + 0.5 * h, axpy(s, 0.5 * h, k1), eta[i1], nu[i1]);
        const Deriv k3 = rhs(model, t + 0.5 * h, axpy(s, 0.5 * h, k2), eta[i1], nu[i1]);
        const Deriv k4 = rhs(model, t + h, axpy(s, h, k3), eta[i2], nu[i2]);
        const double w = h / 6.0;
        s.sx += w * (k1.sx + 2.0 * k2.sx + 2.0 * k3.sx + k4.sx);
        s.sy += w * (k1.sy + 2.0 * k2.sy + 2.0 * k3.sy + k4.sy);
        s.sz += w * (k1.sz + 2.0 * k2.sz + 2.0 * k3.sz + k4.sz);
        s.tr += w * (k1.tr + 2.0 * k2.tr + 2.0 * k3.tr + k4.tr);
        s.t = model.t0 + h * static_cast<double>(k + 1);
        if (!out.diverged && !(s.magnitude() <= kDivergenceThreshold)) {
            out.diverged = true;
            out.diverged_at = k + 1;
        }
        out.states.push_back(s);
    }
    return out;
}

double lz_asymptote(double delta, double kappa) {
    if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
    return 2.0 * std::exp(-std::numbers::pi * delta * delta / (2.0 * kappa)) - 1.0;
}

namespace qnd {
namespace {
constexpr cplx kC{-2.0, 1.0}; // K(t) = exp(c t) / 2 for t >= 0

// int_0^t exp(c s) ds, with the small-t series avoiding cancellation
cplx expint(double t) {
    const cplx z = kC * t;
    if (std::abs(z) < 1e-4) return t * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
    return (std::exp(z) - 1.0) / kC;
}
} // namespace

cplx kernel(double t) { return 0.5 * std::exp(cplx{-2.0 * std::abs(t), t}); }

double c_r(double t) { return 0.5 * expint(t).real(); }

double c_i(double t) { return 0.5 * expint(t).imag(); }

double g(double t) {
    // int_0^t (exp(c s) - 1) / c ds = (E(t) - t) / c
    const cplx z = kC * t;
    cplx v;
    if (std::abs(z) < 1e-3) v = t * t * (0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0);
    else v = (expint(t) - t) / kC;
    return 0.5 * v.real();
}

Eigen::Matrix2cd rho0() {
    TrajectoryState s{1.0, 1.2, 0.0, 1.0, 0.0};
    return s.density();
}

Eigen::Matrix2cd exact(double t, const Eigen::Matrix2cd& rho_init) {
    if (t < 0.0) throw InvalidArgument("exact dephasing solution is defined for t >= 0");
    Eigen::Matrix2cd r = rho_init;
    const double damp = std::exp(-4.0 * g(t));
    r(0, 1) = rho_init(0, 1) * std::exp(cplx{0.0, t}) * damp;
    r(1, 0) = rho_init(1, 0) * std::exp(cplx{0.0, -t}) * damp;
    return r;
}

SlnSetup sln_config(const FrequencyGrid& grid) {
    SlnSetup out;
    out.table = build_kernel_table(grid, CustomKernel(kernel));
    out.model.delta = 0.0;
    out.model.epsilon = Drive::constant(-1.0);
    out.model.alpha = 1.0;
    out.model.t0 = 0.0;
    out.model.rho0 = rho0();
    return out;
}

} // namespace qnd
} // namespace sln
