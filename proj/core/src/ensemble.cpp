#include "slnoise/ensemble.hpp"

#include "parallel.hpp"
#include "slnoise/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

namespace sln {
namespace {

constexpr std::size_t kChunk = 64;

// Per-step running moments for a block of realizations (Welford within a
// chunk, Chan's pairwise update between chunks).
struct StepMoments {
    double n{0.0};
    cplx tr, sx, sy, sz, rho01;   // means
    double m2_tr{0.0};            // sum |tr - mean|^2
    double m2_re01{0.0}, m2_im01{0.0};
    std::size_t diverged{0};

    void add(const TrajectoryState& s, bool div) {
        n += 1.0;
        const cplx r01 = 0.5 * (s.sx - cplx{0.0, 1.0} * s.sy);
        const cplx d_tr = s.tr - tr;
        const cplx d_01 = r01 - rho01;
        tr += d_tr / n;
        sx += (s.sx - sx) / n;
        sy += (s.sy - sy) / n;
        sz += (s.sz - sz) / n;
        rho01 += d_01 / n;
        const cplx e_tr = s.tr - tr;
        const cplx e_01 = r01 - rho01;
        m2_tr += d_tr.real() * e_tr.real() + d_tr.imag() * e_tr.imag();
        m2_re01 += d_01.real() * e_01.real();
        m2_im01 += d_01.imag() * e_01.imag();
        if (div) ++diverged;
    }

    void merge(const StepMoments& o) {
        if (o.n == 0.0) return;
        if (n == 0.0) {
            *this = o;
            return;
        }
        const double tot = n + o.n;
        const double wa = n / tot, wb = o.n / tot;
        const cplx d_tr = o.tr - tr;
        const cplx d_01 = o.rho01 - rho01;
        m2_tr += o.m2_tr + std::norm(d_tr) * n * o.n / tot;
        m2_re01 += o.m2_re01 + d_01.real() * d_01.real() * n * o.n / tot;
        m2_im01 += o.m2_im01 + d_01.imag() * d_01.imag() * n * o.n / tot;
        tr = wa * tr + wb * o.tr;
        sx = wa * sx + wb * o.sx;
        sy = wa * sy + wb * o.sy;
        sz = wa * sz + wb * o.sz;
        rho01 = wa * rho01 + wb * o.rho01;
        diverged += o.diverged;
        n = tot;
    }
};

std::uint64_t lambda_seed(std::uint64_t master, double lambda) {
    return mix64(master ^ mix64(std::bit_cast<std::uint64_t>(lambda)));
}

// Pools per-step variances over consecutive non-overlapping windows.
std::vector<double> pool_windows(const std::vector<double>& per_step, std::size_t window) {
    std::vector<double> out(per_step.size(), 0.0);
    for (std::size_t start = 0; start < per_step.size(); start += window) {
        const std::size_t stop = std::min(per_step.size(), start + window);
        double sum = 0.0;
        for (std::size_t j = start; j < stop; ++j) sum += per_step[j];
        const double pooled = sum / static_cast<double>(stop - start);
        for (std::size_t j = start; j < stop; ++j) out[j] = pooled;
    }
    return out;
}

} // namespace

void RunConfig::validate() const {
    if (n_realizations < 2) throw InvalidArgument("n_realizations must be at least 2");
    if (stats_window < 1) throw InvalidArgument("stats_window must be at least 1");
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
    if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
    if (lambda && !(*lambda > 0.0)) throw InvalidArgument("lambda must be positive");
    if (const auto* b = std::get_if<BathParams>(&bath)) b->validate();
}

EnsemblePlan plan_ensemble(const RunConfig& cfg) {
    cfg.validate();
    EnsemblePlan plan;
    plan.cfg = cfg;
    plan.grid = cfg.noise_grid();
    plan.table = build_kernel_table(plan.grid.frequency_grid(), cfg.bath);
    plan.filters = make_filters(cfg.scheme, plan.table, cfg.gamma);
    if (cfg.lambda && !plan.filters.has_cross_components())
        throw ZeroComponent("scheme '" + std::string(to_string(cfg.scheme)) + "' cannot be rescaled");
    return plan;
}

EnsembleStats run_ensemble(const RunConfig& cfg) { return run_ensemble(plan_ensemble(cfg)); }

EnsembleStats run_ensemble(const EnsemblePlan& plan) {
    return run_ensemble_range(plan, 0, plan.cfg.n_realizations);
}

EnsembleStats run_ensemble_range(const EnsemblePlan& plan, std::size_t first, std::size_t count) {
    const RunConfig& cfg = plan.cfg;
    if (count < 2) throw InsufficientSample("an ensemble needs at least two realizations");
    const std::size_t steps = (plan.grid.physical - 1) / 2 + 1;
    const unsigned threads = detail::resolve_threads(cfg.threads);

    std::vector<StepMoments> total(steps);
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    const std::size_t batch = std::max<std::size_t>(1, 4 * static_cast<std::size_t>(threads));
    std::vector<std::vector<StepMoments>> partial;

    for (std::size_t b0 = 0; b0 < chunks; b0 += batch) {
        const std::size_t nb = std::min(batch, chunks - b0);
        partial.assign(nb, std::vector<StepMoments>(steps));
        detail::parallel_for(nb, threads, [&](std::size_t c) {
            auto& acc = partial[c];
            const std::size_t lo = (b0 + c) * kChunk;
            const std::size_t hi = std::min(count, lo + kChunk);
            for (std::size_t r = lo; r < hi; ++r) {
                NoisePair noise = synthesize(plan.filters, plan.grid, seed_for(cfg.master_seed, first + r), cfg.lambda);
                if (cfg.force_zero_nu) std::fill(noise.nu.begin(), noise.nu.end(), cplx{});
                const Trajectory traj = integrate_trajectory(cfg.model, noise);
                for (std::size_t j = 0; j < steps; ++j)
                    acc[j].add(traj.states[j], traj.diverged && j >= traj.diverged_at);
            }
        });
        for (std::size_t c = 0; c < nb; ++c)
            for (std::size_t j = 0; j < steps; ++j) total[j].merge(partial[c][j]);
    }

    EnsembleStats st;
    st.n_realizations = count;
    st.window = cfg.stats_window;
    const double n = static_cast<double>(count);
    std::vector<double> per_step(steps);
    st.t.resize(steps);
    st.mean_tr.resize(steps);
    st.abs_mean_tr.resize(steps);
    st.mean_sx.resize(steps);
    st.mean_sy.resize(steps);
    st.mean_sz.resize(steps);
    st.mean_rho01.resize(steps);
    st.se_rho01.resize(steps);
    st.diverged.resize(steps);
    for (std::size_t j = 0; j < steps; ++j) {
        const auto& m = total[j];
        st.t[j] = cfg.model.t0 + cfg.dt * static_cast<double>(j);
        st.mean_tr[j] = m.tr;
        st.abs_mean_tr[j] = std::abs(m.tr);
        st.mean_sx[j] = m.sx;
        st.mean_sy[j] = m.sy;
        st.mean_sz[j] = m.sz;
        st.mean_rho01[j] = m.rho01;
        st.se_rho01[j] = {std::sqrt(m.m2_re01 / (n - 1.0) / n), std::sqrt(m.m2_im01 / (n - 1.0) / n)};
        st.diverged[j] = m.diverged;
        per_step[j] = m.m2_tr / (n - 1.0);
    }
    st.var_tr = pool_windows(per_step, cfg.stats_window);
    st.se_tr.resize(steps);
    for (std::size_t j = 0; j < steps; ++j) st.se_tr[j] = std::sqrt(st.var_tr[j] / n);
    return st;
}

WindowedStats windowed_stats(const std::vector<std::vector<cplx>>& traces, std::size_t window) {
    if (traces.size() < 2) throw InsufficientSample("windowed statistics need at least two realizations");
    if (window < 1) throw InvalidArgument("window must be at least one step");
    const std::size_t len = traces.front().size();
    for (const auto& tr : traces)
        if (tr.size() != len) throw GridMismatch("trace series differ in length");
    if (window > len) throw InvalidArgument("window longer than the series");

    const double n = static_cast<double>(traces.size());
    std::vector<double> per_step(len);
    for (std::size_t j = 0; j < len; ++j) {
        cplx mean{};
        for (const auto& tr : traces) mean += tr[j];
        mean /= n;
        double ss = 0.0;
        for (const auto& tr : traces) ss += std::norm(tr[j] - mean);
        per_step[j] = ss / (n - 1.0);
    }
    WindowedStats out;
    out.var = pool_windows(per_step, window);
    out.se.resize(len);
    for (std::size_t j = 0; j < len; ++j) out.se[j] = std::sqrt(out.var[j] / n);
    return out;
}

std::size_t stable_until(const EnsembleStats& stats) {
    std::size_t last = 0;
    for (std::size_t j = 0; j < stats.size(); ++j) {
        const double dev = std::abs(stats.mean_tr[j] - 1.0);
        const double se = stats.se_tr[j];
        if (!(se < 0.1) || !(dev <= 5.0 * se + 1e-12)) break;
        last = j;
    }
    return last;
}

LambdaScan scan_lambda(const RunConfig& cfg, const std::vector<double>& lambdas, std::size_t runs_per_point,
                       bool common_random_numbers) {
    if (lambdas.empty()) throw InvalidArgument("lambda list is empty");
    RunConfig base = cfg;
    base.lambda.reset();
    base.n_realizations = runs_per_point;
    EnsemblePlan plan = plan_ensemble(base);
    if (!plan.filters.has_cross_components())
        throw ZeroComponent("scheme '" + std::string(to_string(cfg.scheme)) + "' has no cross-correlative components");

    LambdaScan out;
    out.lambdas = lambdas;
    out.se_final.resize(lambdas.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double lam = lambdas[i];
        if (!(lam > 0.0)) throw InvalidArgument("lambda values must be positive");
        plan.cfg.lambda = lam;
        plan.cfg.master_seed = common_random_numbers ? cfg.master_seed : lambda_seed(cfg.master_seed, lam);
        const EnsembleStats st = run_ensemble(plan);
        out.se_final[i] = st.se_tr.back();
        if (out.se_final[i] < best) {
            best = out.se_final[i];
            out.argmin = lam;
        }
    }
    if (!std::isfinite(best)) out.argmin = lambdas.front();
    return out;
}

} // namespace sln
