// ensemble.hpp: Realization ensembles, windowed trace statistics and the lambda scan

#pragma once

#include "slnoise/dynamics.hpp"
#include "slnoise/kernels.hpp"
#include "slnoise/noise.hpp"
#include "slnoise/rng.hpp"
#include "slnoise/schemes.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace sln {

struct RunConfig {
    SchemeId scheme{SchemeId::EtaNuOptimised};
    double gamma{0.01};
    std::optional<double> lambda;
    KernelSource bath{BathParams{}};
    SystemModel model{};
    double dt{0.01}; // integrator step; noise is synthesized at dt / 2
    double t_max{10.0};
    double pad_factor{2.0};
    std::size_t n_realizations{1000};
    std::uint64_t master_seed{1};
    std::size_t stats_window{100};
    bool force_zero_nu{false}; // test hook: drop nu after synthesis
    unsigned threads{0};       // 0: $SLN_THREADS or hardware concurrency

    void validate() const;
    TimeGrid noise_grid() const { return TimeGrid::make(0.5 * dt, t_max, pad_factor); }
};

// Per-step ensemble statistics. Variance and SE are windowed: every step in a
// window of `window` steps reports the same pooled value.
struct EnsembleStats {
    std::vector<double> t;
    std::vector<cplx> mean_tr;
    std::vector<double> abs_mean_tr;
    std::vector<double> var_tr;
    std::vector<double> se_tr;
    std::vector<cplx> mean_sx, mean_sy, mean_sz;
    std::vector<cplx> mean_rho01;
    std::vector<cplx> se_rho01; // cplx(se of Re, se of Im), per step
    std::vector<std::size_t> diverged; // trajectories diverged at or before this step
    std::size_t n_realizations{0};
    std::size_t window{0};

    std::size_t size() const { return t.size(); }
};

// Precomputed inputs shared by every realization of a config.
struct EnsemblePlan {
    RunConfig cfg;
    TimeGrid grid;
    KernelTable table;
    FilterSet filters;
};

EnsemblePlan plan_ensemble(const RunConfig& cfg);

EnsembleStats run_ensemble(const RunConfig& cfg);
EnsembleStats run_ensemble(const EnsemblePlan& plan);

// Runs only realizations [first, first + count) of a plan; used by the scan
// to share one plan across lambda values.
EnsembleStats run_ensemble_range(const EnsemblePlan& plan, std::size_t first, std::size_t count);

// traces[r][j]: realization r at step j. Variance pools every (realization, step)
// pair of a window around its own per-step means, so drift inside the window
// does not inflate it. SE = sqrt(var / n_realizations).
struct WindowedStats {
    std::vector<double> var;
    std::vector<double> se;
};

WindowedStats windowed_stats(const std::vector<std::vector<cplx>>& traces, std::size_t window);

// Last step index at which |<tr> - 1| <= 5 SE and SE < 0.1 hold for every step up to it.
std::size_t stable_until(const EnsembleStats& stats);

struct LambdaScan {
    std::vector<double> lambdas;
    std::vector<double> se_final; // SE of <tr> over the final window
    double argmin{0.0};
};

// Each lambda gets its own realization seeds derived from the master seed and
// the lambda value, so repeated lambdas reproduce each other. With
// common_random_numbers every point reuses the same seeds instead.
LambdaScan scan_lambda(const RunConfig& cfg, const std::vector<double>& lambdas, std::size_t runs_per_point,
                       bool common_random_numbers = false);

} // namespace sln
