// noise.hpp: White-noise channels, FFT synthesis of eta/nu and correlation estimates

#pragma once

#include "slnoise/kernels.hpp"
#include "slnoise/schemes.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace sln {

struct TimeGrid {
    double dt{0.0};
    double t_max{0.0};
    double pad_factor{2.0};
    std::size_t n{0};        // FFT length, power of two, n dt >= pad_factor t_max
    std::size_t physical{0}; // samples on [0, t_max], t_max / dt + 1

    static TimeGrid make(double dt, double t_max, double pad_factor = 2.0);
    FrequencyGrid frequency_grid() const { return FrequencyGrid{n, dt}; }
};

// Real white channels with variance 1/dt, one row per channel, n samples each.
using WhiteChannels = std::vector<std::vector<double>>;

WhiteChannels sample_white(const TimeGrid& grid, std::uint64_t seed, int channels);

struct NoisePair {
    std::vector<cplx> eta, nu;   // physical window, rescaling applied
    std::vector<cplx> eta0, nu0; // cross-correlative components before rescaling
    std::uint64_t seed{0};
    SchemeId scheme{SchemeId::Like};
    double lambda_applied{1.0}; // the factor multiplying eta0 (and dividing nu0)
    double dt{0.0};
};

// Draws the white channels for `seed` and filters them. With `lambda` the
// cross components are rescaled per realization; schemes without them raise ZeroComponent.
NoisePair synthesize(const FilterSet& fs, const TimeGrid& grid, std::uint64_t seed,
                     std::optional<double> lambda = std::nullopt);

// Same, from caller-provided white channels (at least fs.channels rows of length grid.n).
NoisePair synthesize_from(const FilterSet& fs, const TimeGrid& grid, const WhiteChannels& white,
                          std::optional<double> lambda = std::nullopt);

// Lag-resolved sample correlations <a(t) b(t')> with tau = t - t'.
// Standard errors come from the spread of per-realization estimates and are
// stored as cplx(se of real part, se of imaginary part).
struct CorrelationEstimate {
    double dt{0.0};
    std::size_t max_lag{0}; // in steps
    std::size_t n_realizations{0};
    std::vector<cplx> etaeta, se_etaeta; // lags 0..max_lag
    std::vector<cplx> nunu, se_nunu;     // lags 0..max_lag
    std::vector<cplx> etanu, se_etanu;   // lags -max_lag..max_lag, index = lag + max_lag

    double lag_time(long lag) const { return dt * static_cast<double>(lag); }
};

CorrelationEstimate estimate_correlations(const std::vector<NoisePair>& pairs, double max_lag);

} // namespace sln
