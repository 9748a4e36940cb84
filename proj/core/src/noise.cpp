#include "slnoise/noise.hpp"

#include "fft.hpp"
#include "slnoise/errors.hpp"
#include "slnoise/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace sln {

TimeGrid TimeGrid::make(double dt, double t_max, double pad_factor) {
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
    if (!(pad_factor >= 2.0)) throw InvalidArgument("pad_factor must be at least 2");
    TimeGrid g;
    g.dt = dt;
    g.t_max = t_max;
    g.pad_factor = pad_factor;
    g.physical = static_cast<std::size_t>(std::llround(t_max / dt)) + 1;
    const auto want = static_cast<std::size_t>(std::ceil(pad_factor * static_cast<double>(g.physical - 1)));
    g.n = std::bit_ceil(std::max<std::size_t>(want, 2));
    return g;
}

WhiteChannels sample_white(const TimeGrid& grid, std::uint64_t seed, int channels) {
    if (channels < 0) throw InvalidArgument("negative channel count");
    const double sigma = 1.0 / std::sqrt(grid.dt);
    WhiteChannels out(static_cast<std::size_t>(channels), std::vector<double>(grid.n));
    for (int c = 0; c < channels; ++c) NormalStream(seed, static_cast<std::uint64_t>(c)).fill(out[c], sigma);
    return out;
}

NoisePair synthesize(const FilterSet& fs, const TimeGrid& grid, std::uint64_t seed, std::optional<double> lambda) {
    NoisePair p = synthesize_from(fs, grid, sample_white(grid, seed, fs.channels), lambda);
    p.seed = seed;
    return p;
}

NoisePair synthesize_from(const FilterSet& fs, const TimeGrid& grid, const WhiteChannels& white,
                          std::optional<double> lambda) {
    if (!(fs.grid == grid.frequency_grid()))
        throw GridMismatch("filter grid (n=" + std::to_string(fs.grid.n) + ") does not match the time grid (n=" +
                           std::to_string(grid.n) + ")");
    if (white.size() < static_cast<std::size_t>(fs.channels))
        throw InvalidArgument("not enough white-noise channels for this filter set");
    const std::size_t n = grid.n;
    for (int c = 0; c < fs.channels; ++c)
        if (white[c].size() != n) throw GridMismatch("white channel length does not match the time grid");

    // Continuous-transform scaling: forward carries dt, inverse 1/(n dt).
    std::vector<std::vector<cplx>> x_w(static_cast<std::size_t>(fs.channels));
    for (int c = 0; c < fs.channels; ++c) {
        auto& buf = x_w[c];
        buf.resize(n);
        for (std::size_t j = 0; j < n; ++j) buf[j] = white[c][j] * grid.dt;
        detail::fft_forward(buf);
    }

    // eta auto, eta0, nu auto, nu0
    std::vector<cplx> acc[4];
    for (auto& a : acc) a.assign(n, cplx{});
    bool touched[4] = {false, false, false, false};
    for (const auto& term : fs.terms) {
        const auto& f = fs.filter(term.slot);
        const int slot = (term.output == Output::Eta ? 0 : 2) + (term.cross ? 1 : 0);
        for (const auto& tap : term.taps) {
            if (tap.channel >= fs.channels) continue; // filter is identically zero
            const auto& x = x_w[tap.channel];
            auto& out = acc[slot];
            for (std::size_t k = 0; k < n; ++k) out[k] += f[k] * tap.unit * x[k];
            touched[slot] = true;
        }
    }

    const double inv = 1.0 / (static_cast<double>(n) * grid.dt);
    std::vector<cplx> series[4];
    for (int s = 0; s < 4; ++s) {
        series[s].assign(grid.physical, cplx{});
        if (!touched[s]) continue;
        detail::fft_backward(acc[s]);
        for (std::size_t j = 0; j < grid.physical; ++j) series[s][j] = acc[s][j] * inv;
    }

    NoisePair p;
    p.scheme = fs.scheme;
    p.dt = grid.dt;
    p.eta0 = series[1];
    p.nu0 = series[3];
    double scale = 1.0;
    if (lambda) {
        if (!fs.has_cross_components())
            throw ZeroComponent("scheme '" + std::string(to_string(fs.scheme)) + "' has no cross-correlative components");
        scale = rescale_factor(p.eta0, p.nu0, *lambda);
    }
    p.lambda_applied = scale;
    p.eta.resize(grid.physical);
    p.nu.resize(grid.physical);
    for (std::size_t j = 0; j < grid.physical; ++j) {
        p.eta[j] = series[0][j] + scale * series[1][j];
        p.nu[j] = series[2][j] + series[3][j] / scale;
    }
    return p;
}

namespace {

struct Moments {
    std::vector<cplx> sum;
    std::vector<double> sq_re, sq_im;

    explicit Moments(std::size_t n) : sum(n), sq_re(n, 0.0), sq_im(n, 0.0) {}

    void add(std::size_t i, cplx v) {
        sum[i] += v;
        sq_re[i] += v.real() * v.real();
        sq_im[i] += v.imag() * v.imag();
    }

    void finish(std::vector<cplx>& mean, std::vector<cplx>& se, std::size_t count) const {
        const double n = static_cast<double>(count);
        mean.resize(sum.size());
        se.resize(sum.size());
        for (std::size_t i = 0; i < sum.size(); ++i) {
            const cplx m = sum[i] / n;
            const double vr = std::max(0.0, (sq_re[i] - n * m.real() * m.real()) / (n - 1.0));
            const double vi = std::max(0.0, (sq_im[i] - n * m.imag() * m.imag()) / (n - 1.0));
            mean[i] = m;
            se[i] = {std::sqrt(vr / n), std::sqrt(vi / n)};
        }
    }
};

} // namespace

CorrelationEstimate estimate_correlations(const std::vector<NoisePair>& pairs, double max_lag) {
    if (pairs.size() < 2) throw InsufficientSample("need at least two realizations");
    const NoisePair& first = pairs.front();
    const std::size_t len = first.eta.size();
    const double dt = first.dt;
    for (const auto& p : pairs) {
        if (p.eta.size() != len || p.nu.size() != len || p.dt != dt)
            throw GridMismatch("realizations do not share a time grid");
        if (p.scheme != first.scheme) throw InvalidArgument("realizations come from different schemes");
    }
    const auto lag = static_cast<std::size_t>(std::llround(max_lag / dt));
    if (lag + 1 >= len) throw InsufficientSample("max_lag leaves no time origins in the window");
    const std::size_t origins = len - lag;

    CorrelationEstimate est;
    est.dt = dt;
    est.max_lag = lag;
    est.n_realizations = pairs.size();

    Moments ee(lag + 1), nn(lag + 1), en(2 * lag + 1);
    std::vector<cplx> r_ee(lag + 1), r_nn(lag + 1), r_en(2 * lag + 1);
    const double norm = 1.0 / static_cast<double>(origins);
    for (const auto& p : pairs) {
        std::fill(r_ee.begin(), r_ee.end(), cplx{});
        std::fill(r_nn.begin(), r_nn.end(), cplx{});
        std::fill(r_en.begin(), r_en.end(), cplx{});
        for (std::size_t s = 0; s < origins; ++s) {
            const cplx eta_s = p.eta[s];
            const cplx nu_s = p.nu[s];
            for (std::size_t l = 0; l <= lag; ++l) {
                r_ee[l] += p.eta[s + l] * eta_s;
                r_nn[l] += p.nu[s + l] * nu_s;
                r_en[lag + l] += p.eta[s + l] * nu_s; // tau = +l
            }
            for (std::size_t l = 1; l <= lag; ++l) r_en[lag - l] += eta_s * p.nu[s + l]; // tau = -l
        }
        for (std::size_t l = 0; l <= lag; ++l) {
            ee.add(l, r_ee[l] * norm);
            nn.add(l, r_nn[l] * norm);
        }
        for (std::size_t i = 0; i < r_en.size(); ++i) en.add(i, r_en[i] * norm);
    }
    ee.finish(est.etaeta, est.se_etaeta, pairs.size());
    nn.finish(est.nunu, est.se_nunu, pairs.size());
    en.finish(est.etanu, est.se_etanu, pairs.size());
    return est;
}

} // namespace sln
