#include "oracles.hpp"

#include <slnoise/errors.hpp>
#include <slnoise/noise.hpp>
#include <slnoise/rng.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace {

using sln::cplx;
using sln::SchemeId;

struct Setup {
    sln::TimeGrid grid;
    sln::KernelTable table;
};

const Setup& setup() {
    static const Setup s = [] {
        Setup out;
        out.grid = sln::TimeGrid::make(0.01, 5.11);
        out.table = sln::build_kernel_table(out.grid.frequency_grid(), sln::BathParams{1.0, 25.0});
        return out;
    }();
    return s;
}

std::vector<sln::NoisePair> realizations(const sln::FilterSet& fs, std::size_t n, std::uint64_t master,
                                         std::optional<double> lambda = std::nullopt) {
    std::vector<sln::NoisePair> out;
    out.reserve(n);
    for (std::size_t r = 0; r < n; ++r) out.push_back(sln::synthesize(fs, setup().grid, sln::seed_for(master, r), lambda));
    return out;
}

TEST(TimeGrid, PaddingAndPowerOfTwo) {
    const auto g = sln::TimeGrid::make(0.01, 5.11);
    EXPECT_EQ(g.physical, 512u);
    EXPECT_EQ(g.n, 1024u);
    const auto h = sln::TimeGrid::make(0.005, 10.0, 2.0);
    EXPECT_EQ(h.physical, 2001u);
    EXPECT_EQ(h.n, 4096u);
    EXPECT_GE(h.n * h.dt, 2.0 * h.t_max);
    EXPECT_THROW(sln::TimeGrid::make(0.01, 1.0, 1.5), sln::InvalidArgument);
}

TEST(SampleWhite, MomentsAndDeterminism) {
    const auto grid = sln::TimeGrid::make(0.01, 5242.87); // n = 2^20
    ASSERT_EQ(grid.n, 1u << 20);
    const auto w = sln::sample_white(grid, 42, 2);
    const double n = static_cast<double>(grid.n);
    double mean = 0.0, sq = 0.0;
    for (double v : w[0]) mean += v;
    mean /= n;
    for (double v : w[0]) sq += (v - mean) * (v - mean);
    const double var = sq / (n - 1.0);
    EXPECT_LE(std::abs(mean), 5.0 * std::sqrt(1.0 / (grid.dt * n)));
    // var of the sample variance is 2 sigma^4 / (n - 1)
    const double sigma2 = 1.0 / grid.dt;
    EXPECT_LE(std::abs(var - sigma2), 5.0 * sigma2 * std::sqrt(2.0 / (n - 1.0)));

    double cross = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) cross += w[0][i] * w[1][i];
    EXPECT_LE(std::abs(cross / n * grid.dt), 5.0 / std::sqrt(n));

    const auto again = sln::sample_white(grid, 42, 2);
    EXPECT_EQ(w, again);
}

TEST(Synthesize, ZeroInputGivesZeroNoise) {
    const auto fs = sln::make_filters(SchemeId::Like, setup().table, 0.01);
    sln::WhiteChannels zero(4, std::vector<double>(setup().grid.n, 0.0));
    const auto p = sln::synthesize_from(fs, setup().grid, zero);
    for (std::size_t j = 0; j < p.eta.size(); ++j) {
        EXPECT_EQ(p.eta[j], cplx{});
        EXPECT_EQ(p.nu[j], cplx{});
    }
}

TEST(Synthesize, DeltaPassesChannelsStraightIntoNu) {
    const auto fs = sln::make_filters(SchemeId::Delta, setup().table, 0.01);
    const auto white = sln::sample_white(setup().grid, 3, fs.channels);
    const auto p = sln::synthesize_from(fs, setup().grid, white);
    for (std::size_t j = 0; j < p.nu.size(); j += 17) {
        const cplx direct{white[2][j], white[1][j]}; // x3 + i x2
        EXPECT_NEAR(std::abs(p.nu[j] - direct), 0.0, 1e-9 * std::abs(direct) + 1e-9);
    }
}

TEST(Synthesize, DeterministicForSeed) {
    const auto fs = sln::make_filters(SchemeId::EtaNuOptimised, setup().table, 0.01);
    const auto a = sln::synthesize(fs, setup().grid, 99, 0.5);
    const auto b = sln::synthesize(fs, setup().grid, 99, 0.5);
    EXPECT_EQ(a.eta, b.eta);
    EXPECT_EQ(a.nu, b.nu);
    EXPECT_EQ(a.lambda_applied, b.lambda_applied);
}

TEST(Synthesize, RescalingTouchesOnlyCrossComponents) {
    const auto fs = sln::make_filters(SchemeId::EtaNuOptimised, setup().table, 0.01);
    const auto plain = sln::synthesize(fs, setup().grid, 5);
    const auto scaled = sln::synthesize(fs, setup().grid, 5, 0.5);
    EXPECT_EQ(plain.lambda_applied, 1.0);
    const double l = scaled.lambda_applied;
    EXPECT_DOUBLE_EQ(l, sln::rescale_factor(plain.eta0, plain.nu0, 0.5));
    for (std::size_t j = 0; j < plain.eta.size(); j += 11) {
        const cplx eta_auto = plain.eta[j] - plain.eta0[j];
        const cplx nu_auto = plain.nu[j] - plain.nu0[j];
        EXPECT_NEAR(std::abs(scaled.eta[j] - (eta_auto + l * plain.eta0[j])), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(scaled.nu[j] - (nu_auto + plain.nu0[j] / l)), 0.0, 1e-10);
    }
}

TEST(Synthesize, RejectsMismatchedGridAndMissingCrossComponents) {
    const auto fs = sln::make_filters(SchemeId::Like, setup().table, 0.01);
    EXPECT_THROW(sln::synthesize(fs, sln::TimeGrid::make(0.01, 20.0), 1), sln::GridMismatch);
    const auto convex = sln::make_filters(SchemeId::ConvexOptimised, setup().table, 0.01);
    EXPECT_THROW(sln::synthesize(convex, setup().grid, 1, 0.5), sln::ZeroComponent);
    const auto plain = sln::synthesize(convex, setup().grid, 1);
    for (const auto& v : plain.eta0) EXPECT_EQ(v, cplx{});
    EXPECT_EQ(plain.lambda_applied, 1.0);
}

TEST(Synthesize, NuPowerMatchesFilterPrediction) {
    const auto fs = sln::make_filters(SchemeId::Like, setup().table, 0.01);
    const auto pairs = realizations(fs, 2000, 17);
    // Per-realization time averages are the independent samples.
    double sum = 0.0, sq = 0.0;
    for (const auto& p : pairs) {
        double m = 0.0;
        for (const auto& v : p.nu) m += std::norm(v);
        m /= static_cast<double>(p.nu.size());
        sum += m;
        sq += m * m;
    }
    const double n = static_cast<double>(pairs.size());
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / (n - 1.0));
    EXPECT_NEAR(mean, sln::expected_nu_power(fs), 5.0 * se);
}

TEST(Correlations, EstimatorMatchesBruteForceCovariance) {
    const auto grid = sln::TimeGrid::make(0.02, 5.1); // 256 physical samples
    ASSERT_EQ(grid.physical, 256u);
    const auto table = sln::build_kernel_table(grid.frequency_grid(), sln::BathParams{1.0, 25.0});
    const auto fs = sln::make_filters(SchemeId::Like, table, 0.01);
    std::vector<sln::NoisePair> pairs;
    for (std::size_t r = 0; r < 40; ++r) pairs.push_back(sln::synthesize(fs, grid, sln::seed_for(8, r)));
    const auto est = sln::estimate_correlations(pairs, 1.0);
    const auto ref = oracle::direct_covariance(pairs, est.max_lag);
    for (std::size_t l = 0; l <= est.max_lag; ++l) {
        EXPECT_NEAR(std::abs(est.etaeta[l] - ref.etaeta[l]), 0.0, 1e-9 * std::abs(ref.etaeta[0]));
        EXPECT_NEAR(std::abs(est.nunu[l] - ref.nunu[l]), 0.0, 1e-9 * std::abs(ref.etaeta[0]));
    }
    for (std::size_t i = 0; i < est.etanu.size(); ++i)
        EXPECT_NEAR(std::abs(est.etanu[i] - ref.etanu[i]), 0.0, 1e-9 * std::abs(ref.etaeta[0]));
}

TEST(Correlations, LikeSchemeRecoversTargets) {
    const auto fs = sln::make_filters(SchemeId::Like, setup().table, 0.01);
    const auto pairs = realizations(fs, 2000, 23);
    const auto est = sln::estimate_correlations(pairs, 2.0);
    const sln::BathParams bath{1.0, 25.0};
    int violations = 0;
    const auto L = static_cast<long>(est.max_lag);
    for (long l = 0; l <= L; ++l) {
        const double tau = est.lag_time(l);
        const double target = oracle::k_etaeta_time(tau, bath);
        if (std::abs(est.etaeta[l].real() - target) > 5.0 * est.se_etaeta[l].real()) ++violations;
        if (std::abs(est.nunu[l].real()) > 5.0 * est.se_nunu[l].real()) ++violations;
        if (std::abs(est.nunu[l].imag()) > 5.0 * est.se_nunu[l].imag()) ++violations;
    }
    for (long l = -L; l <= L; ++l) {
        const double target = oracle::r_time(est.lag_time(l), bath); // K_etanu = i R
        if (std::abs(est.etanu[l + L].imag() - target) > 5.0 * est.se_etanu[l + L].imag()) ++violations;
        if (std::abs(est.etanu[l + L].real()) > 5.0 * est.se_etanu[l + L].real()) ++violations;
    }
    EXPECT_EQ(violations, 0);
}

TEST(Correlations, StandardErrorsShrinkWithSampleSize) {
    const auto fs = sln::make_filters(SchemeId::Like, setup().table, 0.01);
    const auto small = sln::estimate_correlations(realizations(fs, 400, 31), 0.5);
    const auto large = sln::estimate_correlations(realizations(fs, 1600, 37), 0.5);
    double ratio = 0.0;
    for (std::size_t l = 0; l <= small.max_lag; ++l) ratio += small.se_etaeta[l].real() / large.se_etaeta[l].real();
    ratio /= static_cast<double>(small.max_lag + 1);
    EXPECT_NEAR(ratio, 2.0, 0.3);
}

TEST(Correlations, RequiresTwoRealizations) {
    const auto fs = sln::make_filters(SchemeId::Like, setup().table, 0.01);
    EXPECT_THROW(sln::estimate_correlations(realizations(fs, 1, 1), 0.5), sln::InsufficientSample);
}

TEST(Correlations, ZeroMeanAndStationaryNuPower) {
    const auto fs = sln::make_filters(SchemeId::EtaNuOptimised, setup().table, 0.01);
    const auto pairs = realizations(fs, 1000, 41);
    const std::size_t len = pairs.front().nu.size();
    double m_re = 0.0, m_sq = 0.0;
    std::vector<double> first, second;
    for (const auto& p : pairs) {
        double s = 0.0, a = 0.0, b = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
            s += p.eta[j].real();
            (j < len / 2 ? a : b) += std::norm(p.nu[j]);
        }
        s /= static_cast<double>(len);
        m_re += s;
        m_sq += s * s;
        first.push_back(a / static_cast<double>(len / 2));
        second.push_back(b / static_cast<double>(len - len / 2));
    }
    const double n = static_cast<double>(pairs.size());
    const double mean = m_re / n;
    EXPECT_LE(std::abs(mean), 5.0 * std::sqrt((m_sq / n - mean * mean) / (n - 1.0)));

    double d = 0.0, dsq = 0.0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        d += first[i] - second[i];
        dsq += (first[i] - second[i]) * (first[i] - second[i]);
    }
    const double dm = d / n;
    EXPECT_LE(std::abs(dm), 5.0 * std::sqrt((dsq / n - dm * dm) / (n - 1.0)));
}

} // namespace
