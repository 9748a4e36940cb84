// schemes.cpp: filter construction, power functionals and constraint checks

#include "slnoise/schemes.hpp"

#include "slnoise/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sln {
namespace {

constexpr cplx kI{0.0, 1.0};

const std::vector<Term>& orthogonal_terms() {
    static const std::vector<Term> terms{
        {Output::Eta, FilterSlot::F1, {{0, 1.0}}, false},
        {Output::Eta, FilterSlot::F2, {{1, 1.0}, {2, kI}}, true},
        {Output::Nu, FilterSlot::G1, {{0, kI}, {3, 1.0}}, false},
        {Output::Nu, FilterSlot::G2, {{2, 1.0}, {1, kI}}, true},
    };
    return terms;
}

const std::vector<Term>& convex_terms() {
    static const std::vector<Term> terms{
        {Output::Eta, FilterSlot::F1, {{0, 1.0}}, false},
        {Output::Eta, FilterSlot::F2, {{1, kI}}, false},
        {Output::Nu, FilterSlot::G1, {{0, 1.0}, {1, kI}}, false},
    };
    return terms;
}

double max_sqrt(const std::vector<double>& k) {
    double m = 0.0;
    for (double v : k) m = std::max(m, std::sqrt(v));
    return m;
}

// Regularised inverse used inside filter construction. At gamma = 0 the bare
// division is only an error when a zero bin carries a nonzero numerator.
struct Inverse {
    const std::vector<double>& k;
    double gamma;
    double scale;

    Inverse(const std::vector<double>& k_, double gamma_) : k(k_), gamma(gamma_), scale(gamma_ * max_sqrt(k_)) {}

    cplx apply(cplx num, std::size_t bin) const {
        if (num == cplx{}) return {};
        const double kv = k[bin];
        if (gamma > 0.0) return num * (std::sqrt(kv) / (kv + scale));
        if (kv <= 0.0)
            throw DivisionByZeroSpectrum("bare division by sqrt(K_etaeta) at a zero bin (index " +
                                         std::to_string(bin) + "); supply gamma > 0");
        return num * (1.0 / std::sqrt(kv));
    }
};

void check_lengths(const std::vector<double>& k, const std::vector<cplx>& r) {
    if (k.size() != r.size()) throw GridMismatch("K_etaeta and R~ arrays differ in length");
}

void finish(FilterSet& fs) {
    fs.channels = 0;
    for (const auto& term : fs.terms) {
        const auto& f = fs.filter(term.slot);
        const bool used = std::any_of(f.begin(), f.end(), [](cplx v) { return v != cplx{}; });
        if (!used) continue;
        for (const auto& tap : term.taps) fs.channels = std::max(fs.channels, tap.channel + 1);
    }
    std::sort(fs.branch_cut_bins.begin(), fs.branch_cut_bins.end());
    fs.branch_cut_bins.erase(std::unique(fs.branch_cut_bins.begin(), fs.branch_cut_bins.end()),
                             fs.branch_cut_bins.end());
}

cplx principal_sqrt(cplx z, std::size_t bin, std::vector<std::size_t>& branch_bins) {
    if (z.imag() == 0.0 && z.real() < 0.0) branch_bins.push_back(bin);
    return std::sqrt(z);
}

FilterSet base_set(SchemeId scheme, Structure structure, const KernelTable& kt, double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be finite and >= 0");
    FilterSet fs;
    fs.scheme = scheme;
    fs.structure = structure;
    fs.grid = kt.grid;
    fs.gamma = gamma;
    const std::size_t n = kt.grid.n;
    fs.f1_w.assign(n, cplx{});
    fs.f2_w.assign(n, cplx{});
    fs.g1_w.assign(n, cplx{});
    fs.g2_w.assign(n, cplx{});
    fs.terms = structure == Structure::ConvexForm ? convex_terms() : orthogonal_terms();
    if (structure == Structure::OrthogonalDecomposition)
        for (std::size_t k = 0; k < n; ++k) fs.f1_w[k] = std::sqrt(kt.k_etaeta_w[k]);
    return fs;
}

FilterSet make_delta(const KernelTable& kt) {
    FilterSet fs = base_set(SchemeId::Delta, Structure::OrthogonalDecomposition, kt, 0.0);
    for (std::size_t k = 0; k < kt.grid.n; ++k) {
        fs.f2_w[k] = 0.5 * kt.r_w[k];
        fs.g2_w[k] = 1.0;
    }
    finish(fs);
    return fs;
}

FilterSet make_constrained(const KernelTable& kt, double gamma) {
    FilterSet fs = base_set(SchemeId::Constrained, Structure::OrthogonalDecomposition, kt, gamma);
    const Inverse inv(kt.k_etaeta_w, gamma);
    for (std::size_t k = 0; k < kt.grid.n; ++k) fs.g1_w[k] = inv.apply(kt.r_w[kt.grid.mirror(k)], k);
    fs.mixing = std::vector<double>(kt.grid.n, 0.0);
    finish(fs);
    return fs;
}

FilterSet make_like(const KernelTable& kt, double gamma) {
    FilterSet fs = base_set(SchemeId::Like, Structure::OrthogonalDecomposition, kt, gamma);
    const std::size_t n = kt.grid.n;
    for (std::size_t k = 0; k < n; ++k) fs.f2_w[k] = principal_sqrt(0.5 * kt.r_w[k], k, fs.branch_cut_bins);
    for (std::size_t k = 0; k < n; ++k) fs.g2_w[k] = fs.f2_w[kt.grid.mirror(k)];
    fs.mixing = std::vector<double>(n, 1.0);
    finish(fs);
    return fs;
}

FilterSet make_optimised(SchemeId scheme, const KernelTable& kt, double gamma, double zeta) {
    MixingFunction mix = mixing_optimised(kt.k_etaeta_w, kt.r_w, zeta);
    FilterSet fs = base_set(scheme, Structure::OrthogonalDecomposition, kt, gamma);
    fs.zeta = zeta;
    fs.guarded_bins = mix.guarded_bins;
    const Inverse inv(kt.k_etaeta_w, gamma);
    for (std::size_t k = 0; k < kt.grid.n; ++k) {
        const std::size_t m = kt.grid.mirror(k);
        const double a = mix.a_w[k];
        const cplx r = kt.r_w[k];
        const cplx rm = kt.r_w[m];
        if (a > 0.0) {
            fs.f2_w[k] = principal_sqrt((0.5 * a) * r, k, fs.branch_cut_bins);
            fs.g2_w[k] = principal_sqrt((0.5 * a) * rm, k, fs.branch_cut_bins);
            // (1 - A) / sqrt(K) = zeta sqrt(K) / |R|: no division by the spectrum.
            if (a < 1.0) fs.g1_w[k] = rm * (zeta * std::sqrt(kt.k_etaeta_w[k]) / std::abs(r));
        } else {
            fs.g1_w[k] = inv.apply(rm, k);
        }
    }
    fs.mixing = std::move(mix.a_w);
    finish(fs);
    return fs;
}

FilterSet make_convex(const KernelTable& kt) {
    FilterSet fs = base_set(SchemeId::ConvexOptimised, Structure::ConvexForm, kt, 0.0);
    const auto c = convex_c(kt.k_etaeta_w, kt.r_w, &fs.guarded_bins);
    for (std::size_t k = 0; k < kt.grid.n; ++k) {
        const double kv = kt.k_etaeta_w[k];
        const double ar = std::abs(kt.r_w[k]);
        const double s = std::sqrt(kv * kv + 4.0 * ar * ar);
        if (s == 0.0) continue;
        const double rs = std::sqrt(s);
        fs.f1_w[k] = (1.0 - c[k]) * rs;
        fs.f2_w[k] = c[k] * rs;
        fs.g1_w[k] = kt.r_w[kt.grid.mirror(k)] / rs;
    }
    finish(fs);
    return fs;
}

double power_of(const FilterSet& fs, bool include_eta) {
    double sum = 0.0;
    for (const auto& term : fs.terms) {
        if (term.output == Output::Eta && !include_eta) continue;
        double weight = 0.0;
        for (const auto& tap : term.taps) weight += std::norm(tap.unit);
        for (const auto& v : fs.filter(term.slot)) sum += weight * std::norm(v);
    }
    return sum / (static_cast<double>(fs.grid.n) * fs.grid.dt);
}

} // namespace

SchemeId parse_scheme(std::string_view name) {
    for (SchemeId id : all_schemes())
        if (to_string(id) == name) return id;
    throw InvalidArgument("unknown scheme '" + std::string(name) +
                          "' (expected delta, constrained, like, reduced, nu-optimised, etanu-optimised, convex)");
}

std::string_view to_string(SchemeId id) {
    switch (id) {
    case SchemeId::Delta: return "delta";
    case SchemeId::Constrained: return "constrained";
    case SchemeId::Like: return "like";
    case SchemeId::Reduced: return "reduced";
    case SchemeId::NuOptimised: return "nu-optimised";
    case SchemeId::EtaNuOptimised: return "etanu-optimised";
    case SchemeId::ConvexOptimised: return "convex";
    }
    return "?";
}

const std::vector<SchemeId>& all_schemes() {
    static const std::vector<SchemeId> ids{SchemeId::Delta,       SchemeId::Constrained,    SchemeId::Like,
                                           SchemeId::Reduced,     SchemeId::NuOptimised,    SchemeId::EtaNuOptimised,
                                           SchemeId::ConvexOptimised};
    return ids;
}

const std::vector<cplx>& FilterSet::filter(FilterSlot slot) const {
    switch (slot) {
    case FilterSlot::F1: return f1_w;
    case FilterSlot::F2: return f2_w;
    case FilterSlot::G1: return g1_w;
    case FilterSlot::G2: return g2_w;
    }
    return f1_w;
}

bool FilterSet::has_cross_components() const {
    for (const auto& term : terms) {
        if (!term.cross) continue;
        const auto& f = filter(term.slot);
        if (std::any_of(f.begin(), f.end(), [](cplx v) { return v != cplx{}; })) return true;
    }
    return false;
}

std::vector<double> wiener_inverse(const std::vector<double>& k_etaeta_w, double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be finite and >= 0");
    std::vector<double> out(k_etaeta_w.size());
    if (gamma == 0.0) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            if (k_etaeta_w[k] <= 0.0)
                throw DivisionByZeroSpectrum("K_etaeta vanishes at bin " + std::to_string(k) +
                                             " (the hard cutoff zeroes it); gamma = 0 is not usable");
            out[k] = 1.0 / std::sqrt(k_etaeta_w[k]);
        }
        return out;
    }
    const double scale = gamma * max_sqrt(k_etaeta_w);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double kv = std::max(k_etaeta_w[k], 0.0);
        out[k] = std::sqrt(kv) / (kv + scale);
    }
    return out;
}

MixingFunction mixing_reduced(const std::vector<double>& k_etaeta_w, const std::vector<cplx>& r_w) {
    check_lengths(k_etaeta_w, r_w);
    MixingFunction mix;
    mix.a_w.resize(k_etaeta_w.size());
    for (std::size_t k = 0; k < mix.a_w.size(); ++k) {
        const double kv = k_etaeta_w[k];
        if (kv <= 0.0) {
            mix.a_w[k] = 1.0;
            mix.guarded_bins.push_back(k);
        } else {
            mix.a_w[k] = std::abs(r_w[k]) <= kv ? 0.0 : 1.0;
        }
    }
    return mix;
}

MixingFunction mixing_optimised(const std::vector<double>& k_etaeta_w, const std::vector<cplx>& r_w,
                                double zeta) {
    check_lengths(k_etaeta_w, r_w);
    if (!(zeta > 0.0)) throw InvalidArgument("zeta must be positive");
    MixingFunction mix;
    mix.a_w.resize(k_etaeta_w.size());
    for (std::size_t k = 0; k < mix.a_w.size(); ++k) {
        const double ar = std::abs(r_w[k]);
        if (ar == 0.0) {
            mix.a_w[k] = 0.0;
            mix.guarded_bins.push_back(k);
            continue;
        }
        mix.a_w[k] = std::clamp(1.0 - zeta * k_etaeta_w[k] / ar, 0.0, 1.0);
    }
    return mix;
}

std::vector<double> convex_c(const std::vector<double>& k_etaeta_w, const std::vector<cplx>& r_w,
                             std::vector<std::size_t>* guarded) {
    check_lengths(k_etaeta_w, r_w);
    std::vector<double> c(k_etaeta_w.size(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double kv = k_etaeta_w[k];
        const double ar = std::abs(r_w[k]);
        if (ar == 0.0) continue;
        if (kv <= 0.0) {
            c[k] = 0.5 - 1e-12;
            if (guarded) guarded->push_back(k);
            continue;
        }
        // K / sqrt(K^2 + 4|R|^2) written to stay finite for large |R| / K.
        const double q = 2.0 * ar / kv;
        c[k] = 0.5 * (1.0 - 1.0 / std::hypot(1.0, q));
    }
    return c;
}

FilterSet make_filters(SchemeId scheme, const KernelTable& kt, double gamma) {
    switch (scheme) {
    case SchemeId::Delta: return make_delta(kt);
    case SchemeId::Constrained:
        if (gamma == 0.0) {
            (void)wiener_inverse(kt.k_etaeta_w, 0.0); // raises on the zero bins
        }
        return make_constrained(kt, gamma);
    case SchemeId::Like: return make_like(kt, gamma);
    case SchemeId::Reduced: {
        MixingFunction mix = mixing_reduced(kt.k_etaeta_w, kt.r_w);
        FilterSet fs = make_mixed_filters(kt, mix.a_w, gamma, SchemeId::Reduced);
        fs.guarded_bins = std::move(mix.guarded_bins);
        return fs;
    }
    case SchemeId::NuOptimised: return make_optimised(scheme, kt, gamma, 0.25);
    case SchemeId::EtaNuOptimised: return make_optimised(scheme, kt, gamma, 0.5);
    case SchemeId::ConvexOptimised: return make_convex(kt);
    }
    throw InvalidArgument("unhandled scheme");
}

FilterSet make_mixed_filters(const KernelTable& kt, const std::vector<double>& a_w, double gamma, SchemeId label) {
    if (a_w.size() != kt.grid.n) throw GridMismatch("mixing function length does not match the grid");
    FilterSet fs = base_set(label, Structure::OrthogonalDecomposition, kt, gamma);
    const Inverse inv(kt.k_etaeta_w, gamma);
    for (std::size_t k = 0; k < kt.grid.n; ++k) {
        const double a = a_w[k];
        const cplx rm = kt.r_w[kt.grid.mirror(k)];
        if (a != 0.0) {
            fs.f2_w[k] = principal_sqrt((0.5 * a) * kt.r_w[k], k, fs.branch_cut_bins);
            fs.g2_w[k] = principal_sqrt((0.5 * a) * rm, k, fs.branch_cut_bins);
        }
        if (1.0 - a != 0.0) fs.g1_w[k] = inv.apply(rm * (1.0 - a), k);
    }
    fs.mixing = a_w;
    finish(fs);
    return fs;
}

double expected_nu_power(const FilterSet& fs) { return power_of(fs, false); }

double expected_total_power(const FilterSet& fs) { return power_of(fs, true); }

ConstraintReport verify_constraint(const FilterSet& fs, const KernelTable& kt) {
    if (!(fs.grid == kt.grid)) throw GridMismatch("filter set and kernel table use different grids");
    ConstraintReport rep;
    const std::size_t n = kt.grid.n;
    rep.per_bin.resize(n);
    double sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t m = kt.grid.mirror(k);
        cplx lhs;
        if (fs.structure == Structure::OrthogonalDecomposition)
            lhs = fs.f1_w[k] * fs.g1_w[m] + 2.0 * fs.f2_w[k] * fs.g2_w[m];
        else
            lhs = (fs.f1_w[k] - fs.f2_w[k]) * fs.g1_w[m];
        const double res = std::abs(lhs - kt.r_w[k]);
        rep.per_bin[k] = res;
        rep.max_abs = std::max(rep.max_abs, res);
        sq += res * res;
    }
    rep.rms = std::sqrt(sq / static_cast<double>(n));
    return rep;
}

double reality_defect(const std::vector<cplx>& f, const FrequencyGrid& grid, const std::vector<std::size_t>& skip) {
    double peak = 0.0, worst = 0.0;
    for (const auto& v : f) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (std::binary_search(skip.begin(), skip.end(), k)) continue;
        worst = std::max(worst, std::abs(std::conj(f[k]) - f[grid.mirror(k)]));
    }
    return worst / peak;
}

double rescale_factor(const std::vector<cplx>& eta0, const std::vector<cplx>& nu0, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
    double se = 0.0, sn = 0.0;
    for (const auto& v : eta0) se += std::abs(v);
    for (const auto& v : nu0) sn += std::abs(v);
    if (se == 0.0) throw ZeroComponent("eta0 is identically zero; rescaling needs a cross-correlative component");
    return std::sqrt(lambda) * std::sqrt(sn / se);
}

} // namespace sln
