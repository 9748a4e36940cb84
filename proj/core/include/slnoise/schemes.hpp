// schemes.hpp: Fourier-domain filter sets for the seven noise-generation schemes
//
// Orthogonal decomposition (x1..x4 real white noises):
//   eta = f1*x1 + f2*(x2 + i x3)
//   nu  = g1*(i x1 + x4) + g2*(x3 + i x2)
// which reproduces K_etanu provided f1(w) g1(-w) + 2 f2(w) g2(-w) = R~(w).
//
// Convex form:
//   eta = f1*x1 + i f2*x2,   nu = g1*(x1 + i x2)

#pragma once

#include "slnoise/kernels.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sln {

enum class SchemeId { Delta, Constrained, Like, Reduced, NuOptimised, EtaNuOptimised, ConvexOptimised };

SchemeId parse_scheme(std::string_view name); // throws InvalidArgument
std::string_view to_string(SchemeId id);
const std::vector<SchemeId>& all_schemes();

enum class Structure { OrthogonalDecomposition, ConvexForm };

enum class FilterSlot { F1, F2, G1, G2 };
enum class Output { Eta, Nu };

struct Tap {
    int channel; // 0-based white-noise index
    cplx unit;   // 1 or i
};

// One filter applied to a unit-weighted sum of white channels.
struct Term {
    Output output;
    FilterSlot slot;
    std::vector<Tap> taps;
    bool cross; // part of eta0 / nu0, subject to rescaling
};

struct FilterSet {
    SchemeId scheme{SchemeId::Like};
    Structure structure{Structure::OrthogonalDecomposition};
    FrequencyGrid grid;
    std::vector<cplx> f1_w, f2_w, g1_w, g2_w;
    std::vector<Term> terms;
    int channels{0};
    double gamma{0.0};
    double zeta{0.0};
    std::optional<std::vector<double>> mixing;
    std::vector<std::size_t> branch_cut_bins; // principal sqrt taken on the negative real axis
    std::vector<std::size_t> guarded_bins;    // degenerate bins resolved by a documented limit

    const std::vector<cplx>& filter(FilterSlot slot) const;
    bool has_cross_components() const;
};

struct MixingFunction {
    std::vector<double> a_w;
    std::vector<std::size_t> guarded_bins;
};

// sqrt(K) / (K + gamma max sqrt(K)). With gamma = 0 this is 1/sqrt(K) and any
// zero bin raises DivisionByZeroSpectrum.
std::vector<double> wiener_inverse(const std::vector<double>& k_etaeta_w, double gamma);

// A = 0 where |R~| <= K~_etaeta, else 1; bins with K~_etaeta = 0 take A = 1.
MixingFunction mixing_reduced(const std::vector<double>& k_etaeta_w, const std::vector<cplx>& r_w);

// A = 1 - zeta K~_etaeta / |R~|, clamped to [0, 1]. zeta = 1/4 minimises the nu
// power, zeta = 1/2 the total power. Bins with R~ = 0 take A = 0 and are recorded.
MixingFunction mixing_optimised(const std::vector<double>& k_etaeta_w, const std::vector<cplx>& r_w,
                                double zeta);

// C = (1 - (4|R~|^2 / K~^2 + 1)^(-1/2)) / 2 in [0, 1/2). Bins with K~ = 0 < |R~|
// are set to 1/2 - 1e-12 and appended to `guarded` when given.
std::vector<double> convex_c(const std::vector<double>& k_etaeta_w, const std::vector<cplx>& r_w,
                             std::vector<std::size_t>* guarded = nullptr);

// Constrained and Reduced need gamma > 0 unless no zero-spectrum bin requires division.
FilterSet make_filters(SchemeId scheme, const KernelTable& kt, double gamma);

// Orthogonal-decomposition filters for an arbitrary real even mixing function.
// A = 0 everywhere gives the Constrained filters, A = 1 the Like filters, bitwise.
FilterSet make_mixed_filters(const KernelTable& kt, const std::vector<double>& a_w, double gamma,
                             SchemeId label = SchemeId::Reduced);

// <|nu(t)|^2> and <|eta|^2> + <|nu|^2> implied by the filters (white variance 1/dt).
double expected_nu_power(const FilterSet& fs);
double expected_total_power(const FilterSet& fs);

struct ConstraintReport {
    double max_abs{0.0};
    double rms{0.0};
    std::vector<double> per_bin;
};

ConstraintReport verify_constraint(const FilterSet& fs, const KernelTable& kt);

// Largest |f*(w) - f(-w)| over bins not listed in `skip`, relative to max |f|.
double reality_defect(const std::vector<cplx>& f, const FrequencyGrid& grid,
                      const std::vector<std::size_t>& skip = {});

// sqrt(lambda) sqrt(sum|nu0| / sum|eta0|); throws ZeroComponent when sum|eta0| = 0.
double rescale_factor(const std::vector<cplx>& eta0, const std::vector<cplx>& nu0, double lambda);

} // namespace sln
