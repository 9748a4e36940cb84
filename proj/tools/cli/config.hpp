// config.hpp: Flat key=value experiment configs for the sln tool

#pragma once

#include <slnoise/ensemble.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sln::cli {

// Bad or missing configuration; maps to exit status 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Recognised keys, in the order they are documented.
const std::vector<std::string>& known_keys();

using RawConfig = std::map<std::string, std::string>;

// Parses `key = value` lines; '#' starts a comment. Unknown and duplicate keys
// are rejected with the offending line number.
RawConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RawConfig load_config_file(const std::string& path);

// Entries of `overrides` replace those of `base`.
RawConfig merge(RawConfig base, const RawConfig& overrides);

struct Settings {
    std::optional<SchemeId> scheme;
    double gamma{0.01};
    std::optional<double> lambda;
    std::optional<double> beta;
    double omega_c{25.0};
    double alpha{0.05};
    double delta{1.0};
    std::optional<double> epsilon;
    std::optional<double> kappa;
    double dt{0.01};
    double t_max{10.0};
    double t0{0.0};
    double pad_factor{2.0};
    std::size_t n_realizations{1000};
    std::uint64_t seed{1};
    std::size_t stats_window{100};
    std::optional<std::string> output;
    double max_lag{2.0};
    double lambda_min{0.01};
    double lambda_max{10.0};
    std::size_t lambda_points{13};
    unsigned threads{0};

    BathParams bath() const; // requires beta
    Drive drive() const;     // epsilon (default -1) or kappa sweep
    RunConfig run_config() const;
};

struct Requirements {
    bool scheme{false};
    bool beta{false};
};

// Typed, validated view of a raw config.
Settings interpret(const RawConfig& raw, Requirements req);

} // namespace sln::cli
