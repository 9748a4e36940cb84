#include "config.hpp"

#include <slnoise/errors.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sln::cli {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const RawConfig& raw, const std::string& key) {
    const std::string& v = raw.at(key);
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(out))
        throw ConfigError("key '" + key + "': '" + v + "' is not a finite number");
    return out;
}

std::uint64_t to_uint(const RawConfig& raw, const std::string& key) {
    const std::string& v = raw.at(key);
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ConfigError("key '" + key + "': '" + v + "' is not a non-negative integer");
    return out;
}

template <class T, class F>
void read(const RawConfig& raw, const std::string& key, T& dst, F conv) {
    if (raw.count(key)) dst = static_cast<T>(conv(raw, key));
}

void require_positive(double v, const std::string& key) {
    if (!(v > 0.0)) throw ConfigError("key '" + key + "' must be positive");
}

} // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "scheme", "gamma",          "lambda",    "beta",       "omega_c",    "alpha",         "delta",
        "epsilon", "kappa",         "dt",        "t_max",      "t0",         "pad_factor",    "n_realizations",
        "seed",   "stats_window",   "output",    "max_lag",    "lambda_min", "lambda_max",    "lambda_points",
        "threads",
    };
    return keys;
}

RawConfig parse_config_text(const std::string& text, const std::string& origin) {
    const auto& keys = known_keys();
    RawConfig out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto where = origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError(where + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(where + ": key '" + key + "' has no value");
        if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    return out;
}

RawConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

RawConfig merge(RawConfig base, const RawConfig& overrides) {
    for (const auto& [k, v] : overrides) base[k] = v;
    return base;
}

Settings interpret(const RawConfig& raw, Requirements req) {
    Settings s;
    try {
        if (raw.count("scheme")) s.scheme = parse_scheme(raw.at("scheme"));
    } catch (const sln::InvalidArgument& e) {
        throw ConfigError(std::string("key 'scheme': ") + e.what());
    }
    if (req.scheme && !s.scheme) throw ConfigError("missing required key 'scheme'");
    if (raw.count("beta")) s.beta = to_double(raw, "beta");
    if (req.beta && !s.beta) throw ConfigError("missing required key 'beta' (inverse temperature of the Drude bath)");
    if (raw.count("lambda")) s.lambda = to_double(raw, "lambda");
    if (raw.count("epsilon")) s.epsilon = to_double(raw, "epsilon");
    if (raw.count("kappa")) s.kappa = to_double(raw, "kappa");
    if (raw.count("output")) s.output = raw.at("output");

    read(raw, "gamma", s.gamma, to_double);
    read(raw, "omega_c", s.omega_c, to_double);
    read(raw, "alpha", s.alpha, to_double);
    read(raw, "delta", s.delta, to_double);
    read(raw, "dt", s.dt, to_double);
    read(raw, "t_max", s.t_max, to_double);
    read(raw, "t0", s.t0, to_double);
    read(raw, "pad_factor", s.pad_factor, to_double);
    read(raw, "n_realizations", s.n_realizations, to_uint);
    read(raw, "seed", s.seed, to_uint);
    read(raw, "stats_window", s.stats_window, to_uint);
    read(raw, "max_lag", s.max_lag, to_double);
    read(raw, "lambda_min", s.lambda_min, to_double);
    read(raw, "lambda_max", s.lambda_max, to_double);
    read(raw, "lambda_points", s.lambda_points, to_uint);
    read(raw, "threads", s.threads, to_uint);

    if (s.beta) require_positive(*s.beta, "beta");
    if (s.lambda) require_positive(*s.lambda, "lambda");
    if (s.kappa) require_positive(*s.kappa, "kappa");
    if (s.epsilon && s.kappa) throw ConfigError("keys 'epsilon' and 'kappa' are mutually exclusive");
    require_positive(s.omega_c, "omega_c");
    require_positive(s.dt, "dt");
    require_positive(s.t_max, "t_max");
    require_positive(s.max_lag, "max_lag");
    require_positive(s.lambda_min, "lambda_min");
    require_positive(s.lambda_max, "lambda_max");
    if (s.lambda_max < s.lambda_min) throw ConfigError("lambda_max must not be below lambda_min");
    if (s.lambda_points < 1) throw ConfigError("lambda_points must be at least 1");
    if (!(s.gamma >= 0.0)) throw ConfigError("key 'gamma' must be >= 0");
    if (!(s.pad_factor >= 2.0)) throw ConfigError("key 'pad_factor' must be at least 2");
    if (s.n_realizations < 2) throw ConfigError("key 'n_realizations' must be at least 2");
    if (s.stats_window < 1) throw ConfigError("key 'stats_window' must be at least 1");
    if (s.scheme == SchemeId::Constrained && s.gamma == 0.0)
        throw ConfigError("gamma = 0 is not allowed with scheme 'constrained': the hard cutoff makes K_etaeta vanish "
                          "above omega_c, so the bare spectral division is undefined");
    return s;
}

BathParams Settings::bath() const {
    if (!beta) throw ConfigError("missing required key 'beta'");
    return BathParams{*beta, omega_c};
}

Drive Settings::drive() const {
    if (kappa) return Drive::sweep(*kappa);
    return Drive::constant(epsilon.value_or(-1.0));
}

RunConfig Settings::run_config() const {
    RunConfig cfg;
    if (!scheme) throw ConfigError("missing required key 'scheme'");
    cfg.scheme = *scheme;
    cfg.gamma = gamma;
    cfg.lambda = lambda;
    cfg.bath = bath();
    cfg.model.delta = delta;
    cfg.model.epsilon = drive();
    cfg.model.alpha = alpha;
    cfg.model.t0 = t0;
    cfg.model.rho0 = SystemModel::spin_up();
    cfg.dt = dt;
    cfg.t_max = t_max;
    cfg.pad_factor = pad_factor;
    cfg.n_realizations = n_realizations;
    cfg.master_seed = seed;
    cfg.stats_window = stats_window;
    cfg.threads = threads;
    return cfg;
}

} // namespace sln::cli
