#include "commands.hpp"

#include "csv.hpp"

#include <slnoise/slnoise.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

namespace sln::cli {
namespace {

std::string flag_name(const std::string& key) {
    std::string s = key;
    std::replace(s.begin(), s.end(), '_', '-');
    return "--" + s;
}

// Flag values collected per subcommand; only flags actually given override the file.
struct FlagSet {
    std::string config_path;
    std::map<std::string, std::string> values;
    bool analytic{false};
};

void add_key_flags(CLI::App* sub, FlagSet& flags) {
    sub->add_option("-c,--config", flags.config_path, "flat key=value config file");
    for (const auto& key : known_keys()) {
        std::string names = flag_name(key);
        if (key == "n_realizations") names += ",--n";
        sub->add_option(names, flags.values[key], "overrides '" + key + "'");
    }
}

RawConfig collect(const CLI::App* sub, const FlagSet& flags) {
    RawConfig raw;
    if (!flags.config_path.empty()) raw = load_config_file(flags.config_path);
    RawConfig given;
    for (const auto& key : known_keys()) {
        if (sub->get_option(flag_name(key))->count() > 0) given[key] = flags.values.at(key);
    }
    return merge(std::move(raw), given);
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
    if (n == 1) return {lo};
    std::vector<double> out(n);
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

} // namespace

void cmd_kernels(const Settings& s, bool analytic, std::ostream& out) {
    const BathParams bath = s.bath();
    const FrequencyGrid grid = TimeGrid::make(s.dt, s.t_max, s.pad_factor).frequency_grid();
    CsvWriter csv(out, {"omega", "k_etaeta", "re_k_etanu", "im_k_etanu"});
    std::optional<KernelTable> table;
    if (!analytic) table = build_kernel_table(grid, bath);
    const std::size_t n = grid.n;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = (i + n / 2 + 1) % n; // ascending frequency
        const double w = grid.omega(k);
        csv.field(w);
        if (table) {
            csv.field(table->k_etaeta_w[k]).field(table->k_etanu_w[k].real()).field(table->k_etanu_w[k].imag());
        } else {
            csv.field(k_etaeta_freq(w, bath));
            try {
                const cplx v = k_etanu_freq(w, bath);
                csv.field(v.real()).field(v.imag());
            } catch (const SingularPoint&) {
                csv.field(std::nan("")).field(std::nan(""));
            }
        }
        csv.end_row();
    }
}

void cmd_gen_noise(const Settings& s, std::ostream& out) {
    const TimeGrid grid = TimeGrid::make(s.dt, s.t_max, s.pad_factor);
    const KernelTable table = build_kernel_table(grid.frequency_grid(), s.bath());
    const FilterSet fs = make_filters(*s.scheme, table, s.gamma);
    CsvWriter csv(out, {"realization", "t", "re_eta", "im_eta", "re_nu", "im_nu"});
    for (std::size_t r = 0; r < s.n_realizations; ++r) {
        const NoisePair p = synthesize(fs, grid, seed_for(s.seed, r), s.lambda);
        for (std::size_t j = 0; j < p.eta.size(); ++j) {
            csv.field(r).field(grid.dt * static_cast<double>(j));
            csv.field(p.eta[j].real()).field(p.eta[j].imag()).field(p.nu[j].real()).field(p.nu[j].imag());
            csv.end_row();
        }
    }
}

void cmd_validate(const Settings& s, std::ostream& out) {
    const BathParams bath = s.bath();
    const TimeGrid grid = TimeGrid::make(s.dt, s.t_max, s.pad_factor);
    const KernelTable table = build_kernel_table(grid.frequency_grid(), bath);
    const FilterSet fs = make_filters(*s.scheme, table, s.gamma);
    std::vector<NoisePair> pairs;
    pairs.reserve(s.n_realizations);
    for (std::size_t r = 0; r < s.n_realizations; ++r) pairs.push_back(synthesize(fs, grid, seed_for(s.seed, r), s.lambda));
    const CorrelationEstimate est = estimate_correlations(pairs, s.max_lag);

    CsvWriter csv(out, {"series", "lag", "re_target", "im_target", "re_est", "im_est", "se_re", "se_im"});
    auto row = [&](std::string_view series, double lag, cplx target, cplx value, cplx se) {
        csv.field(series).field(lag).field(target.real()).field(target.imag());
        csv.field(value.real()).field(value.imag()).field(se.real()).field(se.imag());
        csv.end_row();
    };
    const auto L = static_cast<long>(est.max_lag);
    for (long l = 0; l <= L; ++l) {
        const double tau = est.lag_time(l);
        row("etaeta", tau, kernel_time(tau, bath, KernelKind::EtaEta), est.etaeta[l], est.se_etaeta[l]);
    }
    for (long l = -L; l <= L; ++l) {
        const double tau = est.lag_time(l);
        row("etanu", tau, kernel_time(tau, bath, KernelKind::EtaNu), est.etanu[l + L], est.se_etanu[l + L]);
    }
    for (long l = 0; l <= L; ++l) row("nunu", est.lag_time(l), cplx{}, est.nunu[l], est.se_nunu[l]);
}

void cmd_simulate(const Settings& s, std::ostream& out) {
    const EnsembleStats st = run_ensemble(s.run_config());
    CsvWriter csv(out, {"t", "re_mean_tr", "im_mean_tr", "abs_mean_tr", "var_tr", "se_tr", "mean_sx", "mean_sy",
                        "mean_sz", "diverged"});
    for (std::size_t j = 0; j < st.size(); ++j) {
        csv.field(st.t[j]).field(st.mean_tr[j].real()).field(st.mean_tr[j].imag()).field(st.abs_mean_tr[j]);
        csv.field(st.var_tr[j]).field(st.se_tr[j]);
        csv.field(st.mean_sx[j].real()).field(st.mean_sy[j].real()).field(st.mean_sz[j].real());
        csv.field(st.diverged[j]);
        csv.end_row();
    }
}

void cmd_qnd_verify(const Settings& s, std::ostream& out) {
    RunConfig cfg;
    cfg.scheme = s.scheme.value_or(SchemeId::EtaNuOptimised);
    cfg.gamma = s.gamma;
    cfg.lambda = s.lambda;
    cfg.bath = CustomKernel(qnd::kernel);
    cfg.dt = s.dt;
    cfg.t_max = s.t_max;
    cfg.pad_factor = s.pad_factor;
    cfg.n_realizations = s.n_realizations;
    cfg.master_seed = s.seed;
    cfg.stats_window = s.stats_window;
    cfg.threads = s.threads;
    cfg.model = qnd::sln_config(cfg.noise_grid().frequency_grid()).model;
    const EnsembleStats st = run_ensemble(cfg);

    CsvWriter csv(out, {"t", "re_rho01_exact", "re_rho01_sln", "im_rho01_exact", "im_rho01_sln", "se"});
    for (std::size_t j = 0; j < st.size(); ++j) {
        const cplx exact = qnd::exact(st.t[j] - cfg.model.t0)(0, 1);
        csv.field(st.t[j]).field(exact.real()).field(st.mean_rho01[j].real());
        csv.field(exact.imag()).field(st.mean_rho01[j].imag()).field(std::abs(st.se_rho01[j]));
        csv.end_row();
    }
}

void cmd_scan_lambda(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto lambdas = log_space(s.lambda_min, s.lambda_max, s.lambda_points);
    const LambdaScan scan = scan_lambda(s.run_config(), lambdas, s.n_realizations);
    CsvWriter csv(out, {"lambda", "se_final"});
    for (std::size_t i = 0; i < scan.lambdas.size(); ++i) {
        csv.field(scan.lambdas[i]).field(scan.se_final[i]);
        csv.end_row();
    }
    err << "argmin lambda = " << format_number(scan.argmin) << '\n';
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coloured-noise generation and stochastic Liouville-von Neumann dynamics"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* app;
        FlagSet flags;
        Requirements req;
        RawConfig defaults;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    auto add = [&](const char* name, const char* help, Requirements req, RawConfig defaults = {}) {
        auto sub = std::make_unique<Sub>();
        sub->app = app.add_subcommand(name, help);
        sub->req = req;
        sub->defaults = std::move(defaults);
        add_key_flags(sub->app, sub->flags);
        subs.push_back(std::move(sub));
        return subs.back().get();
    };
    Sub* kernels = add("kernels", "kernel table CSV: omega,k_etaeta,re_k_etanu,im_k_etanu", {false, true});
    kernels->app->add_flag("--analytic", kernels->flags.analytic, "evaluate the closed forms instead of the DFT table");
    Sub* gen = add("gen-noise", "noise realizations CSV", {true, true});
    Sub* validate = add("validate", "empirical vs target correlations CSV", {true, true});
    Sub* simulate = add("simulate", "ensemble trace statistics CSV", {true, true});
    Sub* qnd = add("qnd-verify", "exact dephasing solution vs SLN ensemble", {false, false},
                   {{"scheme", "etanu-optimised"}, {"lambda", "0.5"}, {"t_max", "4"}});
    Sub* scan = add("scan-lambda", "standard error of the final trace against lambda", {true, true});

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        for (const auto& sub : subs) {
            if (!sub->app->parsed()) continue;
            const Settings s = interpret(merge(sub->defaults, collect(sub->app, sub->flags)), sub->req);
            std::ofstream file;
            std::ostream* sink = &out;
            if (s.output) {
                file.open(*s.output, std::ios::binary);
                if (!file) throw ConfigError("cannot open output file '" + *s.output + "'");
                sink = &file;
            }
            if (sub.get() == kernels) cmd_kernels(s, kernels->flags.analytic, *sink);
            else if (sub.get() == gen) cmd_gen_noise(s, *sink);
            else if (sub.get() == validate) cmd_validate(s, *sink);
            else if (sub.get() == simulate) cmd_simulate(s, *sink);
            else if (sub.get() == qnd) cmd_qnd_verify(s, *sink);
            else if (sub.get() == scan) cmd_scan_lambda(s, *sink, err);
            sink->flush();
            if (!*sink) throw std::runtime_error("failed writing output");
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kOk;
}

} // namespace sln::cli
