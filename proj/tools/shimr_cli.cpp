// Command-line runner: single runs, Monte-Carlo ensembles, and parameter
// sweeps, with all results written as CSV plus a sidecar meta file.
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shimr/ensemble.hpp"
#include "shimr/metrics.hpp"
#include "shimr/output.hpp"
#include "shimr/scenarios.hpp"

namespace fs = std::filesystem;
using namespace shimr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;
constexpr int kExitInternalError = 4;

struct FlagValues {
    std::optional<std::string> config_path;
    std::optional<std::string> scenario;
    std::optional<std::string> influencer_opinions;
    std::optional<std::string> deviation_norm;
    std::optional<int> agents, rounds, runs, rumor_rate;
    std::optional<std::uint64_t> seed;
    std::optional<double> eta, consensus, gamma, lambda, rho, beta_min, xi;
    int parallelism = 0;  // 0 = all hardware threads
    std::string out_dir = "out";
};

void add_common_options(CLI::App* cmd, FlagValues& f) {
    cmd->add_option("--config", f.config_path, "key=value config file; flags override it");
    cmd->add_option("--scenario", f.scenario,
                    "influencer preset (see the 'scenarios' command) or 'custom'");
    cmd->add_option("--influencer-opinions", f.influencer_opinions,
                    "comma list of fixed opinions for scenario=custom");
    cmd->add_option("--agents", f.agents, "number of agents N");
    cmd->add_option("--rounds", f.rounds, "rounds per run T");
    cmd->add_option("--runs", f.runs, "runs per Monte-Carlo ensemble R");
    cmd->add_option("--seed", f.seed, "64-bit master seed");
    cmd->add_option("--lambda", f.lambda, "influence factor");
    cmd->add_option("--rho", f.rho, "memory factor in (0,1)");
    cmd->add_option("--eta", f.eta, "crowd exponent");
    cmd->add_option("--consensus-threshold", f.consensus, "consensus threshold O");
    cmd->add_option("--gamma", f.gamma, "silence exponent");
    cmd->add_option("--beta-min", f.beta_min, "minimum decision chance");
    cmd->add_option("--xi", f.xi, "trend factor in (0,1]");
    cmd->add_option("--rumor-rate", f.rumor_rate, "rumors per influencer per round");
    cmd->add_option("--deviation-normalization", f.deviation_norm,
                    "stance-mean normalization: population|discussers");
    cmd->add_option("--parallelism", f.parallelism, "worker threads (0 = all cores)");
    cmd->add_option("--out", f.out_dir, "output directory");
}

// Defaults, then config file, then flags. Returns the violation list.
std::vector<std::string> build_config(const FlagValues& f, RunConfig& cfg) {
    std::vector<std::string> errors;
    cfg = RunConfig{};

    if (f.config_path) {
        for (const auto& [key, value] : parse_config_file(*f.config_path)) {
            auto entry_errors = apply_config_entry(cfg, key, value);
            errors.insert(errors.end(), entry_errors.begin(), entry_errors.end());
        }
    }

    auto apply = [&](const char* key, const std::string& value) {
        auto entry_errors = apply_config_entry(cfg, key, value);
        errors.insert(errors.end(), entry_errors.begin(), entry_errors.end());
    };
    if (f.scenario) cfg.scenario = *f.scenario;
    if (f.influencer_opinions) apply("influencer-opinions", *f.influencer_opinions);
    if (f.deviation_norm) apply("deviation-normalization", *f.deviation_norm);
    if (f.agents) cfg.agents = *f.agents;
    if (f.rounds) cfg.rounds = *f.rounds;
    if (f.runs) cfg.runs = *f.runs;
    if (f.rumor_rate) cfg.rumor_rate = *f.rumor_rate;
    if (f.seed) cfg.master_seed = *f.seed;
    if (f.lambda) cfg.params.lambda = *f.lambda;
    if (f.rho) cfg.params.rho = *f.rho;
    if (f.eta) cfg.params.eta = *f.eta;
    if (f.consensus) cfg.params.consensus = *f.consensus;
    if (f.gamma) cfg.params.gamma = *f.gamma;
    if (f.beta_min) cfg.params.beta_min = *f.beta_min;
    if (f.xi) cfg.params.xi = *f.xi;

    try {
        ScenarioSpec spec = resolve_scenario(cfg.scenario, cfg.influencer_opinions);
        cfg.influencer_opinions = spec.influencer_opinions;
    } catch (const std::invalid_argument& e) {
        errors.emplace_back(e.what());
    }

    auto config_errors = validate_config(cfg);
    errors.insert(errors.end(), config_errors.begin(), config_errors.end());
    return errors;
}

void write_run_files(const fs::path& dir, const RunResult& run) {
    std::string suffix = "_run" + std::to_string(run.run_index) + ".csv";
    write_timeseries(dir / ("timeseries" + suffix), run);
    write_final_opinions(dir / ("final_opinions" + suffix), run);
    write_final_weights(dir / ("final_weights" + suffix), run);
}

void write_ensemble_files(const fs::path& dir, const RunConfig& cfg,
                          const std::vector<RunResult>& results) {
    for (const RunResult& run : results) write_run_files(dir, run);

    EnsembleSummary summary = pooled_correlation(results);
    std::vector<double> weights = pooled_final_weights(results);
    std::vector<double> opinions = pooled_final_opinions(results);
    write_histogram_csv(dir / "hist_weights.csv", cfg, build_histogram(weights, 0.0, 1.0, 50));
    write_histogram_csv(dir / "hist_opinions.csv", cfg,
                        build_histogram(opinions, -1.0, 1.0, 50));
    write_summary_csv(dir / "summary.csv", cfg, summary);
}

int cmd_run(const FlagValues& flags) {
    RunConfig cfg;
    auto errors = build_config(flags, cfg);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
        return kExitConfigError;
    }
    RunResult result = run_simulation(cfg, 0);
    fs::path dir(flags.out_dir);
    fs::create_directories(dir);
    write_run_files(dir, result);
    write_meta(dir / "meta.txt", cfg, "run");
    std::cout << "run complete: " << cfg.rounds << " rounds, output in " << dir.string()
              << "\n";
    return kExitOk;
}

int cmd_montecarlo(const FlagValues& flags) {
    RunConfig cfg;
    auto errors = build_config(flags, cfg);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
        return kExitConfigError;
    }
    std::vector<RunResult> results = run_ensemble(cfg, flags.parallelism);
    fs::path dir(flags.out_dir);
    fs::create_directories(dir);
    write_ensemble_files(dir, cfg, results);
    write_meta(dir / "meta.txt", cfg, "montecarlo");

    EnsembleSummary summary = pooled_correlation(results);
    std::cout << "ensemble complete: " << cfg.runs << " runs, pooled r = "
              << (summary.pooled_r ? format_double(*summary.pooled_r) : "undefined")
              << ", output in " << dir.string() << "\n";
    return kExitOk;
}

struct SweepPoint {
    std::string label;  // directory fragment and table value
    RunConfig cfg;
};

std::string normalize_sweep_parameter(std::string name) {
    if (name == "O") return "consensus-threshold";
    if (name == "Gamma") return "gamma";
    for (char& c : name)
        if (c == '_') c = '-';
    return name;
}

int cmd_sweep(const FlagValues& flags, const std::string& parameter_raw,
              const std::vector<std::string>& values) {
    RunConfig base;
    auto errors = build_config(flags, base);
    const std::string parameter = normalize_sweep_parameter(parameter_raw);
    if (parameter != "eta" && parameter != "consensus-threshold" && parameter != "gamma" &&
        parameter != "scenario") {
        errors.push_back("unknown sweep parameter '" + parameter_raw +
                         "' (expected eta, O/consensus-threshold, Gamma/gamma, or scenario)");
    }
    if (values.empty()) errors.push_back("sweep requires at least one --values entry");

    std::vector<SweepPoint> points;
    for (const std::string& value : values) {
        RunConfig cfg = base;
        if (parameter == "scenario") {
            cfg.scenario = value;
            try {
                cfg.influencer_opinions =
                    resolve_scenario(value, cfg.influencer_opinions).influencer_opinions;
            } catch (const std::invalid_argument& e) {
                errors.emplace_back(e.what());
                continue;
            }
        } else {
            auto entry_errors = apply_config_entry(cfg, parameter, value);
            if (!entry_errors.empty()) {
                errors.insert(errors.end(), entry_errors.begin(), entry_errors.end());
                continue;
            }
        }
        auto point_errors = validate_config(cfg);
        errors.insert(errors.end(), point_errors.begin(), point_errors.end());
        points.push_back({value, cfg});
    }
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
        return kExitConfigError;
    }

    fs::path dir(flags.out_dir);
    fs::create_directories(dir);
    std::vector<SweepRow> rows;
    for (const SweepPoint& point : points) {
        std::vector<RunResult> results = run_ensemble(point.cfg, flags.parallelism);
        fs::path sub = dir / (parameter + "_" + point.label);
        fs::create_directories(sub);
        write_ensemble_files(sub, point.cfg, results);
        write_meta(sub / "meta.txt", point.cfg, "sweep point");
        rows.push_back({parameter, point.label, pooled_correlation(results)});
        std::cout << parameter << "=" << point.label << ": pooled r = "
                  << (rows.back().summary.pooled_r
                          ? format_double(*rows.back().summary.pooled_r)
                          : "undefined")
                  << "\n";
    }
    write_sweep_summary(dir / "sweep_summary.csv", base, rows);
    write_meta(dir / "meta.txt", base, "sweep " + parameter);
    return kExitOk;
}

int cmd_scenarios() {
    for (const ScenarioSpec& preset : scenario_presets()) {
        std::cout << preset.name << ":";
        for (double o : preset.influencer_opinions) std::cout << " " << format_double(o);
        std::cout << "\n";
    }
    std::cout << "custom: opinions taken from --influencer-opinions\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo simulator of successive rumor spreading and opinion "
                 "diffusion on an adaptive social network"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("shimr v") + kVersion);

    FlagValues run_flags, mc_flags, sweep_flags;
    std::string sweep_parameter;
    std::vector<std::string> sweep_values;

    CLI::App* run_cmd = app.add_subcommand("run", "execute a single run (run index 0)");
    add_common_options(run_cmd, run_flags);

    CLI::App* mc_cmd =
        app.add_subcommand("montecarlo", "execute an ensemble of independent runs");
    add_common_options(mc_cmd, mc_flags);

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "run one ensemble per value of a swept parameter");
    add_common_options(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--parameter", sweep_parameter,
                          "eta, O/consensus-threshold, Gamma/gamma, or scenario")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated value list")
        ->required()
        ->delimiter(',');

    CLI::App* scenarios_cmd =
        app.add_subcommand("scenarios", "list the named influencer presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_flags);
        if (mc_cmd->parsed()) return cmd_montecarlo(mc_flags);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, sweep_parameter, sweep_values);
        if (scenarios_cmd->parsed()) return cmd_scenarios();
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
    return kExitConfigError;
}
