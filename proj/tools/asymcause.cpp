// Command-line driver: data fetching, the individual pipeline stages, the full
// study, and the Monte Carlo harness.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "asymcause/asymcause.hpp"

namespace {

using namespace asymcause;

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_data = 3;
constexpr int exit_numerical = 4;

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::config: return exit_config;
        case ErrorCategory::data: return exit_data;
        default: return exit_numerical;
    }
}

/// Flags shared by the pipeline subcommands; unset ones leave config values alone.
struct PipelineFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<int> lmax;
    std::optional<std::string> window;
    std::optional<std::string> format;
    std::optional<std::string> snapshot_dir;
    bool refresh = false;
    std::optional<unsigned> jobs;
    std::string output;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Key = value config file")->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed, "Master seed for every random quantity");
        cmd->add_option("--reps", reps, "Bootstrap replications");
        cmd->add_option("--lmax", lmax, "Largest lag order considered by HJC");
        cmd->add_option("--window", window, "Sample window, e.g. 1960Q1:2020Q1");
        cmd->add_option("--format", format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
        cmd->add_option("--snapshot-dir", snapshot_dir, "Directory of cached series (FRED snapshot)");
        cmd->add_flag("--refresh", refresh, "Re-download remote series even when cached");
        cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
        cmd->add_option("--output", output, "Write here instead of stdout (a directory for csv)");
    }

    StudyConfig build() const {
        StudyConfig config;
        if (!config_path.empty()) apply_config_file(config, config_path);
        if (seed) config.bootstrap.seed = *seed;
        if (reps) config.bootstrap.replications = *reps;
        if (lmax) config.l_max = *lmax;
        if (window) config.window = StudyWindow::parse(*window);
        if (format) config.format = parse_output_format(*format);
        if (snapshot_dir) config.snapshot_dir = *snapshot_dir;
        if (refresh) config.refresh = true;
        if (jobs) config.bootstrap.parallelism = *jobs;
        return config;
    }
};

void write_output(const StudyReport& report, OutputFormat format, const std::string& output) {
    if (output.empty()) {
        std::cout << render(report, format);
        return;
    }
    if (format == OutputFormat::csv) {
        std::filesystem::create_directories(output);
        for (const auto& [name, doc] : render_csv(report)) {
            std::ofstream(std::filesystem::path(output) / name, std::ios::binary) << doc;
        }
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw DataError("cannot write '" + output + "'");
    out << render(report, format);
}

int run_pipeline(const PipelineFlags& flags, StudyParts parts) {
    const StudyConfig config = flags.build();
    const StudyReport report = run_study(config, parts);
    write_output(report, config.format, flags.output);
    for (const auto& row : report.causality)
        if (!row.warning.empty()) std::cerr << "warning: " << row.result.direction_label << ": " << row.warning << "\n";
    return exit_ok;
}

struct SimulateFlags {
    std::string experiment = "wald-size";
    int reps = 0;
    int inner = 400;
    long length = 0;
    int lmax = 8;
    std::uint64_t seed = 1;
    unsigned jobs = 0;
    std::string format = "text";
};

int run_simulate(const SimulateFlags& f) {
    using namespace asymcause::monte_carlo;
    nlohmann::json out{{"experiment", f.experiment}, {"seed", f.seed}};
    if (f.experiment == "wald-size") {
        WaldSizeExperiment e;
        e.replications = f.reps > 0 ? f.reps : e.replications;
        e.length = f.length > 0 ? f.length : e.length;
        e.seed = f.seed;
        e.jobs = f.jobs;
        const auto r = e.run();
        out.update({{"replications", r.replications}, {"failed", r.failed}, {"asymptotic_rejection_5", r.asymptotic}});
    } else if (f.experiment == "bootstrap-size") {
        BootstrapSizeExperiment e;
        e.outer_replications = f.reps > 0 ? f.reps : e.outer_replications;
        e.inner_replications = f.inner;
        e.length = f.length > 0 ? f.length : e.length;
        e.seed = f.seed;
        e.jobs = f.jobs;
        const auto r = e.run();
        out.update({{"replications", r.replications},
                    {"failed", r.failed},
                    {"asymptotic_rejection_5", r.asymptotic},
                    {"bootstrap_rejection_5", r.bootstrap}});
    } else if (f.experiment == "hjc-lag") {
        HjcExperiment e;
        e.replications = f.reps > 0 ? f.reps : e.replications;
        e.length = f.length > 0 ? f.length : e.length;
        e.l_max = f.lmax;
        e.seed = f.seed;
        e.jobs = f.jobs;
        const auto r = e.run();
        out.update({{"replications", r.replications}, {"lag_counts", r.counts}});
    } else {
        throw ConfigError("unknown experiment '" + f.experiment + "'");
    }

    if (f.format == "json") {
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& [key, value] : out.items()) std::cout << key << ": " << value.dump() << "\n";
    }
    return exit_ok;
}

struct FetchFlags {
    std::vector<std::string> codes{"GDPC1", "SPASTT01USQ661N"};
    std::optional<std::string> snapshot_dir;
    std::string base_url = default_fred_base_url;
    std::optional<std::string> window;
    bool refresh = false;
};

int run_fetch(const FetchFlags& f) {
    FetchOptions options;
    if (f.snapshot_dir) options.cache_dir = *f.snapshot_dir;
    options.base_url = f.base_url;
    options.refresh = f.refresh;
    for (const auto& code : f.codes) {
        auto result = fetch_fred(fred_source(code), options);
        if (f.window) {
            const auto w = StudyWindow::parse(*f.window);
            result.series = result.series.clipped(w.start, w.end);
        }
        const auto& s = result.series;
        std::cout << code << ": " << s.size() << " observations " << s.dates().front().to_string() << ".."
                  << s.dates().back().to_string() << (result.from_cache ? " (cache)" : " (downloaded)")
                  << " sha256=" << result.sha256 << "\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymmetric Granger causality tests with leveraged bootstrap critical values"};
    app.set_version_flag("--version", std::string(asymcause::version));
    app.require_subcommand(1);

    FetchFlags fetch_flags;
    auto* fetch = app.add_subcommand("fetch", "Download FRED series into the snapshot/cache directory");
    fetch->add_option("codes", fetch_flags.codes, "FRED series codes");
    fetch->add_option("--snapshot-dir", fetch_flags.snapshot_dir, "Cache directory");
    fetch->add_option("--base-url", fetch_flags.base_url, "FRED base URL");
    fetch->add_option("--window", fetch_flags.window, "Only report this window");
    fetch->add_flag("--refresh", fetch_flags.refresh, "Ignore existing cache entries");

    PipelineFlags unit_flags, diag_flags, causality_flags, study_flags;
    auto* unit_root = app.add_subcommand("unit-root", "Ng-Perron MZa on all six series");
    auto* diagnose = app.add_subcommand("diagnose", "Multivariate normality and ARCH tests per VAR");
    auto* causality = app.add_subcommand("causality", "Wald tests with bootstrap critical values");
    auto* study = app.add_subcommand("study", "Full pipeline: unit roots, diagnostics, causality");
    unit_flags.attach(unit_root);
    diag_flags.attach(diagnose);
    causality_flags.attach(causality);
    study_flags.attach(study);

    SimulateFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo size and lag-selection experiments");
    simulate->add_option("--experiment", sim_flags.experiment, "wald-size | bootstrap-size | hjc-lag")
        ->check(CLI::IsMember({"wald-size", "bootstrap-size", "hjc-lag"}));
    simulate->add_option("--reps", sim_flags.reps, "(Outer) replications");
    simulate->add_option("--inner", sim_flags.inner, "Bootstrap replications per outer draw");
    simulate->add_option("--length", sim_flags.length, "Sample length");
    simulate->add_option("--lmax", sim_flags.lmax, "Largest lag for hjc-lag");
    simulate->add_option("--seed", sim_flags.seed, "Master seed");
    simulate->add_option("--jobs", sim_flags.jobs, "Worker threads (0 = all cores)");
    simulate->add_option("--format", sim_flags.format, "text | json")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*fetch) return run_fetch(fetch_flags);
        if (*unit_root) return run_pipeline(unit_flags, {true, false, false});
        if (*diagnose) return run_pipeline(diag_flags, {false, true, false});
        if (*causality) return run_pipeline(causality_flags, {false, false, true});
        if (*study) return run_pipeline(study_flags, {});
        if (*simulate) return run_simulate(sim_flags);
    } catch (const asymcause::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_ok;
}
