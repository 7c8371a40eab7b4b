// genlab: run, validate and summarize generalization-laboratory experiments.
//
// Exit codes: 0 ok, 1 experiment assertion failed, 2 config / usage error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "genlab/errors.hpp"
#include "genlab/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kConfigError = 2;

struct CommonFlags {
    std::int64_t seed = -1;  // -1: keep the config's seed
    std::size_t threads = 0;
    bool deterministic = false;
};

void apply_flags(genlab::ExperimentConfig& cfg, const CommonFlags& f) {
    if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
    if (f.threads > 0) cfg.threads = f.threads;
    if (f.deterministic) {
        cfg.deterministic = true;
        cfg.threads = 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalization laboratory experiment runner"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string config_path, report_dir;

    CLI::App* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--seed", flags.seed, "override the config seed");
    run->add_option("--threads", flags.threads, "worker threads (sweeps are keyed, so "
                                                "output order never depends on this)");
    run->add_flag("--deterministic", flags.deterministic,
                  "force single-threaded canonical execution");

    CLI::App* validate =
        app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "experiment config (JSON)")->required();

    CLI::App* report = app.add_subcommand("report", "summarize a finished output directory");
    report->add_option("dir", report_dir, "experiment output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (run->parsed()) {
            genlab::ExperimentConfig cfg = genlab::load_experiment_config(config_path);
            apply_flags(cfg, flags);
            const genlab::RunResult res = genlab::run_experiment(cfg);
            std::cout << "wrote " << res.out_dir << " (" << res.artifacts.size()
                      << " artifacts, config " << genlab::config_hash(cfg) << ")\n";
            if (!res.assertions_passed) {
                for (const auto& f : res.failed_assertions)
                    std::cerr << "assertion failed: " << f << "\n";
                return kAssertionFailed;
            }
            return kOk;
        }
        if (validate->parsed()) {
            genlab::ExperimentConfig cfg = genlab::load_experiment_config(config_path);
            std::cout << "ok: kind=" << cfg.kind << " seed=" << cfg.seed << " hash="
                      << genlab::config_hash(cfg) << "\n";
            return kOk;
        }
        std::cout << genlab::summarize_directory(report_dir);
        return kOk;
    } catch (const genlab::InvalidInput& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const genlab::FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAssertionFailed;
    }
}
