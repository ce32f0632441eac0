#include "lpplab/bands.hpp"
#include "lpplab/experiments.hpp"
#include "lpplab/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for planar last-passage growth"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    CLI::App* run = app.add_subcommand("run", "run an experiment described by a JSON config");
    run->add_option("config", config_path, "path to the config JSON file")->required();
    run->add_option("--threads", threads, "override the worker thread count");
    run->add_option("--out", out_dir, "override the output directory");

    std::string report_dir;
    CLI::App* rep = app.add_subcommand("report", "evaluate a completed run directory");
    rep->add_option("dir", report_dir, "run output directory")->required();

    CLI::App* lst = app.add_subcommand("list-experiments", "list available experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) {
            std::string text;
            try {
                text = lpplab::read_file(config_path);
            } catch (const std::exception& e) {
                throw lpplab::ConfigError(std::string("cannot read config: ") + e.what());
            }
            lpplab::Config cfg = lpplab::parse_config(text);
            lpplab::RunSummary s = lpplab::run_experiment(cfg, threads, out_dir);
            std::printf("experiment: %s\n", cfg.experiment.c_str());
            std::printf("units: %lld (ok %lld, censored %lld, errors %lld)\n",
                        s.units, s.ok, s.censored, s.errors);
            std::printf("output: %s\n", s.output_dir.c_str());
            if (s.failed) {
                std::fprintf(stderr, "error: more than %.0f%% of units failed\n",
                             100.0 * lpplab::bands::kErrorShareMax);
                return 3;
            }
            return 0;
        }
        if (rep->parsed()) {
            std::string text;
            int rc = lpplab::report_directory(report_dir, text);
            std::fputs(text.c_str(), stdout);
            return rc;
        }
        if (lst->parsed()) {
            for (const auto& info : lpplab::list_experiments()) {
                std::printf("%-20s %s\n", info.name.c_str(), info.summary.c_str());
                std::string keys;
                for (const auto& k : info.keys) keys += (keys.empty() ? "" : ", ") + k;
                std::printf("%-20s keys: %s\n", "", keys.empty() ? "(none)" : keys.c_str());
            }
            return 0;
        }
    } catch (const lpplab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 1;
}
