#pragma once

#include "lpplab/common.hpp"
#include "lpplab/io.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace lpplab {

inline constexpr const char* kVersion = "0.1.0";

struct ConfigError : Error {
    using Error::Error;
};

// Parsed experiment configuration.  The JSON document is a single object;
// unknown keys are rejected against the experiment's whitelist.  Extra
// per-experiment keys stay in `extras` and are read through the typed
// getters with pinned defaults.
struct Config {
    std::string experiment;
    long long replicas = 0;
    std::uint64_t master_seed = 0;
    int threads = 1;
    std::string output_dir; // empty = resolve from env/cwd at run time
    std::vector<long long> n_list;
    nlohmann::json raw;    // original document, echoed in the manifest
    nlohmann::json extras; // experiment-specific keys

    double num(const std::string& key, double fallback) const;
    long long inum(const std::string& key, long long fallback) const;
    std::vector<double> nums(const std::string& key, std::vector<double> fallback) const;
    // n_list if configured, otherwise the experiment's default.
    std::vector<long long> ns_or(std::vector<long long> fallback) const;
};

Config parse_config(const std::string& json_text);

// Outcome of one unit of work (usually one replica).
struct WorkResult {
    long long unit = 0;
    std::string status = "ok"; // ok | censored:<why> | error:<what>
    std::vector<ResultRow> rows;
};

struct RunSummary {
    long long units = 0, ok = 0, censored = 0, errors = 0;
    bool failed = false; // error share above bands::kErrorShareMax
    std::string output_dir;
};

// Runs the configured experiment with a deterministic replica pool and
// writes results.csv, fits.json and (last) manifest.json into the output
// directory.  Thread count never changes the bytes of results.csv/fits.json.
RunSummary run_experiment(const Config& cfg, int threads_override = 0,
                          const std::string& output_dir_override = "");

// One acceptance check derived from a fits.json document.
struct CheckRow {
    std::string label;
    std::string target;
    std::string fitted;
    std::string detail;
    bool pass = false;
};

std::vector<CheckRow> evaluate_fits(const std::string& experiment, const nlohmann::json& fits);

struct ExperimentInfo {
    std::string name;
    std::string summary;
    std::vector<std::string> keys; // recognized extra config keys
};
std::vector<ExperimentInfo> list_experiments();

// Renders the report for a completed run directory.  Returns 0 when all
// checks pass, 2 when a check fails, 3 when required files are missing.
int report_directory(const std::string& dir, std::string& out_text);

} // namespace lpplab
