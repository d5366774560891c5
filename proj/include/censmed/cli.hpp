#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "censmed/io.hpp"
#include "censmed/mediation.hpp"

namespace censmed {

enum class RunMode { Simulate, Estimate, Bootstrap, Oracle };

enum class DesignChoice { Auto, Shift, TwoArm };

/// Fully resolved run settings. Built from defaults, then the config file,
/// then command-line overrides, in that order.
struct RunConfig {
    RunMode mode = RunMode::Estimate;
    std::filesystem::path input_path;
    std::filesystem::path output_path;
    std::uint64_t seed = 1;
    std::vector<Method> methods;
    std::vector<double> xis;
    double assay_limit = 1.96;
    DesignChoice design = DesignChoice::Auto;

    int bootstrap_B = 1000;
    double level = 0.95;
    bool stratified = true;
    int threads = 0;

    // Scenario parameters for simulate / oracle.
    std::vector<int> sample_sizes;
    int n_reps = 200;
    double p_c = 0.5;
    Theta params;

    // Per-method tuning shared by all methods of the run.
    MethodSpec method_template;

    /// Every key with its final textual value, for the manifest.
    std::map<std::string, std::string> resolved;
};

/// Keys accepted in config files and by --set.
const std::vector<std::string>& config_keys();

/// Applies entries over the defaults and validates per-mode requirements.
/// Unknown keys and malformed values raise ConfigError naming the source
/// and line of the offending entry.
RunConfig resolve_config(const std::vector<ConfigEntry>& entries);

/// Runs one mode, writing results to config.output_path (stdout when empty).
/// Returns the process exit code; failures print a single
/// `error: <Kind>: <message>` line to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Library version string, also written to the manifest.
std::string version();

}  // namespace censmed
