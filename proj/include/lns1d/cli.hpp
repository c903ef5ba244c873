/// @file cli.hpp
/// @brief Configuration files and the simulate / verify / convergence commands.
///
/// Config files are flat `key = value` lines; `#` starts a comment. Keys carry a section
/// prefix (scenario., params., scheme., output., verify., convergence.) and are checked
/// against a closed schema. The full key list is in the README.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lns1d/scenarios.hpp"
#include "lns1d/stepper.hpp"
#include "lns1d/verify.hpp"

namespace lns1d {

/// Exit codes; nothing else is ever returned.
enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitStepFailure = 3 };

struct RunConfig {
    ScenarioSpec scenario;
    PhysParams params;
    SchemeConfig scheme;

    std::filesystem::path out_dir = "lns1d_out";
    std::vector<double> snapshot_times{0.0, 1.0, 5.0, 15.0};
    bool original_time = false;

    std::vector<double> verify_betas{0.5, 1.0, 2.0};
    std::vector<int> verify_ladder{32, 64, 128, 256};
    double verify_ladder_t_hat = 1.0;
    double verify_cross_t = 1.0;

    std::vector<LadderStep> convergence_levels; ///< empty: proportional ladder on 32..256
    double convergence_t_hat = 1.0;
};

/// Every recognized key, in documentation order.
const std::vector<std::string>& config_keys();

/// Applies one `key=value` assignment. Throws ValidationError on unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parses a config text (the file contents). Throws ValidationError with a line number.
void apply_config_text(RunConfig& cfg, const std::string& text);

/// Defaults, then the file (if any), then `key=value` overrides, then LNS1D_OUT_DIR.
/// Throws ValidationError (missing file, schema violation).
RunConfig load_config(const std::optional<std::filesystem::path>& path, const std::vector<std::string>& overrides);

struct CommandOptions {
    int jobs = 1;
    bool original_time = false;
};

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opts);
int cmd_verify(const RunConfig& cfg, const CommandOptions& opts);
int cmd_convergence(const RunConfig& cfg, const CommandOptions& opts);

/// Full command line: `lns1d simulate|verify|convergence [--config PATH] [--set k=v]... [--jobs N]
/// [--original-time]`.
int cli_main(int argc, char** argv);

} // namespace lns1d
