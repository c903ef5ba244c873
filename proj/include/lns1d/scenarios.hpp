/// @file scenarios.hpp
/// @brief Initial-data library and single-run orchestration.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lns1d/core.hpp"
#include "lns1d/diagnostics.hpp"
#include "lns1d/errors.hpp"
#include "lns1d/stepper.hpp"

namespace lns1d {

enum class ScenarioKind { Trivial, Perturbed, RandomSmooth };

std::string_view to_string(ScenarioKind k);
/// Throws ValidationError for unknown names.
ScenarioKind scenario_kind_from_string(std::string_view name);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::Perturbed;
    std::string name; ///< free-form label; empty means the kind name

    // trivial / perturbed
    double c = 1.0;
    double amp = 0.1;
    std::vector<int> modes{1, 2};

    // random_smooth
    std::uint64_t seed = 42;
    std::pair<double, double> u_range{0.5, 1.5};
    std::pair<double, double> theta_range{0.5, 1.5};
    double v_amp = 0.1;

    int n = 128;
    double beta = 1.0;
    double alpha = 0.0;
    double t_hat_end = 15.0;
    double sample_every = 0.01;

    /// Throws ValidationError.
    void validate() const;
    PhysParams params() const;
    std::string label() const;
};

/// Smallest admissible value of u0 and theta0 produced by make_initial.
inline constexpr double kPositivityMargin = 1e-3;

/// Scaled state at t_hat = 0.
State make_initial(const ScenarioSpec& spec);

struct RunOptions {
    bool keep_history = false;             ///< store samples for the representation oracle
    std::size_t history_capacity = 10000;
    std::vector<double> snapshot_times;    ///< t_hat values at which full states are kept
    double decay_hi_fraction = 0.1;        ///< window opens below this fraction of h1(0)
    double decay_lo = 1e-10;               ///< and closes at this floor
};

/// Per-step extrema, gathered at every accepted step rather than at the sample cadence.
struct StepMonitor {
    double energy_drift_max = 0.0;  ///< max |E - E0| / E0
    double momentum_drift_max = 0.0; ///< max |int v - v0_mean|
    double theta_bar_min = std::numeric_limits<double>::infinity();
    double theta_bar_max = -std::numeric_limits<double>::infinity();
    long bracket_violations = 0;     ///< steps with theta_bar outside [alpha1, alpha2] +- 1e-6
    double psi_residual_integral = 0.0; ///< sum over steps of residual * dt
    double psi_residual_max = 0.0;
};

struct RunResult {
    ScenarioSpec spec;
    PhysParams params;
    SchemeConfig scheme;
    InitialDataSummary summary;
    State initial;
    State final_state;
    std::vector<DiagnosticsRecord> records;
    std::optional<DecayFit> decay;
    std::string decay_note; ///< why the fit is missing, if it is
    std::optional<BoundsReport> bounds;
    StepStats steps;
    StepMonitor monitor;
    History history;
    std::vector<State> snapshots;
};

/// Step failure with everything computed up to the failing step.
class RunFailure : public std::runtime_error {
public:
    RunFailure(const StepFailure& cause, RunResult partial);

    const StepFailure& cause() const noexcept { return cause_; }
    const RunResult& partial() const noexcept { return partial_; }

private:
    StepFailure cause_;
    RunResult partial_;
};

/// Integrates the scaled system from 0 to spec.t_hat_end, sampling records every
/// spec.sample_every (and at each snapshot time). Deterministic.
RunResult run(const ScenarioSpec& spec, const PhysParams& params, const SchemeConfig& cfg,
              const RunOptions& options = {});

inline RunResult run(const ScenarioSpec& spec, const SchemeConfig& cfg, const RunOptions& options = {}) {
    return run(spec, spec.params(), cfg, options);
}

} // namespace lns1d
