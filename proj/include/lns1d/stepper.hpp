/// @file stepper.hpp
/// @brief Time integration with positivity-aware step control.
///
/// One step is the trapezoidal rule applied to the semi-discrete system, solved by Picard
/// sweeps. Each sweep performs two tridiagonal solves:
///   - momentum, with the viscous operator implicit in the new velocity and theta, u lagged;
///   - temperature, with conduction implicit (kappa lagged) and the pressure-work term
///     -theta v_x/u implicit in theta, while v_x^2/u uses the freshly solved velocity.
/// The volume update between the two solves is explicit in the current velocity iterate.
/// Once the sweeps converge the step is second order in time, and the discrete energy
/// error per step is O(dt^3).
#pragma once

#include <functional>
#include <limits>

#include "lns1d/core.hpp"

namespace lns1d {

struct SchemeConfig {
    double dt_init = 1e-6;
    double dt_max = 1e-3;
    double dt_min = 1e-12;
    double safety = 0.997; ///< after an easy step dt grows by 1/safety
    int picard_max = 30;
    double picard_tol = 1e-12;
    double positivity_floor = 1e-10;

    void validate() const;
};

struct StepReport {
    double dt = 0.0;
    int picard_iterations = 0;
    int rejections = 0;
    double u_min = 0.0;
    double theta_min = 0.0;
    double dt_next = 0.0; ///< controller suggestion for the following step
};

struct StepResult {
    State state;
    StepReport report;
};

/// Advances one step in the state's own formulation, trying `dt_trial` first and halving on
/// rejection. Throws StepFailure once the trial step would drop below cfg.dt_min.
StepResult step(const State& s, const PhysParams& params, const SchemeConfig& cfg, double dt_trial);

StepResult step_scaled(const State& s, const PhysParams& params, const SchemeConfig& cfg,
                       double dt_trial = std::numeric_limits<double>::quiet_NaN());

StepResult step_original(const State& s, const PhysParams& params, const SchemeConfig& cfg,
                         double dt_trial = std::numeric_limits<double>::quiet_NaN());

/// Running totals over the steps taken by an Integrator.
struct StepStats {
    long steps = 0;
    long rejections = 0;
    long picard_iterations = 0;
    int max_picard = 0;
    double dt_smallest = std::numeric_limits<double>::infinity();
    double dt_largest = 0.0;
    double u_min = std::numeric_limits<double>::infinity();
    double theta_min = std::numeric_limits<double>::infinity();
};

/// Repeated stepping with a persistent step-size suggestion. Targets are hit exactly: the
/// last step before a target is shortened without disturbing the controller's nominal dt.
class Integrator {
public:
    using StepCallback = std::function<void(const State& before, const State& after, const StepReport&)>;

    Integrator(PhysParams params, SchemeConfig cfg);

    void advance_to(State& s, double t_target, const StepCallback& on_step = {});

    double nominal_dt() const noexcept { return dt_; }
    const StepStats& stats() const noexcept { return stats_; }
    const PhysParams& params() const noexcept { return params_; }
    const SchemeConfig& config() const noexcept { return cfg_; }

private:
    PhysParams params_;
    SchemeConfig cfg_;
    double dt_;
    StepStats stats_;
};

} // namespace lns1d
