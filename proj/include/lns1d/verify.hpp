/// @file verify.hpp
/// @brief The acceptance suite: thirteen numbered checks over a scenario set.
///
/// Checks 3-11 run on every configured scenario; refinement comparisons (3, 8, 11) and the
/// cross-formulation and grid-ladder checks (12, 13) use the first scenario's data.
#pragma once

#include <string>
#include <vector>

#include "lns1d/scenarios.hpp"
#include "lns1d/stepper.hpp"

namespace lns1d {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double value = 0.0;  ///< worst measured quantity
    double limit = 0.0;
    bool upper = true;   ///< pass means value <= limit (otherwise value >= limit)
    std::string detail;

    double margin() const noexcept { return upper ? limit - value : value - limit; }
};

struct VerifySuite {
    std::vector<ScenarioSpec> scenarios;
    SchemeConfig scheme;
    bool conduction = true; ///< false injects a fault (conduction dropped)
    int jobs = 1;
    std::vector<int> ladder{32, 64, 128, 256}; ///< dt_max scales with 1/n from the first level
    double ladder_t_hat = 1.0;
    double cross_t = 1.0; ///< horizon of the cross-formulation comparison
};

/// perturbed(1, 0.1, {1,2}) at beta in {0.5, 1, 2}, n = 128, t_hat_end = 15.
std::vector<ScenarioSpec> default_scenarios();

/// Scheme with the whole step sequence refined: dt_init/2, dt_max/2, sqrt(safety).
SchemeConfig refined(const SchemeConfig& cfg);

std::vector<CheckResult> run_verification(const VerifySuite& suite);

/// Max-norm difference over u, velocity and theta. Throws StructuralError on shape mismatch.
double state_distance(const State& a, const State& b);

struct LadderLevel {
    int n = 0;
    double dt = 0.0;
    double error = 0.0; ///< interior max-norm against the finest level, restricted to this grid
    double order = 0.0; ///< log2(error / next error); NaN when indeterminate
};

struct LadderStep {
    int n = 0;
    double dt = 0.0; ///< dt_max on this level
};

/// Levels with dt_max = cfg.dt_max * n0/n, n0 the first entry.
std::vector<LadderStep> proportional_ladder(const std::vector<int>& ns, const SchemeConfig& cfg);

/// Runs `spec` to t_hat on each (n, dt) level, then compares every level with the last
/// (finest) one restricted to its grid: cells by averaging, nodes by injection, max-norm
/// over x in [1/8, 7/8]. Errors below 1e-10 (accumulated round-off) mark the order as indeterminate (NaN).
/// Needs at least 3 levels, each n dividing the finest.
std::vector<LadderLevel> grid_ladder(const ScenarioSpec& spec, const PhysParams& params, const SchemeConfig& cfg,
                                     const std::vector<LadderStep>& levels, double t_hat, int jobs = 1);

} // namespace lns1d
