#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lns1d/cli.hpp"
#include "lns1d/errors.hpp"

namespace lns1d {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// JSON has no NaN/inf; they are written as null.
json num(double x) {
    return std::isfinite(x) ? json(x) : json(nullptr);
}

std::string csv_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << text;
}

void write_json(const fs::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

json to_json(const ScenarioSpec& s) {
    return {{"kind", std::string(to_string(s.kind))},
            {"name", s.label()},
            {"c", s.c},
            {"amp", s.amp},
            {"modes", s.modes},
            {"seed", s.seed},
            {"u_range", {s.u_range.first, s.u_range.second}},
            {"theta_range", {s.theta_range.first, s.theta_range.second}},
            {"v_amp", s.v_amp},
            {"n", s.n},
            {"beta", s.beta},
            {"alpha", s.alpha},
            {"t_hat_end", s.t_hat_end},
            {"sample_every", s.sample_every}};
}

json to_json(const SchemeConfig& c) {
    return {{"dt_init", c.dt_init},       {"dt_max", c.dt_max},         {"dt_min", c.dt_min},
            {"safety", c.safety},         {"picard_max", c.picard_max}, {"picard_tol", c.picard_tol},
            {"positivity_floor", c.positivity_floor}};
}

json to_json(const PhysParams& p) {
    return {{"beta", p.beta}, {"alpha", p.alpha}, {"conduction", p.conduction}};
}

json to_json(const InitialDataSummary& s) {
    return {{"E0", num(s.E0)}, {"v0_mean", num(s.v0_mean)}, {"A", num(s.A)},
            {"e0", num(s.e0)}, {"alpha1", num(s.alpha1)},   {"alpha2", num(s.alpha2)}};
}

json summary_json(const RunResult& r, const StepFailure* failure) {
    json j;
    j["status"] = failure ? "step_failure" : "completed";
    j["scenario"] = to_json(r.spec);
    j["params"] = to_json(r.params);
    j["scheme"] = to_json(r.scheme);
    j["initial"] = to_json(r.summary);
    if (r.decay) {
        j["decay_fit"] = {{"t_start", num(r.decay->t_start)},       {"t_end", num(r.decay->t_end)},
                          {"lambda_hat", num(r.decay->lambda_hat)}, {"intercept", num(r.decay->intercept)},
                          {"r_squared", num(r.decay->r_squared)},   {"points", r.decay->points}};
    } else {
        j["decay_fit"] = nullptr;
    }
    j["decay_note"] = r.decay_note;
    if (r.bounds) {
        json flags = json::array();
        for (double t : r.bounds->bracket_flags) {
            flags.push_back(num(t));
        }
        j["bounds"] = {{"M_hat", num(r.bounds->M_hat)},
                       {"N_hat_inv", num(r.bounds->N_hat_inv)},
                       {"N_hat", num(r.bounds->N_hat)},
                       {"theta_bar_min", num(r.bounds->theta_bar_min)},
                       {"theta_bar_max", num(r.bounds->theta_bar_max)},
                       {"bracket_flags", flags}};
    } else {
        j["bounds"] = nullptr;
    }
    j["steps"] = {{"steps", r.steps.steps},
                  {"rejections", r.steps.rejections},
                  {"picard_iterations", r.steps.picard_iterations},
                  {"max_picard", r.steps.max_picard},
                  {"dt_smallest", num(r.steps.dt_smallest)},
                  {"dt_largest", num(r.steps.dt_largest)},
                  {"u_min", num(r.steps.u_min)},
                  {"theta_min", num(r.steps.theta_min)}};
    j["monitor"] = {{"energy_drift_max", num(r.monitor.energy_drift_max)},
                    {"momentum_drift_max", num(r.monitor.momentum_drift_max)},
                    {"theta_bar_min", num(r.monitor.theta_bar_min)},
                    {"theta_bar_max", num(r.monitor.theta_bar_max)},
                    {"bracket_violations", r.monitor.bracket_violations},
                    {"psi_residual_integral", num(r.monitor.psi_residual_integral)},
                    {"psi_residual_max", num(r.monitor.psi_residual_max)}};
    if (!r.records.empty()) {
        const auto& last = r.records.back();
        j["final"] = {{"t_hat", num(last.time)}, {"E", num(last.E)}, {"momentum", num(last.momentum)},
                      {"h1_dist", num(last.h1_dist)}};
    } else {
        j["final"] = nullptr;
    }
    if (failure) {
        j["failure"] = {{"field", failure->field()}, {"index", failure->index()}, {"value", num(failure->value())},
                        {"t_hat", num(failure->time())}, {"dt", num(failure->dt())}};
    } else {
        j["failure"] = nullptr;
    }
    return j;
}

std::string timeseries_csv(const std::vector<DiagnosticsRecord>& records, bool original_time) {
    std::string out = "t_hat,E,momentum,entropy,V,theta_bar,u_min,u_max,theta_min,theta_max,h1_dist,psi_energy";
    out += original_time ? ",t\n" : "\n";
    for (const auto& r : records) {
        for (double x : {r.time, r.E, r.momentum, r.entropy, r.V, r.theta_bar, r.u_min, r.u_max, r.theta_min,
                         r.theta_max, r.h1_dist}) {
            out += csv_num(x) + ",";
        }
        out += csv_num(r.psi_energy);
        if (original_time) {
            out += "," + csv_num(std::expm1(r.time));
        }
        out += "\n";
    }
    return out;
}

// One row per cell center; v is the mean of the two adjacent nodes.
std::string snapshots_csv(const std::vector<State>& snapshots, bool original_time) {
    std::string out = original_time ? "t_hat,x,u,v,theta,t\n" : "t_hat,x,u,v,theta\n";
    for (const auto& s : snapshots) {
        const Grid grid = s.grid();
        for (int i = 0; i < grid.cells(); ++i) {
            out += csv_num(s.time) + "," + csv_num(grid.center(i)) + "," + csv_num(s.u[i]) + "," +
                   csv_num(0.5 * (s.vel[i] + s.vel[i + 1])) + "," + csv_num(s.theta[i]);
            if (original_time) {
                out += "," + csv_num(std::expm1(s.time));
            }
            out += "\n";
        }
    }
    return out;
}

void validate_run_inputs(const RunConfig& cfg) {
    cfg.scenario.validate();
    cfg.params.validate();
    cfg.scheme.validate();
    for (double t : cfg.snapshot_times) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw ValidationError("output.snapshot_times must be finite and >= 0");
        }
    }
}

} // namespace

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opts) {
    try {
        validate_run_inputs(cfg);
    } catch (const std::exception& e) {
        std::cerr << "lns1d simulate: " << e.what() << "\n";
        return kExitUsage;
    }
    const bool original_time = opts.original_time || cfg.original_time;
    RunOptions ro;
    ro.snapshot_times = cfg.snapshot_times;

    RunResult result;
    std::optional<StepFailure> failure;
    try {
        result = run(cfg.scenario, cfg.params, cfg.scheme, ro);
    } catch (const RunFailure& f) {
        result = f.partial();
        failure = f.cause();
        std::cerr << "lns1d simulate: " << f.what() << "\n";
    }

    fs::create_directories(cfg.out_dir);
    write_text(cfg.out_dir / "timeseries.csv", timeseries_csv(result.records, original_time));
    write_text(cfg.out_dir / "snapshots.csv", snapshots_csv(result.snapshots, original_time));
    write_json(cfg.out_dir / "summary.json", summary_json(result, failure ? &*failure : nullptr));
    return failure ? kExitStepFailure : kExitOk;
}

int cmd_verify(const RunConfig& cfg, const CommandOptions& opts) {
    VerifySuite suite;
    try {
        validate_run_inputs(cfg);
        if (cfg.verify_betas.empty()) {
            throw ValidationError("verify.betas is empty: nothing to verify");
        }
        for (double beta : cfg.verify_betas) {
            ScenarioSpec s = cfg.scenario;
            s.beta = beta;
            s.validate();
            suite.scenarios.push_back(s);
        }
        if (cfg.verify_ladder.size() < 3) {
            throw ValidationError("verify.ladder needs at least 3 levels");
        }
        if (!(cfg.verify_ladder_t_hat > 0.0) || !(cfg.verify_cross_t > 0.0)) {
            throw ValidationError("verify.ladder_t_hat and verify.cross_t must be positive");
        }
    } catch (const std::exception& e) {
        std::cerr << "lns1d verify: " << e.what() << "\n";
        return kExitUsage;
    }
    suite.scheme = cfg.scheme;
    suite.conduction = cfg.params.conduction;
    suite.jobs = opts.jobs;
    suite.ladder = cfg.verify_ladder;
    suite.ladder_t_hat = cfg.verify_ladder_t_hat;
    suite.cross_t = cfg.verify_cross_t;

    json report;
    report["scenarios"] = json::array();
    for (const auto& s : suite.scenarios) {
        report["scenarios"].push_back(to_json(s));
    }
    report["scheme"] = to_json(suite.scheme);
    report["conduction"] = suite.conduction;

    int code = kExitOk;
    report["checks"] = json::array();
    try {
        const auto checks = run_verification(suite);
        bool all = true;
        for (const auto& c : checks) {
            all = all && c.pass;
            report["checks"].push_back({{"id", c.id},
                                        {"name", c.name},
                                        {"pass", c.pass},
                                        {"value", num(c.value)},
                                        {"limit", num(c.limit)},
                                        {"comparison", c.upper ? "<=" : ">="},
                                        {"margin", num(c.margin())},
                                        {"detail", c.detail}});
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << " " << c.name << "\n";
        }
        report["passed"] = all;
        report["failure"] = nullptr;
        code = all ? kExitOk : kExitVerifyFailed;
    } catch (const RunFailure& f) {
        std::cerr << "lns1d verify: " << f.what() << "\n";
        report["passed"] = false;
        report["failure"] = {{"field", f.cause().field()}, {"index", f.cause().index()},
                             {"t_hat", num(f.cause().time())}, {"dt", num(f.cause().dt())}};
        code = kExitStepFailure;
    } catch (const StepFailure& f) {
        std::cerr << "lns1d verify: " << f.what() << "\n";
        report["passed"] = false;
        report["failure"] = {{"field", f.field()}, {"index", f.index()}, {"t_hat", num(f.time())}, {"dt", num(f.dt())}};
        code = kExitStepFailure;
    }
    fs::create_directories(cfg.out_dir);
    write_json(cfg.out_dir / "verify_report.json", report);
    return code;
}

int cmd_convergence(const RunConfig& cfg, const CommandOptions& opts) {
    std::vector<LadderStep> levels;
    try {
        validate_run_inputs(cfg);
        levels = cfg.convergence_levels.empty() ? proportional_ladder({32, 64, 128, 256}, cfg.scheme)
                                                : cfg.convergence_levels;
        if (levels.size() < 3) {
            throw ValidationError("convergence.levels needs at least 3 levels");
        }
        const int finest = levels.back().n;
        for (const auto& l : levels) {
            if (l.n < 4 || finest % l.n != 0 || !(l.dt > 0.0)) {
                throw ValidationError("convergence.levels: each n must be >= 4 and divide the last n; dt > 0");
            }
        }
        if (!(cfg.convergence_t_hat > 0.0)) {
            throw ValidationError("convergence.t_hat must be positive");
        }
    } catch (const std::exception& e) {
        std::cerr << "lns1d convergence: " << e.what() << "\n";
        return kExitUsage;
    }

    std::vector<LadderLevel> result;
    try {
        result = grid_ladder(cfg.scenario, cfg.params, cfg.scheme, levels, cfg.convergence_t_hat, opts.jobs);
    } catch (const StepFailure& f) {
        std::cerr << "lns1d convergence: " << f.what() << "\n";
        return kExitStepFailure;
    }
    std::string csv = "level,n,dt,err_vs_finest,observed_order\n";
    for (std::size_t k = 0; k < result.size(); ++k) {
        const auto& l = result[k];
        csv += std::to_string(k) + "," + std::to_string(l.n) + "," + csv_num(l.dt) + "," + csv_num(l.error) + "," +
               (std::isnan(l.order) ? std::string("nan") : csv_num(l.order)) + "\n";
    }
    fs::create_directories(cfg.out_dir);
    write_text(cfg.out_dir / "convergence.csv", csv);
    return kExitOk;
}

int cli_main(int argc, char** argv) {
    CLI::App app{"lns1d: compressible Navier-Stokes with stress-free boundaries, in scaled variables"};
    app.require_subcommand(1, 1);

    std::optional<std::string> config_path;
    std::vector<std::string> overrides;
    CommandOptions opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Config file (flat key = value)");
        sub->add_option("--set", overrides, "Override one config key: key=value (repeatable)");
        sub->add_option("--jobs", opts.jobs, "Parallel runs")->check(CLI::PositiveNumber);
        sub->add_flag("--original-time", opts.original_time, "Add a t = exp(t_hat) - 1 column to CSV output");
    };
    auto* simulate = app.add_subcommand("simulate", "Run one scenario and write CSV/JSON output");
    auto* verify = app.add_subcommand("verify", "Run the acceptance checks, write verify_report.json");
    auto* convergence = app.add_subcommand("convergence", "Grid refinement study, write convergence.csv");
    for (auto* sub : {simulate, verify, convergence}) {
        add_common(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    RunConfig cfg;
    try {
        std::optional<fs::path> path;
        if (config_path) {
            path = *config_path;
        }
        cfg = load_config(path, overrides);
    } catch (const std::exception& e) {
        std::cerr << "lns1d: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(cfg, opts);
        if (verify->parsed()) return cmd_verify(cfg, opts);
        return cmd_convergence(cfg, opts);
    } catch (const ValidationError& e) {
        std::cerr << "lns1d: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "lns1d: " << e.what() << "\n";
        return kExitStepFailure;
    }
}

} // namespace lns1d
