#include "lns1d/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "lns1d/calculus.hpp"
#include "lns1d/transforms.hpp"

namespace lns1d {

std::string_view to_string(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::Trivial: return "trivial";
    case ScenarioKind::Perturbed: return "perturbed";
    case ScenarioKind::RandomSmooth: return "random_smooth";
    }
    return "unknown";
}

ScenarioKind scenario_kind_from_string(std::string_view name) {
    if (name == "trivial") return ScenarioKind::Trivial;
    if (name == "perturbed") return ScenarioKind::Perturbed;
    if (name == "random_smooth") return ScenarioKind::RandomSmooth;
    throw ValidationError("unknown scenario kind '" + std::string(name) + "'");
}

void ScenarioSpec::validate() const {
    if (n < 4) {
        throw ValidationError("scenario.n must be >= 4");
    }
    if (!(t_hat_end > 0.0) || !std::isfinite(t_hat_end)) {
        throw ValidationError("scenario.t_hat_end must be positive and finite");
    }
    if (!(sample_every > 0.0) || !(sample_every <= t_hat_end)) {
        throw ValidationError("scenario.sample_every must lie in (0, t_hat_end]");
    }
    try {
        params().validate();
    } catch (const std::exception& e) {
        throw ValidationError(e.what());
    }
    switch (kind) {
    case ScenarioKind::Trivial:
    case ScenarioKind::Perturbed:
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw ValidationError("scenario.c must be positive");
        }
        if (kind == ScenarioKind::Trivial) {
            break;
        }
        if (!(amp >= 0.0) || !(amp < 0.5 * std::min(c, 1.0))) {
            throw ValidationError("scenario.amp must satisfy 0 <= amp < min(c,1)/2");
        }
        if (modes.empty()) {
            throw ValidationError("scenario.modes must not be empty");
        }
        for (int k : modes) {
            if (k < 1) {
                throw ValidationError("scenario.modes must be positive integers");
            }
        }
        if (c - amp * static_cast<double>(modes.size()) < kPositivityMargin) {
            throw ValidationError("scenario: perturbation would violate the positivity margin");
        }
        break;
    case ScenarioKind::RandomSmooth:
        for (const auto& [lo, hi, key] : {std::tuple{u_range.first, u_range.second, "u_range"},
                                          std::tuple{theta_range.first, theta_range.second, "theta_range"}}) {
            if (!(lo >= kPositivityMargin) || !(hi > lo) || !std::isfinite(hi)) {
                throw ValidationError(std::string("scenario.") + key + " must satisfy margin <= lo < hi < inf");
            }
        }
        if (!(v_amp >= 0.0) || !std::isfinite(v_amp)) {
            throw ValidationError("scenario.v_amp must be >= 0");
        }
        break;
    }
}

std::string ScenarioSpec::label() const {
    return name.empty() ? std::string(to_string(kind)) : name;
}

PhysParams ScenarioSpec::params() const {
    PhysParams p;
    p.beta = beta;
    p.alpha = alpha;
    return p;
}

namespace {

constexpr int kRandomModes = 6;
constexpr double kRandomDecay = 0.5;

State trivial_state(const Grid& grid, double c) {
    State s;
    s.formulation = Formulation::Scaled;
    s.time = 0.0;
    s.u.assign(grid.cells(), c);
    s.theta.assign(grid.cells(), c);
    s.vel.resize(grid.nodes());
    for (int j = 0; j < grid.nodes(); ++j) {
        s.vel[j] = c * (grid.node(j) - 0.5);
    }
    return s;
}

// Sum of at most kRandomModes terms bounded by 2 in magnitude.
std::vector<double> draw_coefficients(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> a(kRandomModes);
    double scale = 1.0;
    for (double& x : a) {
        x = unit(rng) * scale;
        scale *= kRandomDecay;
    }
    return a;
}

} // namespace

State make_initial(const ScenarioSpec& spec) {
    spec.validate();
    const Grid grid(spec.n);
    const double pi = std::numbers::pi;

    if (spec.kind == ScenarioKind::Trivial) {
        return trivial_state(grid, spec.c);
    }

    State s;
    if (spec.kind == ScenarioKind::Perturbed) {
        s = trivial_state(grid, spec.c);
        for (int k : spec.modes) {
            for (int i = 0; i < grid.cells(); ++i) {
                const double p = spec.amp * std::cos(k * pi * grid.center(i));
                s.u[i] += p;
                s.theta[i] += p;
            }
            for (int j = 0; j < grid.nodes(); ++j) {
                s.vel[j] += spec.amp * std::sin(k * pi * grid.node(j));
            }
        }
    } else {
        std::mt19937_64 rng(spec.seed);
        const auto au = draw_coefficients(rng);
        const auto at = draw_coefficients(rng);
        const auto av = draw_coefficients(rng);
        auto series = [&](const std::vector<double>& a, double x, bool sine) {
            double sum = 0.0;
            for (int k = 1; k <= kRandomModes; ++k) {
                sum += a[k - 1] * (sine ? std::sin(k * pi * x) : std::cos(k * pi * x));
            }
            return 0.5 * sum; // |sum| < 2
        };
        s.formulation = Formulation::Scaled;
        s.time = 0.0;
        s.u.resize(grid.cells());
        s.theta.resize(grid.cells());
        s.vel.resize(grid.nodes());
        const auto [ulo, uhi] = spec.u_range;
        const auto [tlo, thi] = spec.theta_range;
        for (int i = 0; i < grid.cells(); ++i) {
            const double x = grid.center(i);
            s.u[i] = std::clamp(0.5 * (ulo + uhi) + 0.5 * (uhi - ulo) * series(au, x, false), ulo, uhi);
            s.theta[i] = std::clamp(0.5 * (tlo + thi) + 0.5 * (thi - tlo) * series(at, x, false), tlo, thi);
        }
        for (int j = 0; j < grid.nodes(); ++j) {
            s.vel[j] = spec.v_amp * series(av, grid.node(j), true);
        }
    }

    const double lowest = std::min(*std::min_element(s.u.begin(), s.u.end()),
                                   *std::min_element(s.theta.begin(), s.theta.end()));
    if (!(lowest >= kPositivityMargin)) {
        throw ValidationError("scenario: initial data violate the positivity margin");
    }
    return s;
}

RunFailure::RunFailure(const StepFailure& cause, RunResult partial)
    : std::runtime_error(cause.what()), cause_(cause), partial_(std::move(partial)) {}

namespace {

// Sample times: the cadence grid plus requested snapshot times, sorted and deduplicated.
std::vector<double> sample_times(const ScenarioSpec& spec, const std::vector<double>& snapshots) {
    std::vector<double> t;
    const auto count = static_cast<long>(std::ceil(spec.t_hat_end / spec.sample_every - 1e-9));
    for (long k = 1; k <= count; ++k) {
        t.push_back(std::min(static_cast<double>(k) * spec.sample_every, spec.t_hat_end));
    }
    for (double s : snapshots) {
        if (s > 0.0 && s <= spec.t_hat_end) {
            t.push_back(s);
        }
    }
    std::sort(t.begin(), t.end());
    std::vector<double> out;
    for (double x : t) {
        if (out.empty() || x - out.back() > 1e-12) {
            out.push_back(x);
        }
    }
    return out;
}

bool is_snapshot(double t, const std::vector<double>& snapshots) {
    return std::any_of(snapshots.begin(), snapshots.end(),
                       [t](double s) { return std::abs(s - t) <= 1e-12; });
}

void finish(RunResult& r, const RunOptions& options) {
    if (!r.records.empty()) {
        r.bounds = bounds_tracker(r.records, r.summary);
    }
    std::vector<double> t, h;
    for (const auto& rec : r.records) {
        t.push_back(rec.time);
        h.push_back(rec.h1_dist);
    }
    r.decay.reset();
    r.decay_note.clear();
    if (h.empty() || !(h.front() > 0.0)) {
        r.decay_note = "initial H1 distance is zero";
        return;
    }
    try {
        r.decay = decay_fit(t, h, options.decay_hi_fraction * h.front(), options.decay_lo);
    } catch (const InsufficientDataError& e) {
        r.decay_note = e.what();
    }
}

} // namespace

RunResult run(const ScenarioSpec& spec, const PhysParams& params, const SchemeConfig& cfg,
              const RunOptions& options) {
    spec.validate();
    params.validate();
    cfg.validate();

    RunResult r;
    r.spec = spec;
    r.params = params;
    r.scheme = cfg;
    r.history = History(options.history_capacity);
    r.initial = make_initial(spec);
    r.summary = compute_summary(r.initial, params);
    const InitialDataSummary& summary = r.summary;
    const Grid grid(spec.n);

    State s = r.initial;
    r.records.push_back(make_record(s, summary, params));
    if (options.keep_history) {
        r.history.append(s);
    }
    if (is_snapshot(0.0, options.snapshot_times)) {
        r.snapshots.push_back(s);
    }

    StepMonitor& mon = r.monitor;
    mon.theta_bar_min = mon.theta_bar_max = r.records.front().theta_bar;
    auto on_step = [&](const State& before, const State& after, const StepReport& rep) {
        const double E = total_energy(after);
        mon.energy_drift_max = std::max(mon.energy_drift_max, std::abs(E - summary.E0) / summary.E0);
        mon.momentum_drift_max = std::max(mon.momentum_drift_max, std::abs(momentum(after) - summary.v0_mean));
        const double tb = discrete_integral(after.theta, grid);
        mon.theta_bar_min = std::min(mon.theta_bar_min, tb);
        mon.theta_bar_max = std::max(mon.theta_bar_max, tb);
        if (tb < summary.alpha1 - 1e-6 || tb > summary.alpha2 + 1e-6) {
            ++mon.bracket_violations;
        }
        const double dt = after.time - before.time;
        const double res = psi_identity_residual(build_w(before, summary.v0_mean),
                                                 build_w(after, summary.v0_mean), dt, summary, params);
        mon.psi_residual_integral += res * dt;
        mon.psi_residual_max = std::max(mon.psi_residual_max, res);
        (void)rep;
    };

    Integrator integrator(params, cfg);
    try {
        for (double target : sample_times(spec, options.snapshot_times)) {
            integrator.advance_to(s, target, on_step);
            s.time = target;
            r.records.push_back(make_record(s, summary, params));
            if (options.keep_history) {
                r.history.append(s);
            }
            if (is_snapshot(target, options.snapshot_times)) {
                r.snapshots.push_back(s);
            }
        }
    } catch (const StepFailure& failure) {
        r.final_state = s;
        r.steps = integrator.stats();
        finish(r, options);
        throw RunFailure(failure, std::move(r));
    }
    r.final_state = std::move(s);
    r.steps = integrator.stats();
    finish(r, options);
    return r;
}

} // namespace lns1d
