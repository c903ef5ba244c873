#include "lns1d/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "lns1d/calculus.hpp"
#include "lns1d/diagnostics.hpp"
#include "lns1d/errors.hpp"
#include "lns1d/transforms.hpp"

namespace lns1d {
namespace {

// Runs fn(0..count-1) on up to `jobs` threads; rethrows the first exception.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1, jobs), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(3) << std::scientific << x;
    return os.str();
}

CheckResult make_check(int id, std::string name, double value, double limit, bool upper, std::string detail,
                       bool extra_ok = true) {
    CheckResult c;
    c.id = id;
    c.name = std::move(name);
    c.value = value;
    c.limit = limit;
    c.upper = upper;
    c.detail = std::move(detail);
    const bool within = upper ? (value <= limit) : (value >= limit);
    c.pass = extra_ok && std::isfinite(value) && within;
    return c;
}

double relative_final_drift(const RunResult& r) {
    return std::abs(r.records.back().E - r.summary.E0) / r.summary.E0;
}

std::string label(const ScenarioSpec& s) {
    std::ostringstream os;
    os << s.label() << "(beta=" << s.beta << ")";
    return os.str();
}

State trivial_original(int n, double c) {
    ScenarioSpec spec;
    spec.kind = ScenarioKind::Trivial;
    spec.c = c;
    spec.n = n;
    State s = make_initial(spec);
    s.formulation = Formulation::Original;
    return s;
}

CheckResult check_trivial(const VerifySuite& suite, const PhysParams& base) {
    const int n = 128;
    const double c = 1.0;
    PhysParams params = base;
    params.beta = 1.0;

    ScenarioSpec spec;
    spec.kind = ScenarioKind::Trivial;
    spec.c = c;
    spec.n = n;
    const State initial = make_initial(spec);
    State s = initial;
    double scaled_dev = 0.0;
    Integrator scaled(params, suite.scheme);
    scaled.advance_to(s, 5.0, [&](const State&, const State& after, const StepReport&) {
        scaled_dev = std::max(scaled_dev, state_distance(after, initial));
    });

    State o = trivial_original(n, c);
    Integrator original(params, suite.scheme);
    original.advance_to(o, 1.0);
    double orig_dev = 0.0;
    for (int i = 0; i < n; ++i) {
        orig_dev = std::max({orig_dev, std::abs(o.u[i] - 2.0 * c), std::abs(o.theta[i] - c)});
    }
    orig_dev = std::max(orig_dev, max_abs_diff(o.vel, initial.vel));

    return make_check(1, "trivial solution preserved", std::max(scaled_dev, orig_dev), 1e-10, true,
                      "scaled t_hat<=5 " + fmt(scaled_dev) + ", original u=2c at t=1 " + fmt(orig_dev));
}

CheckResult check_constants() {
    double worst = 0.0;
    std::ostringstream detail;
    for (double c : {1.0, 2.0}) {
        ScenarioSpec spec;
        spec.kind = ScenarioKind::Trivial;
        spec.c = c;
        spec.n = 128;
        const auto s = compute_summary(make_initial(spec), PhysParams{});
        worst = std::max(worst, std::abs(s.A - c));
        detail << "A(c=" << c << ")-" << c << "=" << fmt(s.A - c) << "; ";
    }
    State rest;
    rest.u.assign(128, 1.0);
    rest.theta.assign(128, 1.0);
    rest.vel.assign(129, 0.0);
    const auto s = compute_summary(rest, PhysParams{});
    // Positive root of A^2/24 + A - E0 = 0, with E0 = 1 exactly for this data.
    const double root = -12.0 + std::sqrt(144.0 + 24.0 * 1.0);
    worst = std::max({worst, std::abs(s.A - root), std::abs(s.A - (2.0 * std::sqrt(42.0) - 12.0))});
    detail << "rest state A-root=" << fmt(s.A - root);
    return make_check(2, "asymptotic constant arithmetic", worst, 1e-12, true, detail.str());
}

} // namespace

std::vector<ScenarioSpec> default_scenarios() {
    std::vector<ScenarioSpec> out;
    for (double beta : {0.5, 1.0, 2.0}) {
        ScenarioSpec s;
        s.kind = ScenarioKind::Perturbed;
        s.c = 1.0;
        s.amp = 0.1;
        s.modes = {1, 2};
        s.n = 128;
        s.beta = beta;
        s.t_hat_end = 15.0;
        s.sample_every = 0.01;
        out.push_back(s);
    }
    return out;
}

SchemeConfig refined(const SchemeConfig& cfg) {
    SchemeConfig r = cfg;
    r.dt_init = cfg.dt_init / 2.0;
    r.dt_max = cfg.dt_max / 2.0;
    r.dt_min = std::min(cfg.dt_min, r.dt_init);
    r.safety = std::sqrt(cfg.safety);
    return r;
}

double state_distance(const State& a, const State& b) {
    if (a.u.size() != b.u.size() || a.vel.size() != b.vel.size() || a.theta.size() != b.theta.size()) {
        throw StructuralError("state_distance: shape mismatch");
    }
    return std::max({max_abs_diff(a.u, b.u), max_abs_diff(a.vel, b.vel), max_abs_diff(a.theta, b.theta)});
}

std::vector<LadderStep> proportional_ladder(const std::vector<int>& ns, const SchemeConfig& cfg) {
    std::vector<LadderStep> out;
    for (int n : ns) {
        out.push_back({n, ns.empty() ? cfg.dt_max : cfg.dt_max * ns.front() / n});
    }
    return out;
}

std::vector<LadderLevel> grid_ladder(const ScenarioSpec& spec, const PhysParams& params, const SchemeConfig& cfg,
                                     const std::vector<LadderStep>& levels, double t_hat, int jobs) {
    if (levels.size() < 3) {
        throw ValidationError("convergence ladder needs at least 3 levels");
    }
    const int finest = levels.back().n;
    for (const auto& l : levels) {
        if (l.n < 4 || finest % l.n != 0 || !(l.dt > 0.0)) {
            throw ValidationError("convergence ladder: each n must be >= 4 and divide the finest n, dt > 0");
        }
    }
    std::vector<State> finals(levels.size());
    parallel_for(levels.size(), jobs, [&](std::size_t k) {
        ScenarioSpec s = spec;
        s.n = levels[k].n;
        SchemeConfig c = cfg;
        c.dt_max = levels[k].dt;
        c.dt_init = std::min(cfg.dt_init, c.dt_max);
        c.dt_min = std::min(cfg.dt_min, c.dt_init);
        State state = make_initial(s);
        Integrator integ(params, c);
        integ.advance_to(state, t_hat);
        finals[k] = std::move(state);
    });

    const State& ref = finals.back();
    std::vector<LadderLevel> out(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const int n = levels[k].n;
        const int r = finest / n;
        const Grid grid(n);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = grid.center(i);
            if (x < 0.125 || x > 0.875) {
                continue;
            }
            double u = 0.0, th = 0.0;
            for (int m = 0; m < r; ++m) {
                u += ref.u[i * r + m];
                th += ref.theta[i * r + m];
            }
            err = std::max({err, std::abs(finals[k].u[i] - u / r), std::abs(finals[k].theta[i] - th / r)});
        }
        for (int j = 0; j <= n; ++j) {
            const double x = grid.node(j);
            if (x < 0.125 || x > 0.875) {
                continue;
            }
            err = std::max(err, std::abs(finals[k].vel[j] - ref.vel[j * r]));
        }
        out[k].n = n;
        out[k].dt = levels[k].dt;
        out[k].error = err;
        out[k].order = std::numeric_limits<double>::quiet_NaN();
    }
    for (std::size_t k = 0; k + 2 < out.size(); ++k) {
        if (out[k].error > 1e-10 && out[k + 1].error > 1e-10) {
            out[k].order = std::log2(out[k].error / out[k + 1].error) / std::log2(double(out[k + 1].n) / out[k].n);
        }
    }
    return out;
}

std::vector<CheckResult> run_verification(const VerifySuite& suite) {
    if (suite.scenarios.empty()) {
        throw ValidationError("verify: the scenario list is empty");
    }
    for (const auto& s : suite.scenarios) {
        s.validate();
    }
    suite.scheme.validate();
    PhysParams base;
    base.conduction = suite.conduction;
    auto params_of = [&](const ScenarioSpec& s) {
        PhysParams p = s.params();
        p.conduction = suite.conduction;
        return p;
    };

    const std::size_t m = suite.scenarios.size();
    const ScenarioSpec& lead = suite.scenarios.front();
    const SchemeConfig fine_cfg = refined(suite.scheme);

    // All independent runs go through one pool: base runs, dt-refined runs, the half-cadence
    // run and the (dx/2, dt/2) run.
    std::vector<RunResult> base_runs(m), fine_runs(m);
    RunResult half_cadence, fine_grid;
    RunOptions with_history;
    with_history.keep_history = true;
    std::vector<std::function<void()>> tasks;
    for (std::size_t k = 0; k < m; ++k) {
        tasks.push_back([&, k] {
            base_runs[k] = run(suite.scenarios[k], params_of(suite.scenarios[k]), suite.scheme,
                               k == 0 ? with_history : RunOptions{});
        });
        tasks.push_back([&, k] {
            fine_runs[k] = run(suite.scenarios[k], params_of(suite.scenarios[k]), fine_cfg);
        });
    }
    tasks.push_back([&] {
        ScenarioSpec s = lead;
        s.sample_every = lead.sample_every / 2.0;
        half_cadence = run(s, params_of(s), suite.scheme, with_history);
    });
    tasks.push_back([&] {
        ScenarioSpec s = lead;
        s.n = 2 * lead.n;
        fine_grid = run(s, params_of(s), fine_cfg);
    });
    parallel_for(tasks.size(), suite.jobs, [&](std::size_t i) { tasks[i](); });

    std::vector<CheckResult> out;
    out.push_back(check_trivial(suite, base));
    out.push_back(check_constants());

    // 3. energy
    {
        double worst = 0.0, worst_ratio = std::numeric_limits<double>::infinity();
        std::ostringstream d;
        for (std::size_t k = 0; k < m; ++k) {
            const double drift = base_runs[k].monitor.energy_drift_max;
            const double ratio = relative_final_drift(base_runs[k]) / relative_final_drift(fine_runs[k]);
            worst = std::max(worst, drift);
            worst_ratio = std::min(worst_ratio, ratio);
            d << label(suite.scenarios[k]) << ": drift " << fmt(drift) << ", halving ratio " << fmt(ratio) << "; ";
        }
        d << "(ratio limit 1.8)";
        out.push_back(make_check(3, "energy identity", worst, 1e-6, true, d.str(), worst_ratio >= 1.8));
    }
    // 4. momentum
    {
        double worst = 0.0;
        std::ostringstream d;
        for (std::size_t k = 0; k < m; ++k) {
            worst = std::max(worst, base_runs[k].monitor.momentum_drift_max);
            d << label(suite.scenarios[k]) << ": " << fmt(base_runs[k].monitor.momentum_drift_max) << "; ";
        }
        out.push_back(make_check(4, "momentum conservation", worst, 1e-6, true, d.str()));
    }
    // 5. entropy estimate
    {
        double min_margin = std::numeric_limits<double>::infinity();
        bool all = true;
        std::ostringstream d;
        auto visit = [&](const RunResult& r, const std::string& tag) {
            const auto c = entropy_estimate_check(r.records, r.summary);
            all = all && c.pass;
            min_margin = std::min(min_margin, c.margin);
            d << tag << ": margin " << fmt(c.margin) << "; ";
        };
        for (std::size_t k = 0; k < m; ++k) {
            visit(base_runs[k], label(suite.scenarios[k]));
            visit(fine_runs[k], label(suite.scenarios[k]) + "[dt/2]");
        }
        visit(half_cadence, "half cadence");
        visit(fine_grid, "dx/2");
        out.push_back(make_check(5, "entropy-dissipation estimate", min_margin, 0.0, false, d.str(), all && min_margin > 0.0));
    }
    // 6. mean-temperature bracket, at every accepted step
    {
        double worst = -std::numeric_limits<double>::infinity();
        long violations = 0;
        std::ostringstream d;
        for (std::size_t k = 0; k < m; ++k) {
            const auto& r = base_runs[k];
            const double excess = std::max(r.summary.alpha1 - r.monitor.theta_bar_min,
                                           r.monitor.theta_bar_max - r.summary.alpha2);
            worst = std::max(worst, excess);
            violations += r.monitor.bracket_violations + static_cast<long>(r.bounds->bracket_flags.size());
            d << label(suite.scenarios[k]) << ": theta_bar in [" << fmt(r.monitor.theta_bar_min) << ", "
              << fmt(r.monitor.theta_bar_max) << "] vs [" << fmt(r.summary.alpha1) << ", " << fmt(r.summary.alpha2)
              << "]; ";
        }
        out.push_back(make_check(6, "mean-temperature bracket", worst, 1e-6, true, d.str(), violations == 0));
    }
    // 7. positivity and bounded M_hat after the transient
    {
        double worst_growth = 0.0, min_field = std::numeric_limits<double>::infinity();
        std::ostringstream d;
        for (std::size_t k = 0; k < m; ++k) {
            const auto& r = base_runs[k];
            min_field = std::min({min_field, r.steps.u_min, r.steps.theta_min});
            const std::size_t half = r.records.size() / 2;
            double early = 0.0, late = 0.0;
            for (std::size_t i = 0; i < r.records.size(); ++i) {
                const double M = std::max(r.records[i].u_max, 1.0 / r.records[i].u_min);
                (i < half ? early : late) = std::max(i < half ? early : late, M);
            }
            worst_growth = std::max(worst_growth, late / early);
            d << label(suite.scenarios[k]) << ": min(u,theta) " << fmt(std::min(r.steps.u_min, r.steps.theta_min))
              << ", M_hat " << fmt(r.bounds->M_hat) << ", late/early " << fmt(late / early) << "; ";
        }
        out.push_back(make_check(7, "positivity and bounds", worst_growth, 1.0, true, d.str(), min_field > 0.0));
    }
    // 8. representation formula
    {
        auto deviation = [](const RunResult& r) {
            const auto oracle = u_representation_oracle(r.history, r.initial, r.params);
            double worst = 0.0;
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                worst = std::max(worst, std::abs(oracle[i] - r.final_state.u[i]) / std::abs(r.final_state.u[i]));
            }
            return worst;
        };
        const double coarse = deviation(base_runs.front());
        const double fine = deviation(half_cadence);
        const double ratio = coarse / fine;
        out.push_back(make_check(8, "representation-formula oracle", coarse, 1e-3, true,
                                 "cadence " + fmt(lead.sample_every) + ": " + fmt(coarse) + ", half cadence: " +
                                     fmt(fine) + ", ratio " + fmt(ratio) + " (limit 1.8)",
                                 ratio >= 1.8));
    }
    // 9. convergence to the asymptotic state
    {
        double worst = 0.0;
        std::ostringstream d;
        for (std::size_t k = 0; k < m; ++k) {
            const auto& r = base_runs[k];
            const double A = r.summary.A;
            double du = 0.0, dth = 0.0;
            for (std::size_t i = 0; i < r.final_state.u.size(); ++i) {
                du = std::max(du, std::abs(r.final_state.u[i] - A));
                dth = std::max(dth, std::abs(r.final_state.theta[i] - A));
            }
            const double h1 = r.records.back().h1_dist;
            const double grad = gradient_energy(r.final_state);
            worst = std::max({worst, h1, du, dth, grad});
            d << label(suite.scenarios[k]) << ": h1 " << fmt(h1) << ", |u-A| " << fmt(du) << ", |theta-A| "
              << fmt(dth) << ", grad " << fmt(grad) << "; ";
        }
        out.push_back(make_check(9, "convergence to the asymptotic state", worst, 1e-6, true, d.str()));
    }
    // 10. exponential decay
    {
        double worst_r2 = std::numeric_limits<double>::infinity();
        bool positive = true;
        std::ostringstream d;
        for (std::size_t k = 0; k < m; ++k) {
            const auto& r = base_runs[k];
            if (!r.decay) {
                worst_r2 = -std::numeric_limits<double>::infinity();
                positive = false;
                d << label(suite.scenarios[k]) << ": no fit (" << r.decay_note << "); ";
                continue;
            }
            worst_r2 = std::min(worst_r2, r.decay->r_squared);
            positive = positive && r.decay->lambda_hat > 0.0;
            d << label(suite.scenarios[k]) << ": lambda " << fmt(r.decay->lambda_hat) << ", r2 "
              << fmt(r.decay->r_squared) << " on [" << fmt(r.decay->t_start) << ", " << fmt(r.decay->t_end)
              << "]; ";
        }
        out.push_back(make_check(10, "exponential decay", worst_r2, 0.99, false, d.str(), positive));
    }
    // 11. psi identity
    {
        const double coarse = base_runs.front().monitor.psi_residual_integral;
        const double fine = fine_grid.monitor.psi_residual_integral;
        const double ratio = coarse / fine;
        out.push_back(make_check(11, "psi-identity residual", coarse, 1e-3, true,
                                 "integrated residual " + fmt(coarse) + ", (dx/2, dt/2): " + fmt(fine) + ", ratio " +
                                     fmt(ratio) + " (limit 1.8)",
                                 ratio >= 1.8));
    }
    // 12. cross-formulation equivalence on the lead scenario's data
    {
        const PhysParams p = params_of(lead);
        const State initial = make_initial(lead);
        const double v0_mean = compute_summary(initial, p).v0_mean;
        double orig_dev = 0.0, w_dev = 0.0;

        State scaled = initial;
        State orig = initial;
        orig.formulation = Formulation::Original;
        Integrator si(p, suite.scheme), oi(p, suite.scheme);
        for (int k = 1; k <= 10; ++k) {
            const double t = suite.cross_t * k / 10.0;
            oi.advance_to(orig, t);
            si.advance_to(scaled, std::log1p(t));
            orig_dev = std::max(orig_dev, state_distance(to_scaled(orig), scaled));
        }

        scaled = initial;
        State w = build_w(initial, v0_mean);
        Integrator si2(p, suite.scheme), wi(p, suite.scheme);
        for (int k = 1; k <= 10; ++k) {
            const double t = suite.cross_t * k / 10.0;
            si2.advance_to(scaled, t);
            wi.advance_to(w, t);
            w_dev = std::max(w_dev, state_distance(w_to_v(w, v0_mean), scaled));
        }
        out.push_back(make_check(12, "cross-formulation equivalence", std::max(orig_dev, w_dev), 1e-5, true,
                                 "original vs scaled " + fmt(orig_dev) + ", w-form vs scaled " + fmt(w_dev)));
    }
    // 13. grid convergence
    {
        const auto levels =
            grid_ladder(lead, params_of(lead), suite.scheme, proportional_ladder(suite.ladder, suite.scheme),
                        suite.ladder_t_hat, suite.jobs);
        double worst = std::numeric_limits<double>::infinity();
        std::ostringstream d;
        for (const auto& l : levels) {
            d << "n=" << l.n << " err " << fmt(l.error);
            if (!std::isnan(l.order)) {
                worst = std::min(worst, l.order);
                d << " order " << fmt(l.order);
            }
            d << "; ";
        }
        out.push_back(make_check(13, "grid convergence", worst, 1.8, false, d.str()));
    }
    return out;
}

} // namespace lns1d
