#include "lns1d/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lns1d/calculus.hpp"
#include "lns1d/errors.hpp"
#include "lns1d/operators.hpp"
#include "lns1d/tridiagonal.hpp"

namespace lns1d {

void SchemeConfig::validate() const {
    if (!(dt_min > 0.0) || !(dt_min <= dt_init) || !(dt_init <= dt_max) || !std::isfinite(dt_max)) {
        throw ValidationError("scheme: require 0 < dt_min <= dt_init <= dt_max < inf");
    }
    if (!(safety > 0.0 && safety < 1.0)) {
        throw ValidationError("scheme.safety must lie in (0,1)");
    }
    if (picard_max < 1) {
        throw ValidationError("scheme.picard_max must be >= 1");
    }
    if (!(picard_tol > 0.0)) {
        throw ValidationError("scheme.picard_tol must be > 0");
    }
    if (!(positivity_floor > 0.0)) {
        throw ValidationError("scheme.positivity_floor must be > 0");
    }
}

namespace {

struct Attempt {
    bool ok = false;
    State state;
    int iterations = 0;
    std::string field;
    int index = -1;
    double value = 0.0;
};

Attempt reject(std::string field, int index, double value, int iterations) {
    Attempt a;
    a.field = std::move(field);
    a.index = index;
    a.value = value;
    a.iterations = iterations;
    return a;
}

// Index of the first entry that is non-finite or <= floor, or -1.
int first_inadmissible(const std::vector<double>& f, double floor) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i]) || !(f[i] > floor)) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

Attempt trapezoid_step(const State& s, const PhysParams& params, const SchemeConfig& cfg, double dt) {
    const Grid grid = s.grid();
    const int n = grid.cells();
    const double h = grid.dx();
    const Formulation f = s.formulation;
    const bool wform = f == Formulation::WForm;
    const double sigma_b = boundary_stress(f);
    const double vel_damping = wform ? 1.0 : 0.0;
    const double u_damping = (f == Formulation::Scaled) ? 1.0 : 0.0;
    const double half = 0.5 * dt;
    const double t_new = s.time + dt;

    // Old-time half of the trapezoidal rule.
    const auto vel_x0 = cell_gradient(s.vel, grid);
    const auto vx0 = physical_velocity_gradient(s);
    const auto sigma0 = stress_field(s, params);
    const auto b0 = momentum_forcing(sigma0, sigma_b);
    const auto q0 = heat_flux_field(s, params);
    const auto mv0 = mass_apply(s.vel, grid);

    std::vector<double> rhs_vel(n + 1), rhs_u(n), rhs_theta(n);
    for (int j = 0; j <= n; ++j) {
        rhs_vel[j] = mv0[j] * (1.0 - vel_damping * half) + half * b0[j];
    }
    for (int i = 0; i < n; ++i) {
        rhs_u[i] = s.u[i] + half * (vel_x0[i] - u_damping * s.u[i]);
        rhs_theta[i] = s.theta[i] + half * ((sigma0[i] - sigma_b) * vx0[i] + (q0[i + 1] - q0[i]) / h);
    }

    const double mass_diag = 2.0 * h / 3.0 * (1.0 + vel_damping * half);
    const double mass_end = h / 3.0 * (1.0 + vel_damping * half);
    const double mass_off = h / 6.0 * (1.0 + vel_damping * half);

    State it = s;
    it.time = t_new;

    std::vector<double> a(n), c(n), mu(n);
    std::vector<double> lower_v(n), diag_v(n + 1), upper_v(n), rhs_v(n + 1);
    std::vector<double> lower_t(n - 1), diag_t(n), upper_t(n - 1), rhs_t(n);
    std::vector<double> cond(n + 1, 0.0);

    for (int k = 1; k <= cfg.picard_max; ++k) {
        // Momentum: sigma_i = a_i vel_x + c_i with u, theta lagged at the current iterate.
        for (int i = 0; i < n; ++i) {
            mu[i] = effective_viscosity(params, f, it.u[i], t_new);
            a[i] = mu[i] / it.u[i];
            c[i] = wform ? mu[i] - it.theta[i] / it.u[i] - 1.0 : -it.theta[i] / it.u[i];
        }
        for (int j = 0; j <= n; ++j) {
            const double a_right = (j < n) ? a[j] : 0.0;
            const double a_left = (j > 0) ? a[j - 1] : 0.0;
            const double c_right = (j < n) ? c[j] : sigma_b;
            const double c_left = (j > 0) ? c[j - 1] : sigma_b;
            diag_v[j] = ((j == 0 || j == n) ? mass_end : mass_diag) + half * (a_right + a_left) / h;
            rhs_v[j] = rhs_vel[j] + half * (c_right - c_left);
        }
        for (int j = 0; j < n; ++j) {
            upper_v[j] = mass_off - half * a[j] / h;
            lower_v[j] = mass_off - half * a[j] / h;
        }

        std::vector<double> vel_new;
        try {
            vel_new = solve_tridiagonal(lower_v, diag_v, upper_v, rhs_v);
        } catch (const NumericalError&) {
            return reject("vel", -1, 0.0, k);
        }
        const auto vel_x = cell_gradient(vel_new, grid);

        std::vector<double> u_new(n);
        for (int i = 0; i < n; ++i) {
            u_new[i] = (rhs_u[i] + half * vel_x[i]) / (1.0 + u_damping * half);
        }
        if (const int bad = first_inadmissible(u_new, 0.0); bad >= 0) {
            return reject("u", bad, u_new[bad], k);
        }

        // Temperature: conduction implicit with lagged kappa, -theta v_x/u implicit.
        for (int j = 1; j < n; ++j) {
            if (params.conduction) {
                const double theta_mean = 0.5 * (it.theta[j - 1] + it.theta[j]);
                const double u_mean = 0.5 * (u_new[j - 1] + u_new[j]);
                cond[j] = params.conductivity(theta_mean) / (h * h * u_mean);
            }
        }
        for (int i = 0; i < n; ++i) {
            const double vx = vel_x[i] + (wform ? u_new[i] : 0.0);
            const double mu_new = effective_viscosity(params, f, u_new[i], t_new);
            diag_t[i] = 1.0 + half * vx / u_new[i] + half * (cond[i] + cond[i + 1]);
            rhs_t[i] = rhs_theta[i] + half * mu_new * vx * vx / u_new[i];
        }
        for (int i = 0; i + 1 < n; ++i) {
            lower_t[i] = -half * cond[i + 1];
            upper_t[i] = -half * cond[i + 1];
        }

        std::vector<double> theta_new;
        try {
            theta_new = solve_tridiagonal(lower_t, diag_t, upper_t, rhs_t);
        } catch (const NumericalError&) {
            return reject("theta", -1, 0.0, k);
        }
        if (const int bad = first_inadmissible(theta_new, 0.0); bad >= 0) {
            return reject("theta", bad, theta_new[bad], k);
        }

        const double change = std::max({max_abs_diff(u_new, it.u), max_abs_diff(vel_new, it.vel),
                                         max_abs_diff(theta_new, it.theta)});
        it.u = std::move(u_new);
        it.vel = std::move(vel_new);
        it.theta = std::move(theta_new);

        if (change <= cfg.picard_tol) {
            if (const int bad = first_inadmissible(it.u, cfg.positivity_floor); bad >= 0) {
                return reject("u", bad, it.u[bad], k);
            }
            if (const int bad = first_inadmissible(it.theta, cfg.positivity_floor); bad >= 0) {
                return reject("theta", bad, it.theta[bad], k);
            }
            Attempt ok;
            ok.ok = true;
            ok.state = std::move(it);
            ok.iterations = k;
            return ok;
        }
    }
    return reject("picard", -1, 0.0, cfg.picard_max);
}

} // namespace

StepResult step(const State& s, const PhysParams& params, const SchemeConfig& cfg, double dt_trial) {
    s.validate();
    double dt = std::isnan(dt_trial) ? cfg.dt_init : std::min(dt_trial, cfg.dt_max);
    if (!(dt > 0.0)) {
        throw DomainError("step: trial dt must be positive");
    }
    int rejections = 0;
    while (true) {
        Attempt attempt = trapezoid_step(s, params, cfg, dt);
        if (attempt.ok) {
            StepResult result{std::move(attempt.state), {}};
            StepReport& r = result.report;
            r.dt = dt;
            r.picard_iterations = attempt.iterations;
            r.rejections = rejections;
            r.u_min = *std::min_element(result.state.u.begin(), result.state.u.end());
            r.theta_min = *std::min_element(result.state.theta.begin(), result.state.theta.end());
            const int easy = std::max(2, cfg.picard_max / 4);
            r.dt_next = (rejections == 0 && attempt.iterations <= easy) ? std::min(dt / cfg.safety, cfg.dt_max) : dt;
            return result;
        }
        ++rejections;
        if (dt * 0.5 < cfg.dt_min) {
            throw StepFailure(attempt.field, attempt.index, attempt.value, s.time, dt);
        }
        dt *= 0.5;
    }
}

StepResult step_scaled(const State& s, const PhysParams& params, const SchemeConfig& cfg, double dt_trial) {
    if (s.formulation != Formulation::Scaled) {
        throw StructuralError("step_scaled: expected a scaled state");
    }
    return step(s, params, cfg, dt_trial);
}

StepResult step_original(const State& s, const PhysParams& params, const SchemeConfig& cfg, double dt_trial) {
    if (s.formulation != Formulation::Original) {
        throw StructuralError("step_original: expected an original-time state");
    }
    return step(s, params, cfg, dt_trial);
}

Integrator::Integrator(PhysParams params, SchemeConfig cfg)
    : params_(params), cfg_(cfg), dt_(cfg.dt_init) {
    params_.validate();
    cfg_.validate();
}

void Integrator::advance_to(State& s, double t_target, const StepCallback& on_step) {
    const double eps = 1e-13 * std::max(1.0, std::abs(t_target));
    while (t_target - s.time > eps) {
        const double remaining = t_target - s.time;
        double dt_try = dt_;
        bool last = false;
        if (remaining <= dt_ * (1.0 + 1e-12)) {
            dt_try = remaining;
            last = true;
        } else if (remaining < 2.0 * dt_) {
            dt_try = 0.5 * remaining;
        }
        StepResult result = step(s, params_, cfg_, dt_try);
        const StepReport& r = result.report;
        if (last && r.rejections == 0) {
            result.state.time = t_target;
        }
        if (r.rejections > 0 || dt_try >= dt_) {
            dt_ = r.dt_next;
        }

        ++stats_.steps;
        stats_.rejections += r.rejections;
        stats_.picard_iterations += r.picard_iterations;
        stats_.max_picard = std::max(stats_.max_picard, r.picard_iterations);
        stats_.dt_smallest = std::min(stats_.dt_smallest, r.dt);
        stats_.dt_largest = std::max(stats_.dt_largest, r.dt);
        stats_.u_min = std::min(stats_.u_min, r.u_min);
        stats_.theta_min = std::min(stats_.theta_min, r.theta_min);

        if (on_step) {
            on_step(s, result.state, r);
        }
        s = std::move(result.state);
    }
}

} // namespace lns1d
