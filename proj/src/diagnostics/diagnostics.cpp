#include "lns1d/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lns1d/calculus.hpp"
#include "lns1d/errors.hpp"
#include "lns1d/transforms.hpp"

namespace lns1d {
namespace {

void require_shape(const State& s) {
    const auto n = s.u.size();
    if (n < 4 || s.theta.size() != n || s.vel.size() != n + 1) {
        throw StructuralError("state has inconsistent field lengths");
    }
}

void require_positive(const State& s, const char* op) {
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        if (!(s.u[i] > 0.0) || !(s.theta[i] > 0.0)) {
            throw DomainError(std::string(op) + ": nonpositive u or theta at cell " + std::to_string(i));
        }
    }
}

double entropy_integrand(double x) {
    return x - std::log(x) - 1.0;
}

// Temperature gradient per cell from interior-node differences.
std::vector<double> cell_temperature_gradient(const State& s) {
    const Grid grid = s.grid();
    const int n = grid.cells();
    const auto g = interior_node_gradient(s.theta, grid); // g[j-1] at node j
    std::vector<double> out(n);
    out[0] = g.front();
    out[n - 1] = g.back();
    for (int i = 1; i + 1 < n; ++i) {
        out[i] = 0.5 * (g[i - 1] + g[i]);
    }
    return out;
}

// psi at nodes from a WForm state.
std::vector<double> psi_field(const State& w_state, double A) {
    const Grid grid = w_state.grid();
    std::vector<double> dev(w_state.u.size());
    for (std::size_t i = 0; i < dev.size(); ++i) {
        dev[i] = w_state.u[i] - A;
    }
    const auto cum = cumulative_integral(dev, grid);
    const double mean = node_integral(cum, grid);
    std::vector<double> psi(w_state.vel.size());
    for (std::size_t j = 0; j < psi.size(); ++j) {
        psi[j] = w_state.vel[j] + cum[j] - mean;
    }
    return psi;
}

} // namespace

double asymptotic_constant(double E0, double v0_mean) {
    return 2.0 * std::sqrt(36.0 + 3.0 * (2.0 * E0 - v0_mean * v0_mean)) - 12.0;
}

std::pair<double, double> entropy_roots(double e0) {
    if (!(e0 >= 0.0) || !std::isfinite(e0)) {
        throw DomainError("entropy_roots: e0 must be finite and >= 0");
    }
    if (e0 == 0.0) {
        return {1.0, 1.0};
    }
    auto f = [e0](double x) { return entropy_integrand(x) - e0; };

    auto bisect = [&f](double neg, double pos) {
        // f(neg) <= 0 < f(pos); relative tolerance so that tiny lower roots are resolved
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (neg + pos);
            if (std::abs(pos - neg) <= 1e-12 * mid) {
                break;
            }
            (f(mid) > 0.0 ? pos : neg) = mid;
        }
        return 0.5 * (neg + pos);
    };

    double lo = 0.5;
    while (f(lo) <= 0.0) {
        lo *= 0.5;
        if (lo < 1e-300) {
            throw NumericalError("entropy_roots: failed to bracket the lower root");
        }
    }
    double hi = 2.0;
    while (f(hi) <= 0.0) {
        hi *= 2.0;
        if (!std::isfinite(hi) || hi > 1e300) {
            throw NumericalError("entropy_roots: failed to bracket the upper root");
        }
    }
    return {bisect(1.0, lo), bisect(1.0, hi)};
}

InitialDataSummary compute_summary(const State& initial, const PhysParams& params) {
    params.validate();
    if (initial.formulation != Formulation::Scaled) {
        throw StructuralError("compute_summary: expected a scaled initial state");
    }
    initial.validate();
    const Grid grid = initial.grid();

    InitialDataSummary s;
    const double kinetic = kinetic_energy(initial);
    s.E0 = kinetic + discrete_integral(initial.theta, grid);
    s.v0_mean = node_integral(initial.vel, grid);
    s.A = asymptotic_constant(s.E0, s.v0_mean);
    s.e0 = kinetic + entropy_functional(initial) + 2.0 * std::sqrt(2.0 * s.E0);
    const auto [a1, a2] = entropy_roots(s.e0);
    s.alpha1 = a1;
    s.alpha2 = a2;
    return s;
}

double kinetic_energy(const State& s) {
    require_shape(s);
    return 0.5 * node_l2_squared(s.vel, s.grid());
}

double total_energy(const State& s) {
    return kinetic_energy(s) + discrete_integral(s.theta, s.grid());
}

double momentum(const State& s) {
    require_shape(s);
    return node_integral(s.vel, s.grid());
}

double entropy_functional(const State& s) {
    require_shape(s);
    double sum = 0.0;
    for (double th : s.theta) {
        if (!(th > 0.0)) {
            throw DomainError("entropy_functional: nonpositive theta");
        }
        sum += entropy_integrand(th);
    }
    return sum * s.grid().dx();
}

double dissipation_V(const State& s, const PhysParams& params) {
    require_shape(s);
    if (s.formulation == Formulation::Original) {
        throw StructuralError("dissipation_V: expected a scaled or w-form state");
    }
    require_positive(s, "dissipation_V");
    const Grid grid = s.grid();
    const auto vel_x = cell_gradient(s.vel, grid);
    const auto theta_x = cell_temperature_gradient(s);
    double sum = 0.0;
    for (int i = 0; i < grid.cells(); ++i) {
        const double u = s.u[i];
        const double th = s.theta[i];
        // v_x - theta for Scaled, w_x + u - theta for WForm.
        const double z = vel_x[i] + (s.formulation == Formulation::WForm ? u : 0.0) - th;
        sum += params.conductivity(th) * theta_x[i] * theta_x[i] / (u * th * th) + z * z / (u * th);
    }
    return sum * grid.dx();
}

double gradient_energy(const State& s) {
    require_shape(s);
    if (s.formulation != Formulation::Scaled) {
        throw StructuralError("gradient_energy: expected a scaled state");
    }
    const Grid grid = s.grid();
    double sum = 0.0;
    for (double g : interior_node_gradient(s.u, grid)) {
        sum += g * g;
    }
    for (double g : interior_node_gradient(s.theta, grid)) {
        sum += g * g;
    }
    const auto vel_x = cell_gradient(s.vel, grid);
    for (int i = 0; i < grid.cells(); ++i) {
        const double wx = vel_x[i] - s.u[i];
        sum += wx * wx;
    }
    return sum * grid.dx();
}

DiagnosticsRecord make_record(const State& s, const InitialDataSummary& summary, const PhysParams& params) {
    if (s.formulation != Formulation::Scaled) {
        throw StructuralError("make_record: expected a scaled state");
    }
    const Grid grid = s.grid();
    DiagnosticsRecord r;
    r.time = s.time;
    r.theta_bar = discrete_integral(s.theta, grid);
    r.E = kinetic_energy(s) + r.theta_bar;
    r.momentum = momentum(s);
    r.entropy = entropy_functional(s);
    r.V = dissipation_V(s, params);
    const auto [umin, umax] = std::minmax_element(s.u.begin(), s.u.end());
    const auto [tmin, tmax] = std::minmax_element(s.theta.begin(), s.theta.end());
    r.u_min = *umin;
    r.u_max = *umax;
    r.theta_min = *tmin;
    r.theta_max = *tmax;
    r.h1_dist = h1_distance(s, summary);
    r.psi_energy = psi_energy(build_w(s, summary.v0_mean), summary);
    return r;
}

EntropyCheck entropy_estimate_check(std::span<const DiagnosticsRecord> records, const InitialDataSummary& summary) {
    if (records.empty()) {
        throw StructuralError("entropy_estimate_check: empty record series");
    }
    double dissipated = 0.0;
    for (std::size_t k = 1; k < records.size(); ++k) {
        const double dt = records[k].time - records[k - 1].time;
        if (!(dt > 0.0)) {
            throw StructuralError("entropy_estimate_check: record times must increase");
        }
        dissipated += 0.5 * dt * (records[k].V + records[k - 1].V);
    }
    const DiagnosticsRecord& last = records.back();
    EntropyCheck c;
    c.lhs = (last.E - last.theta_bar) + last.entropy + dissipated;
    c.bound = summary.e0;
    c.margin = c.bound - c.lhs;
    c.pass = c.lhs <= summary.e0 * (1.0 + 1e-6);
    return c;
}

std::vector<double> B_field(const State& s, const State& initial) {
    require_shape(s);
    require_shape(initial);
    if (s.u.size() != initial.u.size()) {
        throw StructuralError("B_field: grid mismatch");
    }
    const Grid grid = s.grid();
    std::vector<double> diff(s.vel.size());
    for (std::size_t j = 0; j < diff.size(); ++j) {
        diff[j] = s.vel[j] - initial.vel[j];
    }
    auto b = cumulative_node_integral_to_centers(diff, grid);
    for (double& x : b) {
        x = std::exp(x);
    }
    return b;
}

std::vector<double> u_representation_oracle(const History& history, const State& initial, const PhysParams& params) {
    if (history.size() < 3) {
        throw StructuralError("u_representation_oracle: need at least 3 history samples");
    }
    return u_representation_oracle(history, initial, params, history.size() - 1);
}

std::vector<double> u_representation_oracle(const History& history, const State& initial, const PhysParams& params,
                                            std::size_t upto) {
    (void)params;
    if (history.size() < 3) {
        throw StructuralError("u_representation_oracle: need at least 3 history samples");
    }
    if (upto >= history.size()) {
        throw StructuralError("u_representation_oracle: sample index out of range");
    }
    if (initial.formulation != Formulation::Scaled || history[0].time != initial.time) {
        throw StructuralError("u_representation_oracle: history must start at the scaled initial state");
    }
    const std::size_t n = initial.u.size();
    std::vector<double> integral(n, 0.0);
    std::vector<double> prev(n);
    {
        const auto b = B_field(history[0], initial);
        for (std::size_t i = 0; i < n; ++i) {
            prev[i] = history[0].theta[i] * std::exp(history.time(0)) / b[i];
        }
    }
    std::vector<double> b_last = B_field(history[0], initial);
    for (std::size_t k = 1; k <= upto; ++k) {
        const State& s = history[k];
        if (s.u.size() != n) {
            throw StructuralError("u_representation_oracle: grid mismatch in history");
        }
        const double ds = history.time(k) - history.time(k - 1);
        b_last = B_field(s, initial);
        const double es = std::exp(s.time);
        for (std::size_t i = 0; i < n; ++i) {
            const double cur = s.theta[i] * es / b_last[i];
            integral[i] += 0.5 * ds * (prev[i] + cur);
            prev[i] = cur;
        }
    }
    const double t_end = history.time(upto);
    std::vector<double> u(n);
    const double decay = std::exp(-(t_end - initial.time));
    for (std::size_t i = 0; i < n; ++i) {
        // With t0 = 0 this is B(T) e^{-T}(u0 + int_0^T theta e^s / B ds).
        u[i] = b_last[i] * decay * (initial.u[i] + std::exp(-initial.time) * integral[i]);
    }
    return u;
}

double psi_energy(const State& w_state, const InitialDataSummary& summary) {
    require_shape(w_state);
    if (w_state.formulation != Formulation::WForm) {
        throw StructuralError("psi_energy: expected a w-form state");
    }
    const Grid grid = w_state.grid();
    const double A = summary.A;
    const auto psi = psi_field(w_state, A);
    double thermal = 0.0;
    for (double th : w_state.theta) {
        if (!(th > 0.0)) {
            throw DomainError("psi_energy: nonpositive theta");
        }
        thermal += entropy_integrand(th / A);
    }
    return 0.5 * node_l2_squared(psi, grid) + A * thermal * grid.dx();
}

double psi_dissipation(const State& w_state, const InitialDataSummary& summary, const PhysParams& params) {
    require_shape(w_state);
    if (w_state.formulation != Formulation::WForm) {
        throw StructuralError("psi_dissipation: expected a w-form state");
    }
    require_positive(w_state, "psi_dissipation");
    (void)summary;
    const Grid grid = w_state.grid();
    const int n = grid.cells();
    const auto w_x = cell_gradient(w_state.vel, grid);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = w_x[i] + w_state.u[i] - w_state.theta[i];
        sum += z * z / (w_state.u[i] * w_state.theta[i]);
    }
    if (params.conduction) {
        for (int j = 1; j < n; ++j) {
            const double tl = w_state.theta[j - 1];
            const double tr = w_state.theta[j];
            const double g = (tr - tl) / grid.dx();
            const double u_mean = 0.5 * (w_state.u[j - 1] + w_state.u[j]);
            sum += params.conductivity(0.5 * (tl + tr)) * g * g / (u_mean * tl * tr);
        }
    }
    return sum * grid.dx();
}

double psi_identity_residual(const State& s1, const State& s2, double dt, const InitialDataSummary& summary,
                             const PhysParams& params) {
    if (s1.formulation != Formulation::WForm || s2.formulation != Formulation::WForm) {
        throw StructuralError("psi_identity_residual: expected w-form states");
    }
    if (s1.u.size() != s2.u.size()) {
        throw StructuralError("psi_identity_residual: grid mismatch");
    }
    if (!(dt > 0.0)) {
        throw DomainError("psi_identity_residual: dt must be positive");
    }
    const double change = (psi_energy(s2, summary) - psi_energy(s1, summary)) / dt;
    const double dissipation =
        0.5 * (psi_dissipation(s1, summary, params) + psi_dissipation(s2, summary, params));
    return std::abs(change + summary.A * dissipation);
}

DecayFit decay_fit(std::span<const double> t, std::span<const double> h, double threshold_hi, double threshold_lo) {
    if (t.size() != h.size()) {
        throw StructuralError("decay_fit: time and value series differ in length");
    }
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (!(t[k] > t[k - 1])) {
            throw StructuralError("decay_fit: times must be strictly increasing");
        }
    }
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (h[k] > threshold_lo && h[k] < threshold_hi) {
            xs.push_back(t[k]);
            ys.push_back(std::log(h[k]));
        }
    }
    if (xs.size() < 10) {
        throw InsufficientDataError("decay_fit: " + std::to_string(xs.size()) +
                                    " samples in the threshold window, need 10");
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
        syy += (ys[k] - my) * (ys[k] - my);
    }
    const double slope = sxy / sxx;
    DecayFit fit;
    fit.t_start = xs.front();
    fit.t_end = xs.back();
    fit.lambda_hat = -slope;
    fit.intercept = my - slope * mx;
    fit.points = xs.size();
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const double r = ys[k] - (fit.intercept + slope * xs[k]);
            ss_res += r * r;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

BoundsTracker::BoundsTracker(const InitialDataSummary& summary)
    : alpha1_(summary.alpha1), alpha2_(summary.alpha2) {}

void BoundsTracker::add(const DiagnosticsRecord& r) {
    const double m = std::max(r.u_max, 1.0 / r.u_min);
    if (count_ == 0) {
        acc_.M_hat = m;
        acc_.N_hat_inv = r.theta_min;
        acc_.N_hat = r.theta_max;
        acc_.theta_bar_min = acc_.theta_bar_max = r.theta_bar;
    } else {
        acc_.M_hat = std::max(acc_.M_hat, m);
        acc_.N_hat_inv = std::min(acc_.N_hat_inv, r.theta_min);
        acc_.N_hat = std::max(acc_.N_hat, r.theta_max);
        acc_.theta_bar_min = std::min(acc_.theta_bar_min, r.theta_bar);
        acc_.theta_bar_max = std::max(acc_.theta_bar_max, r.theta_bar);
    }
    if (r.theta_bar < alpha1_ - 1e-6 || r.theta_bar > alpha2_ + 1e-6) {
        acc_.bracket_flags.push_back(r.time);
    }
    ++count_;
}

BoundsReport BoundsTracker::report() const {
    if (count_ == 0) {
        throw StructuralError("bounds_tracker: empty record stream");
    }
    return acc_;
}

BoundsReport bounds_tracker(std::span<const DiagnosticsRecord> records, const InitialDataSummary& summary) {
    BoundsTracker tracker(summary);
    for (const auto& r : records) {
        tracker.add(r);
    }
    return tracker.report();
}

} // namespace lns1d
