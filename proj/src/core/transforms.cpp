#include "lns1d/transforms.hpp"

#include <cmath>

#include "lns1d/calculus.hpp"
#include "lns1d/errors.hpp"

namespace lns1d {
namespace {

void require_formulation(const State& s, Formulation expected, const char* op) {
    if (s.formulation != expected) {
        throw StructuralError(std::string(op) + ": expected a " + std::string(to_string(expected)) +
                              " state, got " + std::string(to_string(s.formulation)));
    }
}

void require_shape(const State& s) {
    const auto n = s.u.size();
    if (n < 4 || s.theta.size() != n || s.vel.size() != n + 1) {
        throw StructuralError("state has inconsistent field lengths");
    }
}

// Squared L2 norm of a cell field and of its interior-node difference quotients.
double cell_h1_squared(const std::vector<double>& dev, const Grid& grid) {
    double l2 = 0.0;
    for (double d : dev) {
        l2 += d * d;
    }
    double grad = 0.0;
    for (double g : interior_node_gradient(dev, grid)) {
        grad += g * g;
    }
    return (l2 + grad) * grid.dx();
}

} // namespace

State to_scaled(const State& s) {
    require_formulation(s, Formulation::Original, "to_scaled");
    require_shape(s);
    if (!(s.time >= 0.0)) {
        throw DomainError("to_scaled: time must be >= 0");
    }
    State out = s;
    const double stretch = 1.0 + s.time;
    for (double& u : out.u) {
        u /= stretch;
    }
    out.time = std::log1p(s.time);
    out.formulation = Formulation::Scaled;
    return out;
}

State from_scaled(const State& s) {
    require_formulation(s, Formulation::Scaled, "from_scaled");
    require_shape(s);
    State out = s;
    const double stretch = std::exp(s.time);
    for (double& u : out.u) {
        u *= stretch;
    }
    out.time = std::expm1(s.time);
    out.formulation = Formulation::Original;
    return out;
}

State build_w(const State& s, double v0_mean) {
    require_formulation(s, Formulation::Scaled, "build_w");
    require_shape(s);
    const Grid grid = s.grid();
    const auto cum = cumulative_integral(s.u, grid);
    const double double_integral = node_integral(cum, grid);
    State out = s;
    for (int j = 0; j < grid.nodes(); ++j) {
        out.vel[j] = s.vel[j] - v0_mean - cum[j] + double_integral;
    }
    out.formulation = Formulation::WForm;
    return out;
}

State w_to_v(const State& s, double v0_mean) {
    require_formulation(s, Formulation::WForm, "w_to_v");
    require_shape(s);
    const Grid grid = s.grid();
    const auto cum = cumulative_integral(s.u, grid);
    const double double_integral = node_integral(cum, grid);
    State out = s;
    for (int j = 0; j < grid.nodes(); ++j) {
        out.vel[j] = s.vel[j] + v0_mean + cum[j] - double_integral;
    }
    out.formulation = Formulation::Scaled;
    return out;
}

double h1_distance(const State& s, const InitialDataSummary& summary) {
    require_formulation(s, Formulation::Scaled, "h1_distance");
    require_shape(s);
    const Grid grid = s.grid();
    const int n = grid.cells();
    const double A = summary.A;

    std::vector<double> du(n), dtheta(n);
    for (int i = 0; i < n; ++i) {
        du[i] = s.u[i] - A;
        dtheta[i] = s.theta[i] - A;
    }
    std::vector<double> dv(n + 1);
    for (int j = 0; j <= n; ++j) {
        dv[j] = s.vel[j] - summary.v0_mean - A * (grid.node(j) - 0.5);
    }
    // Trapezoid L2 of the node deviation plus midpoint L2 of its cell differences.
    std::vector<double> dv2(n + 1);
    for (int j = 0; j <= n; ++j) {
        dv2[j] = dv[j] * dv[j];
    }
    double v_part = node_integral(dv2, grid);
    for (double g : cell_gradient(dv, grid)) {
        v_part += g * g * grid.dx();
    }

    return std::sqrt(cell_h1_squared(du, grid) + v_part + cell_h1_squared(dtheta, grid));
}

} // namespace lns1d
