#include "lns1d/operators.hpp"

#include <cmath>
#include <string>

#include "lns1d/calculus.hpp"
#include "lns1d/errors.hpp"
#include "lns1d/tridiagonal.hpp"

namespace lns1d {
namespace {

void require_positive(const std::vector<double>& f, const char* name, const char* op) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(f[i] > 0.0)) {
            throw DomainError(std::string(op) + ": nonpositive " + name + " at cell " + std::to_string(i));
        }
    }
}

void require_shape(const State& s) {
    const auto n = s.u.size();
    if (n < 4 || s.theta.size() != n || s.vel.size() != n + 1) {
        throw StructuralError("state has inconsistent field lengths");
    }
}

} // namespace

double boundary_stress(Formulation f) {
    return f == Formulation::WForm ? -1.0 : 0.0;
}

double effective_viscosity(const PhysParams& params, Formulation f, double u, double time) {
    if (params.alpha == 0.0) {
        return 1.0;
    }
    const double volume = (f == Formulation::Original) ? u : u * std::exp(time);
    return params.viscosity(volume);
}

std::vector<double> physical_velocity_gradient(const State& s) {
    require_shape(s);
    auto g = cell_gradient(s.vel, s.grid());
    if (s.formulation == Formulation::WForm) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] += s.u[i];
        }
    }
    return g;
}

std::vector<double> stress_field(const State& s, const PhysParams& params) {
    require_shape(s);
    require_positive(s.u, "u", "stress_field");
    const auto vx = physical_velocity_gradient(s);
    const double shift = boundary_stress(s.formulation);
    std::vector<double> sigma(s.u.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const double mu = effective_viscosity(params, s.formulation, s.u[i], s.time);
        sigma[i] = (mu * vx[i] - s.theta[i]) / s.u[i] + shift;
    }
    return sigma;
}

std::vector<double> heat_flux_field(const State& s, const PhysParams& params) {
    require_shape(s);
    require_positive(s.theta, "theta", "heat_flux_field");
    require_positive(s.u, "u", "heat_flux_field");
    const Grid grid = s.grid();
    const int n = grid.cells();
    std::vector<double> q(n + 1, 0.0);
    if (!params.conduction) {
        return q;
    }
    for (int j = 1; j < n; ++j) {
        const double theta_mean = 0.5 * (s.theta[j - 1] + s.theta[j]);
        const double u_mean = 0.5 * (s.u[j - 1] + s.u[j]);
        q[j] = params.conductivity(theta_mean) * (s.theta[j] - s.theta[j - 1]) / grid.dx() / u_mean;
    }
    return q;
}

std::vector<double> momentum_forcing(const std::vector<double>& stress, double sigma_b) {
    const std::size_t n = stress.size();
    std::vector<double> b(n + 1);
    b[0] = stress[0] - sigma_b;
    for (std::size_t j = 1; j < n; ++j) {
        b[j] = stress[j] - stress[j - 1];
    }
    b[n] = sigma_b - stress[n - 1];
    return b;
}

std::vector<double> mass_solve(const std::vector<double>& rhs, const Grid& grid) {
    const int n = grid.cells();
    if (static_cast<int>(rhs.size()) != n + 1) {
        throw StructuralError("mass_solve: expected node-length right-hand side");
    }
    const double h = grid.dx();
    std::vector<double> off(n, h / 6.0);
    std::vector<double> diag(n + 1, 2.0 * h / 3.0);
    diag.front() = diag.back() = h / 3.0;
    return solve_tridiagonal(off, diag, off, rhs);
}

Rates rhs(const State& s, const PhysParams& params) {
    require_shape(s);
    require_positive(s.u, "u", "rhs");
    require_positive(s.theta, "theta", "rhs");
    const Grid grid = s.grid();
    const int n = grid.cells();
    const Formulation f = s.formulation;
    const double sigma_b = boundary_stress(f);

    const auto vel_x = cell_gradient(s.vel, grid);
    const auto vx = physical_velocity_gradient(s);
    const auto sigma = stress_field(s, params);
    const auto q = heat_flux_field(s, params);

    Rates r;
    r.u.resize(n);
    r.theta.resize(n);
    for (int i = 0; i < n; ++i) {
        r.u[i] = vel_x[i] - (f == Formulation::Scaled ? s.u[i] : 0.0);
        // (sigma - sigma_b) is the physical stress; its product with v_x is the heating.
        r.theta[i] = (sigma[i] - sigma_b) * vx[i] + (q[i + 1] - q[i]) / grid.dx();
    }
    r.vel = mass_solve(momentum_forcing(sigma, sigma_b), grid);
    if (f == Formulation::WForm) {
        for (int j = 0; j <= n; ++j) {
            r.vel[j] -= s.vel[j];
        }
    }
    return r;
}

Rates rhs_scaled(const State& s, const PhysParams& params) {
    if (s.formulation != Formulation::Scaled) {
        throw StructuralError("rhs_scaled: expected a scaled state");
    }
    return rhs(s, params);
}

} // namespace lns1d
