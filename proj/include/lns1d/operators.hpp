/// @file operators.hpp
/// @brief Semi-discrete spatial operators for the three formulations.
///
/// Momentum is discretized with the P1 mass matrix M acting on node velocities:
///   M vel_t (+ M w for the w-form) = b,   b_j = sigma_j - sigma_{j-1},
/// where sigma_{-1} = sigma_n is the boundary stress (0 for the stress-free systems, -1 for
/// the outer-pressure w-form). The row sums of M are the trapezoid weights, so momentum is
/// the trapezoid integral of vel and kinetic energy is vel^T M vel / 2.
#pragma once

#include <vector>

#include "lns1d/core.hpp"

namespace lns1d {

/// Boundary value of the formulation's stress: 0 (Original, Scaled) or -1 (WForm).
double boundary_stress(Formulation f);

/// Viscosity for a stored specific volume; Scaled/WForm volumes are rescaled by exp(t_hat)
/// before evaluating mu, which only matters when alpha > 0.
double effective_viscosity(const PhysParams& params, Formulation f, double u, double time);

/// Cell stress of the formulation:
///   Original/Scaled: (mu v_x - theta)/u
///   WForm:           (mu (w_x + u) - theta)/u - 1   (= (w_x - theta)/u for alpha = 0)
std::vector<double> stress_field(const State& s, const PhysParams& params);

/// Conductive flux at nodes: interior q_j = kappa(mean theta) (theta_j - theta_{j-1})/dx / mean u,
/// q_0 = q_n = 0.
std::vector<double> heat_flux_field(const State& s, const PhysParams& params);

/// Momentum forcing b (n+1 values) from a cell stress and the boundary stress.
std::vector<double> momentum_forcing(const std::vector<double>& stress, double sigma_b);

/// Physical velocity gradient at cells: v_x, or w_x + u in the w-form.
std::vector<double> physical_velocity_gradient(const State& s);

struct Rates {
    std::vector<double> u;
    std::vector<double> vel;
    std::vector<double> theta;
};

/// Time derivatives of the semi-discrete system in the state's own formulation and clock.
Rates rhs(const State& s, const PhysParams& params);

/// rhs() restricted to Scaled states.
Rates rhs_scaled(const State& s, const PhysParams& params);

/// Solves M x = rhs for the P1 mass matrix.
std::vector<double> mass_solve(const std::vector<double>& rhs, const Grid& grid);

} // namespace lns1d
