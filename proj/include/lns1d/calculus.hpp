/// @file calculus.hpp
/// @brief Discrete differences, quadratures and the P1 mass matrix on the staggered grid.
///
/// Cell fields are integrated with the midpoint rule, node fields with the trapezoid rule.
/// Quadratic node quantities (kinetic energy) use the exact integral of the piecewise-linear
/// interpolant, i.e. the P1 mass matrix, whose row sums equal the trapezoid weights.
#pragma once

#include <span>
#include <vector>

#include "lns1d/core.hpp"

namespace lns1d {

/// Midpoint rule: sum field[i] * dx over the n cells.
double discrete_integral(std::span<const double> cells, const Grid& grid);

/// Trapezoid rule over the n+1 nodes.
double node_integral(std::span<const double> nodes, const Grid& grid);

/// a^T M b with M the P1 mass matrix: exact integral of the product of two
/// piecewise-linear node fields.
double node_inner(std::span<const double> a, std::span<const double> b, const Grid& grid);

/// Exact integral of the square of the piecewise-linear interpolant of a node field.
double node_l2_squared(std::span<const double> nodes, const Grid& grid);

/// Returns M * v.
std::vector<double> mass_apply(std::span<const double> nodes, const Grid& grid);

/// (f_{i+1} - f_i)/dx for a node field: one value per cell.
std::vector<double> cell_gradient(std::span<const double> nodes, const Grid& grid);

/// (f_j - f_{j-1})/dx for a cell field at the n-1 interior nodes j = 1..n-1.
std::vector<double> interior_node_gradient(std::span<const double> cells, const Grid& grid);

/// C_j = sum_{i<j} f_i dx, the midpoint-cumulative integral from 0 to x_j (n+1 values).
std::vector<double> cumulative_integral(std::span<const double> cells, const Grid& grid);

/// Cumulative integral of a node field from 0 to each cell center, consistent with the
/// mass matrix: value i is sum_{j<=i} (M f)_j. Exact for constants, O(dx^2) otherwise.
std::vector<double> cumulative_node_integral_to_centers(std::span<const double> nodes, const Grid& grid);

double max_abs(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

} // namespace lns1d
