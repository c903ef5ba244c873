/// @file tridiagonal.hpp
/// @brief Thomas algorithm for tridiagonal systems.
#pragma once

#include <span>
#include <vector>

namespace lns1d {

/// Solves the system with sub-diagonal `lower` (size n-1), diagonal `diag` (size n),
/// super-diagonal `upper` (size n-1). Row i reads
///   lower[i-1]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i].
/// No pivoting; a zero (or non-finite) pivot throws NumericalError.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

} // namespace lns1d
