/// @file transforms.hpp
/// @brief Exact maps between the original, scaled and outer-pressure (w) formulations,
///        and the H1 distance to the asymptotic state.
#pragma once

#include "lns1d/core.hpp"

namespace lns1d {

/// u <- u/(1+t), t <- log(1+t). Requires an Original state with t >= 0.
State to_scaled(const State& s);

/// u <- u*exp(t_hat), t <- exp(t_hat) - 1. Requires a Scaled state.
State from_scaled(const State& s);

/// w_j = v_j - v0_mean - C_j + int_0^1 C, with C_j the cumulative integral of u to x_j.
/// Cell differences of w equal v_x - u exactly; int w = 0 whenever int v = v0_mean.
State build_w(const State& s, double v0_mean);

/// Inverse of build_w.
State w_to_v(const State& s, double v0_mean);

/// H1 distance of a Scaled state from (A, v0_mean + A(x-1/2), A): the square root of the
/// summed squared L2 norms of each deviation and of its difference quotients.
double h1_distance(const State& s, const InitialDataSummary& summary);

} // namespace lns1d
