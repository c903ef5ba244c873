/// @file diagnostics.hpp
/// @brief Functionals monitored along scaled trajectories, and the oracles that check them.
///
/// Conventions shared by every functional here:
///   - kinetic energy is vel^T M vel / 2 (exact for piecewise-linear velocity)
///   - cell integrands use the midpoint rule, momentum uses the trapezoid rule
///   - temperature gradients are taken at interior nodes
#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "lns1d/core.hpp"

namespace lns1d {

struct DecayFit {
    double t_start = 0.0;
    double t_end = 0.0;
    double lambda_hat = 0.0; ///< decay rate per unit scaled time
    double intercept = 0.0;  ///< of log(h1) at t = 0
    double r_squared = 0.0;
    std::size_t points = 0;
};

struct BoundsReport {
    double M_hat = 0.0;     ///< max over the run of max(u, 1/u)
    double N_hat_inv = 0.0; ///< min over the run of theta
    double N_hat = 0.0;     ///< max over the run of theta
    double theta_bar_min = 0.0;
    double theta_bar_max = 0.0;
    std::vector<double> bracket_flags; ///< sample times with theta_bar outside [alpha1, alpha2] (+-1e-6)
};

struct EntropyCheck {
    bool pass = false;
    double lhs = 0.0;   ///< int (v^2/2 + theta - log theta - 1)(T) + int_0^T V
    double bound = 0.0; ///< e0
    double margin = 0.0;
};

// ---------------------------------------------------------------------------
// Initial-data constants
// ---------------------------------------------------------------------------

/// E0, mean velocity, A (closed form), e0 and the two roots of x - log x - 1 = e0.
/// The state must be Scaled (at t_hat = 0 it coincides with the original one).
InitialDataSummary compute_summary(const State& initial, const PhysParams& params);

/// Roots 0 < alpha1 <= 1 <= alpha2 of x - log x - 1 = e0, by bisection to 1e-12.
std::pair<double, double> entropy_roots(double e0);

/// 2 sqrt(36 + 3(2 E0 - vbar^2)) - 12.
double asymptotic_constant(double E0, double v0_mean);

// ---------------------------------------------------------------------------
// Functionals of one state
// ---------------------------------------------------------------------------

double kinetic_energy(const State& s);
double total_energy(const State& s);
double momentum(const State& s);
double entropy_functional(const State& s); ///< int (theta - log theta - 1)

/// int ( theta^beta theta_x^2 / (u theta^2) + (w_x + u - theta)^2 / (u theta) ).
/// For Scaled input w_x + u - theta is v_x - theta. Boundary cells take the gradient at
/// their single interior node; other cells average the two adjacent node gradients.
double dissipation_V(const State& s, const PhysParams& params);

/// int (u_x^2 + w_x^2 + theta_x^2) for a Scaled state (w_x = v_x - u).
double gradient_energy(const State& s);

/// Full record at one sample of a Scaled trajectory.
DiagnosticsRecord make_record(const State& s, const InitialDataSummary& summary, const PhysParams& params);

// ---------------------------------------------------------------------------
// Oracles and checks
// ---------------------------------------------------------------------------

/// Lemma-style entropy-dissipation bound evaluated from a record series:
/// time integral of V by the trapezoid rule over the record times.
EntropyCheck entropy_estimate_check(std::span<const DiagnosticsRecord> records, const InitialDataSummary& summary);

/// exp of the cumulative integral of (v - v0) from 0 to each cell center. The cumulative
/// integral is the mass-matrix-consistent one, so B reproduces the scheme's momentum balance.
std::vector<double> B_field(const State& s, const State& initial);

/// Reconstructs u at the last history sample from velocity and temperature alone:
///   u(T) = B(T) e^{-T} (u0 + int_0^T theta e^s / B(s) ds),
/// trapezoid rule in s over the history samples. Needs at least 3 samples, the first of
/// which is the initial state.
std::vector<double> u_representation_oracle(const History& history, const State& initial, const PhysParams& params);

/// Same reconstruction at sample `upto` (0 returns u0).
std::vector<double> u_representation_oracle(const History& history, const State& initial, const PhysParams& params,
                                            std::size_t upto);

/// psi = w + int_0^x (u - A) - int int (u - A); returns psi^T M psi / 2 + A int (theta/A - log(theta/A) - 1).
double psi_energy(const State& w_state, const InitialDataSummary& summary);

/// int z_x^2/(u theta) + sum over interior nodes of kappa g^2 / (u_mean theta_left theta_right),
/// with z_x = w_x + u - theta and g the node temperature gradient.
double psi_dissipation(const State& w_state, const InitialDataSummary& summary, const PhysParams& params);

/// |(P(s2) - P(s1))/dt + A (D(s1) + D(s2))/2| for consecutive WForm states, P = psi_energy,
/// D = psi_dissipation.
double psi_identity_residual(const State& s1, const State& s2, double dt, const InitialDataSummary& summary,
                             const PhysParams& params);

/// Least-squares line through (t, log h) over samples with lo < h < hi; lambda_hat = -slope.
/// Throws InsufficientDataError with fewer than 10 samples in the window.
DecayFit decay_fit(std::span<const double> t, std::span<const double> h, double threshold_hi, double threshold_lo);

/// Running extrema over a record stream.
class BoundsTracker {
public:
    explicit BoundsTracker(const InitialDataSummary& summary);

    void add(const DiagnosticsRecord& r);
    bool empty() const noexcept { return count_ == 0; }
    /// Throws StructuralError if nothing was added.
    BoundsReport report() const;

private:
    double alpha1_;
    double alpha2_;
    std::size_t count_ = 0;
    BoundsReport acc_;
};

BoundsReport bounds_tracker(std::span<const DiagnosticsRecord> records, const InitialDataSummary& summary);

} // namespace lns1d
