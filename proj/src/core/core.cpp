#include "lns1d/core.hpp"

#include <cmath>
#include <string>

#include "lns1d/errors.hpp"

namespace lns1d {

std::string_view to_string(Formulation f) {
    switch (f) {
    case Formulation::Original: return "original";
    case Formulation::Scaled: return "scaled";
    case Formulation::WForm: return "wform";
    }
    return "unknown";
}

void PhysParams::validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw ValidationError("params.beta must be finite and >= 0");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("params.alpha must be finite and >= 0");
    }
    if (!normalized) {
        throw ValidationError("only the normalized system (mu~ = kappa~ = R = c_v = 1) is supported");
    }
}

double PhysParams::viscosity(double u) const {
    if (alpha == 0.0) {
        return 1.0;
    }
    return 1.0 + alpha * std::pow(u, -alpha);
}

double PhysParams::conductivity(double theta) const {
    if (beta == 0.0) {
        return 1.0;
    }
    return std::pow(theta, beta);
}

Grid::Grid(int n) : n_(n), dx_(1.0 / n) {
    if (n < 4) {
        throw StructuralError("grid needs at least 4 cells, got " + std::to_string(n));
    }
}

std::vector<double> Grid::centers() const {
    std::vector<double> x(n_);
    for (int i = 0; i < n_; ++i) {
        x[i] = center(i);
    }
    return x;
}

std::vector<double> Grid::node_positions() const {
    std::vector<double> x(n_ + 1);
    for (int j = 0; j <= n_; ++j) {
        x[j] = node(j);
    }
    return x;
}

void State::validate() const {
    const auto n = u.size();
    if (n < 4 || theta.size() != n || vel.size() != n + 1) {
        throw StructuralError("state has inconsistent field lengths (u=" + std::to_string(u.size()) +
                              ", vel=" + std::to_string(vel.size()) +
                              ", theta=" + std::to_string(theta.size()) + ")");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(u[i] > 0.0)) {
            throw DomainError("u must be positive (u[" + std::to_string(i) + "]=" + std::to_string(u[i]) + ")");
        }
        if (!(theta[i] > 0.0)) {
            throw DomainError("theta must be positive (theta[" + std::to_string(i) +
                              "]=" + std::to_string(theta[i]) + ")");
        }
    }
}

double InitialDataSummary::a_residual() const noexcept {
    return A * A / 24.0 + A - (E0 - 0.5 * v0_mean * v0_mean);
}

History::History(std::size_t capacity) : capacity_(capacity < 3 ? 3 : capacity) {}

void History::append(const State& s) {
    if (!samples_.empty() && !(s.time > samples_.back().time)) {
        throw StructuralError("history sample times must be strictly increasing");
    }
    samples_.push_back(s);
    if (samples_.size() > capacity_) {
        thin();
    }
}

void History::thin() {
    // Keep the first and last samples; drop every other one in between.
    std::vector<State> kept;
    kept.reserve(samples_.size() / 2 + 2);
    for (std::size_t k = 0; k + 1 < samples_.size(); k += 2) {
        kept.push_back(std::move(samples_[k]));
    }
    kept.push_back(std::move(samples_.back()));
    samples_ = std::move(kept);
}

} // namespace lns1d
