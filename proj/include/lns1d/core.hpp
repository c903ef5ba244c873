/// @file core.hpp
/// @brief Domain types: physical parameters, the staggered grid, the discrete state
///        and the records derived from it.
///
/// Layout on the unit mass interval (0,1) with n cells of width dx = 1/n:
///   - u (specific volume) and theta (temperature) live at cell centers x_{i+1/2}, i = 0..n-1
///   - the velocity field (v, or w in the outer-pressure form) lives at nodes x_j, j = 0..n
#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace lns1d {

/// Which system of equations a State belongs to, and therefore which clock it carries.
///   Original: u_t = v_x, physical time t
///   Scaled:   u = u_orig/(1+t), clock t_hat = log(1+t)
///   WForm:    Scaled variables with the velocity replaced by w (constant outer stress -1)
enum class Formulation { Original, Scaled, WForm };

std::string_view to_string(Formulation f);

/// Constitutive exponents. mu = 1 + alpha*u^-alpha, kappa = theta^beta, R = c_v = 1.
struct PhysParams {
    double beta = 1.0;
    double alpha = 0.0;
    bool normalized = true;
    /// Test hook: when false the conduction term is dropped (used to check that the
    /// verification suite detects a broken scheme).
    bool conduction = true;

    void validate() const;
    double viscosity(double u) const;
    double conductivity(double theta) const;
};

class Grid {
public:
    explicit Grid(int n);

    int cells() const noexcept { return n_; }
    int nodes() const noexcept { return n_ + 1; }
    double dx() const noexcept { return dx_; }
    double center(int i) const noexcept { return (i + 0.5) * dx_; }
    double node(int j) const noexcept { return j * dx_; }

    std::vector<double> centers() const;
    std::vector<double> node_positions() const;

    bool operator==(const Grid& other) const noexcept { return n_ == other.n_; }

private:
    int n_;
    double dx_;
};

struct State {
    Formulation formulation = Formulation::Scaled;
    double time = 0.0;
    std::vector<double> u;     ///< cells
    std::vector<double> vel;   ///< nodes: v for Original/Scaled, w for WForm
    std::vector<double> theta; ///< cells

    int cells() const noexcept { return static_cast<int>(u.size()); }
    Grid grid() const { return Grid(cells()); }

    /// Throws StructuralError on inconsistent lengths, DomainError on u <= 0 or theta <= 0.
    void validate() const;
};

/// Constants fixed by the initial data.
struct InitialDataSummary {
    double E0 = 0.0;      ///< int (v0^2/2 + theta0)
    double v0_mean = 0.0; ///< int v0
    double A = 0.0;       ///< limit of u_scaled and theta
    double e0 = 0.0;      ///< bound in the entropy-dissipation estimate
    double alpha1 = 1.0;  ///< smaller root of x - log x - 1 = e0
    double alpha2 = 1.0;  ///< larger root

    /// Residual of A^2/24 + A - (E0 - v0_mean^2/2).
    double a_residual() const noexcept;
};

struct DiagnosticsRecord {
    double time = 0.0;
    double E = 0.0;
    double momentum = 0.0;
    double entropy = 0.0;
    double V = 0.0;
    double theta_bar = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    double theta_min = 0.0;
    double theta_max = 0.0;
    double h1_dist = 0.0;
    double psi_energy = 0.0;
};

/// Time samples of the fields, used by quadrature-in-time oracles.
///
/// Keeps at most `capacity` samples; when full, every other interior sample is dropped
/// so the retained samples stay roughly uniform over the run.
class History {
public:
    explicit History(std::size_t capacity = 10000);

    void append(const State& s);
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const State& operator[](std::size_t k) const { return samples_[k]; }
    const std::vector<State>& samples() const noexcept { return samples_; }
    double time(std::size_t k) const { return samples_[k].time; }

private:
    void thin();

    std::size_t capacity_;
    std::vector<State> samples_;
};

} // namespace lns1d
