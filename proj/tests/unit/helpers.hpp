#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "lns1d/core.hpp"

namespace testing {

using lns1d::Formulation;
using lns1d::Grid;
using lns1d::State;

inline constexpr double pi = std::numbers::pi;

inline State make_state(int n, const std::function<double(double)>& u, const std::function<double(double)>& v,
                        const std::function<double(double)>& theta, Formulation f = Formulation::Scaled,
                        double time = 0.0) {
    const Grid g(n);
    State s;
    s.formulation = f;
    s.time = time;
    for (int i = 0; i < n; ++i) {
        s.u.push_back(u(g.center(i)));
        s.theta.push_back(theta(g.center(i)));
    }
    for (int j = 0; j <= n; ++j) {
        s.vel.push_back(v(g.node(j)));
    }
    return s;
}

inline State trivial(int n, double c, Formulation f = Formulation::Scaled) {
    return make_state(n, [c](double) { return c; }, [c](double x) { return c * (x - 0.5); },
                      [c](double) { return c; }, f);
}

// Asymptotic state (A, vbar + A(x - 1/2), A).
inline State asymptotic(int n, double A, double vbar) {
    return make_state(n, [A](double) { return A; }, [A, vbar](double x) { return vbar + A * (x - 0.5); },
                      [A](double) { return A; });
}

inline State smooth(int n, Formulation f = Formulation::Scaled) {
    return make_state(
        n, [](double x) { return 1.0 + 0.2 * std::cos(pi * x); },
        [](double x) { return (x - 0.5) + 0.1 * std::sin(pi * x); },
        [](double x) { return 1.0 - 0.1 * std::cos(2 * pi * x); }, f);
}

// Composite Simpson rule on [a, b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 2000) {
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int k = 1; k < m; ++k) {
        s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace testing
