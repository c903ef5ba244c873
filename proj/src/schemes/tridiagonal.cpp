#include "lns1d/tridiagonal.hpp"

#include <cmath>
#include <string>

#include "lns1d/errors.hpp"

namespace lns1d {

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0 || rhs.size() != n || lower.size() + 1 != n || upper.size() + 1 != n) {
        throw StructuralError("solve_tridiagonal: expected sizes (n-1, n, n-1, n)");
    }

    std::vector<double> c_star(n, 0.0);
    std::vector<double> x(n);

    double pivot = diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
        throw NumericalError("solve_tridiagonal: zero pivot in row 0");
    }
    if (n > 1) {
        c_star[0] = upper[0] / pivot;
    }
    x[0] = rhs[0] / pivot;

    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i - 1] * c_star[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError("solve_tridiagonal: zero pivot in row " + std::to_string(i));
        }
        if (i + 1 < n) {
            c_star[i] = upper[i] / pivot;
        }
        x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / pivot;
    }

    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= c_star[i] * x[i + 1];
    }
    return x;
}

} // namespace lns1d
