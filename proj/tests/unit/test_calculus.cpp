#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "lns1d/calculus.hpp"
#include "lns1d/errors.hpp"

using namespace lns1d;
using testing::pi;

TEST_CASE("discrete_integral") {
    CHECK(discrete_integral(std::vector<double>(16, 1.0), Grid(16)) == doctest::Approx(1.0).epsilon(1e-15));
    const Grid g4(4);
    CHECK(discrete_integral(g4.centers(), g4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(discrete_integral(std::vector<double>(8, 2.0), Grid(8)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(discrete_integral(std::vector<double>(5, 1.0), Grid(4)), StructuralError);
}

TEST_CASE("node_integral") {
    const Grid g(10);
    std::vector<double> v;
    for (double x : g.node_positions()) {
        v.push_back(x - 0.5);
    }
    CHECK(std::abs(node_integral(v, g)) < 1e-15);
    CHECK(node_integral(std::vector<double>(11, 3.0), g) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(node_integral(std::vector<double>(10, 1.0), g), StructuralError);

    // int (2(x - 1/2))^2 = 1/3, via cell averages of the squared nodal values.
    const Grid g64(64);
    std::vector<double> cells;
    for (int i = 0; i < 64; ++i) {
        const double a = 2 * (g64.node(i) - 0.5), b = 2 * (g64.node(i + 1) - 0.5);
        cells.push_back(0.5 * (a * a + b * b));
    }
    CHECK(discrete_integral(cells, g64) == doctest::Approx(1.0 / 3.0).epsilon(4 * g64.dx() * g64.dx()));
}

TEST_CASE("P1 mass matrix") {
    const Grid g(7);
    std::vector<double> a, b;
    for (double x : g.node_positions()) {
        a.push_back(2 * x - 1);
        b.push_back(3 + x);
    }
    // Exact for piecewise-linear fields: int (2x-1)(3+x) = 1/6.
    CHECK(node_inner(a, b, g) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(node_l2_squared(a, g) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // Row sums are the trapezoid weights.
    const auto ones = mass_apply(std::vector<double>(8, 1.0), g);
    CHECK(ones.front() == doctest::Approx(g.dx() / 2));
    CHECK(ones[3] == doctest::Approx(g.dx()));
    CHECK(ones.back() == doctest::Approx(g.dx() / 2));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(-1, 1);
    std::vector<double> r(8);
    for (double& x : r) x = d(rng);
    const auto mr = mass_apply(r, g);
    double sum = 0.0;
    for (double x : mr) sum += x;
    CHECK(sum == doctest::Approx(node_integral(r, g)).epsilon(1e-14));
}

TEST_CASE("difference quotients") {
    const Grid g(8);
    std::vector<double> lin;
    for (double x : g.node_positions()) lin.push_back(3 * x + 1);
    for (double q : cell_gradient(lin, g)) CHECK(q == doctest::Approx(3.0));

    std::vector<double> cells;
    for (double x : g.centers()) cells.push_back(-2 * x);
    const auto gi = interior_node_gradient(cells, g);
    CHECK(gi.size() == 7);
    for (double q : gi) CHECK(q == doctest::Approx(-2.0));
    CHECK_THROWS_AS(cell_gradient(cells, g), StructuralError);
}

TEST_CASE("cumulative integrals") {
    const Grid g(8);
    const auto c = cumulative_integral(std::vector<double>(8, 2.0), g);
    CHECK(c.size() == 9);
    for (int j = 0; j <= 8; ++j) CHECK(c[j] == doctest::Approx(2.0 * g.node(j)));

    // Exact for constants at cell centers.
    const auto cc = cumulative_node_integral_to_centers(std::vector<double>(9, 0.3), g);
    for (int i = 0; i < 8; ++i) CHECK(cc[i] == doctest::Approx(0.3 * g.center(i)).epsilon(1e-14));

    // Second order for smooth fields.
    auto err = [](int n) {
        const Grid gn(n);
        std::vector<double> f;
        for (double x : gn.node_positions()) f.push_back(std::cos(pi * x));
        const auto c = cumulative_node_integral_to_centers(f, gn);
        double e = 0.0;
        for (int i = 0; i < n; ++i) e = std::max(e, std::abs(c[i] - std::sin(pi * gn.center(i)) / pi));
        return e;
    };
    CHECK(err(32) / err(64) > 3.5);
}

TEST_CASE("max norms") {
    CHECK(max_abs(std::vector<double>{1, -3, 2}) == 3.0);
    CHECK(max_abs_diff(std::vector<double>{1, 2}, std::vector<double>{1.5, 0}) == 2.0);
    CHECK_THROWS_AS(max_abs_diff(std::vector<double>{1}, std::vector<double>{1, 2}), StructuralError);
}
