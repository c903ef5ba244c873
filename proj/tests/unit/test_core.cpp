#include <doctest.h>

#include "helpers.hpp"
#include "lns1d/core.hpp"
#include "lns1d/errors.hpp"

using namespace lns1d;

TEST_CASE("PhysParams validation and constitutive laws") {
    PhysParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.viscosity(3.0) == 1.0);
    p.beta = 2.0;
    CHECK(p.conductivity(3.0) == doctest::Approx(9.0));
    p.alpha = 1.0;
    CHECK(p.viscosity(2.0) == doctest::Approx(1.5));

    PhysParams bad;
    bad.beta = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = PhysParams{};
    bad.alpha = -0.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = PhysParams{};
    bad.normalized = false;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("Grid layout") {
    const Grid g(8);
    CHECK(g.cells() == 8);
    CHECK(g.nodes() == 9);
    CHECK(g.dx() * g.cells() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.center(0) == doctest::Approx(1.0 / 16));
    CHECK(g.node(8) == doctest::Approx(1.0));
    CHECK(g.centers().size() == 8);
    CHECK(g.node_positions().back() == doctest::Approx(1.0));
    CHECK(Grid(8) == g);
    CHECK_THROWS_AS(Grid(3), StructuralError);
}

TEST_CASE("State validation") {
    State s = testing::trivial(8, 1.0);
    CHECK_NOTHROW(s.validate());
    CHECK(s.grid().cells() == 8);

    State short_vel = s;
    short_vel.vel.pop_back();
    CHECK_THROWS_AS(short_vel.validate(), StructuralError);

    State neg = s;
    neg.u[3] = 0.0;
    CHECK_THROWS_AS(neg.validate(), DomainError);
    neg = s;
    neg.theta[2] = -1.0;
    CHECK_THROWS_AS(neg.validate(), DomainError);
}

TEST_CASE("Formulation names") {
    CHECK(to_string(Formulation::Original) == "original");
    CHECK(to_string(Formulation::Scaled) == "scaled");
    CHECK(to_string(Formulation::WForm) == "wform");
}

TEST_CASE("InitialDataSummary residual of the A relation") {
    InitialDataSummary s;
    s.E0 = 25.0 / 24.0;
    s.v0_mean = 0.0;
    s.A = 1.0;
    CHECK(std::abs(s.a_residual()) < 1e-15);
    s.A = 1.1;
    CHECK(std::abs(s.a_residual()) > 1e-3);
}

TEST_CASE("History keeps increasing times and thins uniformly") {
    History h(8);
    CHECK(h.empty());
    State s = testing::trivial(4, 1.0);
    for (int k = 0; k < 20; ++k) {
        s.time = k;
        h.append(s);
        CHECK(h.size() <= 8);
    }
    CHECK(h.time(0) == 0.0);
    CHECK(h.time(h.size() - 1) == 19.0);
    for (std::size_t k = 1; k < h.size(); ++k) {
        CHECK(h.time(k) > h.time(k - 1));
    }

    State same = s;
    CHECK_THROWS_AS(h.append(same), StructuralError);
}
