#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "lns1d/calculus.hpp"
#include "lns1d/errors.hpp"
#include "lns1d/transforms.hpp"

using namespace lns1d;
using testing::pi;

namespace {

State random_state(int n, unsigned seed, Formulation f) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(0.5, 1.5);
    State s;
    s.formulation = f;
    s.time = 0.3;
    for (int i = 0; i < n; ++i) {
        s.u.push_back(d(rng));
        s.theta.push_back(d(rng));
    }
    for (int j = 0; j <= n; ++j) s.vel.push_back(d(rng) - 1.0);
    return s;
}

} // namespace

TEST_CASE("to_scaled / from_scaled") {
    State s = testing::make_state(8, [](double) { return 2.0; }, [](double) { return 0.0; },
                                  [](double) { return 1.0; }, Formulation::Original, 0.0);
    const State sc = to_scaled(s);
    CHECK(sc.formulation == Formulation::Scaled);
    CHECK(sc.time == 0.0);
    for (double u : sc.u) CHECK(u == 2.0);

    // Trivial solution u = c(1+t) at t = e - 1 maps to u~ = c at t_hat = 1.
    const double c = 1.7;
    State t = testing::trivial(8, c, Formulation::Original);
    t.time = std::exp(1.0) - 1.0;
    for (double& u : t.u) u = c * (1.0 + t.time);
    const State ts = to_scaled(t);
    CHECK(ts.time == doctest::Approx(1.0).epsilon(1e-15));
    for (double u : ts.u) CHECK(u == doctest::Approx(c).epsilon(1e-15));

    State one = testing::trivial(8, 1.0);
    const State o = from_scaled(one);
    CHECK(o.time == 0.0);
    one.time = 1.0;
    const State e = from_scaled(one);
    CHECK(e.time == doctest::Approx(std::exp(1.0) - 1.0));
    for (double u : e.u) CHECK(u == doctest::Approx(std::exp(1.0)));

    const State r = random_state(16, 3, Formulation::Original);
    const State back = from_scaled(to_scaled(r));
    CHECK(back.formulation == Formulation::Original);
    CHECK(std::abs(back.time - r.time) <= 1e-15 * r.time);
    for (int i = 0; i < 16; ++i) CHECK(std::abs(back.u[i] - r.u[i]) <= 1e-15 * r.u[i]);

    State neg = r;
    neg.time = -0.1;
    CHECK_THROWS_AS(to_scaled(neg), DomainError);
    CHECK_THROWS_AS(to_scaled(to_scaled(r)), StructuralError);
    CHECK_THROWS_AS(from_scaled(r), StructuralError);
}

TEST_CASE("build_w") {
    const State w = build_w(testing::trivial(16, 1.3), 0.0);
    CHECK(w.formulation == Formulation::WForm);
    for (double x : w.vel) CHECK(std::abs(x) < 1e-14);

    const State s = random_state(32, 9, Formulation::Scaled);
    const Grid g(32);
    const double vbar = node_integral(s.vel, g);
    const State ws = build_w(s, vbar);
    const auto wx = cell_gradient(ws.vel, g);
    const auto vx = cell_gradient(s.vel, g);
    for (int i = 0; i < 32; ++i) CHECK(wx[i] == doctest::Approx(vx[i] - s.u[i]).epsilon(1e-12));
    CHECK(std::abs(node_integral(ws.vel, g)) < 1e-12);

    CHECK_THROWS_AS(build_w(ws, 0.0), StructuralError);
}

TEST_CASE("w_to_v") {
    const double A = 1.4;
    State w = testing::make_state(16, [A](double) { return A; }, [](double) { return 0.0; },
                                  [A](double) { return A; }, Formulation::WForm);
    const State v = w_to_v(w, 0.0);
    const Grid g(16);
    for (int j = 0; j <= 16; ++j) CHECK(v.vel[j] == doctest::Approx(A * (g.node(j) - 0.5)).epsilon(1e-12));

    State w1 = testing::make_state(16, [](double) { return 1.0; }, [](double) { return 0.0; },
                                   [](double) { return 1.0; }, Formulation::WForm);
    const State v1 = w_to_v(w1, 5.0);
    for (int j = 0; j <= 16; ++j) CHECK(std::abs(v1.vel[j] - (5.0 + g.node(j) - 0.5)) < 1e-12);

    for (unsigned seed : {1u, 2u, 3u}) {
        const State r = random_state(20, seed, Formulation::WForm);
        const State rt = build_w(w_to_v(r, 0.7), 0.7);
        CHECK(testing::max_abs_diff(rt.vel, r.vel) <= 1e-12);
    }
    CHECK_THROWS_AS(w_to_v(testing::trivial(8, 1.0), 0.0), StructuralError);
}

TEST_CASE("h1_distance") {
    InitialDataSummary sum;
    sum.A = 1.2;
    sum.v0_mean = 0.3;
    CHECK(h1_distance(testing::asymptotic(32, 1.2, 0.3), sum) == doctest::Approx(0.0));

    const double eps = 1e-3;
    State s = testing::asymptotic(32, 1.2, 0.3);
    for (double& u : s.u) u += eps;
    CHECK(h1_distance(s, sum) == doctest::Approx(eps).epsilon(1e-10));

    auto cosine_case = [&](int n) {
        State t = testing::asymptotic(n, 1.2, 0.3);
        const Grid g(n);
        for (int i = 0; i < n; ++i) t.theta[i] = 1.2 + 0.1 * std::cos(pi * g.center(i));
        return h1_distance(t, sum);
    };
    const double exact = std::sqrt(0.01 / 2 + 0.01 * pi * pi / 2);
    CHECK(std::abs(cosine_case(128) - exact) < 0.01 * exact);
    CHECK(std::abs(cosine_case(64) - exact) / std::abs(cosine_case(128) - exact) > 3.0);

    State o = s;
    o.formulation = Formulation::Original;
    CHECK_THROWS_AS(h1_distance(o, sum), StructuralError);
}
