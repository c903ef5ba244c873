#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lns1d/calculus.hpp"
#include "lns1d/errors.hpp"
#include "lns1d/scenarios.hpp"
#include "lns1d/transforms.hpp"

using namespace lns1d;

namespace {

ScenarioSpec trivial_spec(double c, int n) {
    ScenarioSpec s;
    s.kind = ScenarioKind::Trivial;
    s.c = c;
    s.n = n;
    return s;
}

} // namespace

TEST_CASE("scenario kinds round-trip through their names") {
    for (auto k : {ScenarioKind::Trivial, ScenarioKind::Perturbed, ScenarioKind::RandomSmooth}) {
        CHECK(scenario_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS_AS(scenario_kind_from_string("shock"), ValidationError);
    ScenarioSpec s;
    CHECK(s.label() == "perturbed");
    s.name = "mine";
    CHECK(s.label() == "mine");
}

TEST_CASE("make_initial: trivial data") {
    const State s = make_initial(trivial_spec(1.0, 8));
    const Grid g(8);
    CHECK(s.formulation == Formulation::Scaled);
    CHECK(s.time == 0.0);
    for (double u : s.u) CHECK(u == 1.0);
    for (double th : s.theta) CHECK(th == 1.0);
    for (int j = 0; j <= 8; ++j) CHECK(s.vel[j] == g.node(j) - 0.5);
}

TEST_CASE("make_initial: zero-amplitude perturbation is the trivial data") {
    ScenarioSpec p;
    p.kind = ScenarioKind::Perturbed;
    p.amp = 0.0;
    p.modes = {1};
    p.n = 8;
    const State a = make_initial(p), b = make_initial(trivial_spec(1.0, 8));
    CHECK(a.u == b.u);
    CHECK(a.vel == b.vel);
    CHECK(a.theta == b.theta);
}

TEST_CASE("make_initial: perturbation keeps the boundary compatibility") {
    ScenarioSpec p;
    p.n = 64;
    const State s = make_initial(p);
    // sin modes vanish at the ends; cos modes are symmetric about the boundary.
    CHECK(s.vel.front() == doctest::Approx(-0.5));
    CHECK(s.vel.back() == doctest::Approx(0.5));
    CHECK(s.u.front() == doctest::Approx(1.0 + 0.1 * (std::cos(testing::pi / 128) + std::cos(2 * testing::pi / 128))));
}

TEST_CASE("make_initial: random_smooth is deterministic and within range") {
    ScenarioSpec r;
    r.kind = ScenarioKind::RandomSmooth;
    r.seed = 42;
    r.n = 64;
    const State a = make_initial(r), b = make_initial(r);
    CHECK(a.u == b.u);
    CHECK(a.vel == b.vel);
    CHECK(a.theta == b.theta);
    for (double u : a.u) CHECK((u >= 0.5 && u <= 1.5));
    for (double th : a.theta) CHECK((th >= 0.5 && th <= 1.5));

    r.seed = 43;
    CHECK(make_initial(r).u != a.u);
}

TEST_CASE("scenario validation") {
    ScenarioSpec s;
    s.c = 0.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec{};
    s.amp = 0.5;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec{};
    s.c = 0.5;
    s.amp = 0.25; // amp < min(c,1)/2 is violated at equality
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec{};
    s.modes = {0};
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec{};
    s.t_hat_end = 0.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec{};
    s.sample_every = 100.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec{};
    s.n = 3;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec{};
    s.kind = ScenarioKind::RandomSmooth;
    s.u_range = {0.0, 1.0};
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = ScenarioSpec{};
    s.beta = -1.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("run: trivial data stays at the fixed point") {
    ScenarioSpec s = trivial_spec(1.0, 64);
    s.t_hat_end = 5.0;
    s.sample_every = 0.05;
    const auto r = run(s, SchemeConfig{});
    CHECK(r.records.size() == 101);
    CHECK(r.records.back().time == 5.0);
    for (const auto& rec : r.records) CHECK(rec.h1_dist <= 1e-10);
    CHECK_FALSE(r.decay.has_value());
    CHECK_FALSE(r.decay_note.empty());
    REQUIRE(r.bounds.has_value());
    CHECK(r.bounds->bracket_flags.empty());
    CHECK(r.monitor.bracket_violations == 0);
}

TEST_CASE("run: determinism, snapshots and history") {
    ScenarioSpec s;
    s.n = 32;
    s.t_hat_end = 0.3;
    s.sample_every = 0.1;
    RunOptions o;
    o.keep_history = true;
    o.snapshot_times = {0.0, 0.15};
    const auto a = run(s, SchemeConfig{}, o);
    const auto b = run(s, SchemeConfig{}, o);
    CHECK(a.final_state.u == b.final_state.u);
    CHECK(a.final_state.vel == b.final_state.vel);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(a.records[k].E == b.records[k].E);

    // 0, 0.1, 0.15, 0.2, 0.3
    CHECK(a.records.size() == 5);
    REQUIRE(a.snapshots.size() == 2);
    CHECK(a.snapshots[1].time == 0.15);
    CHECK(a.history.size() == 5);
    CHECK(a.steps.steps > 0);
    CHECK(a.monitor.energy_drift_max < 1e-6);
}

TEST_CASE("run: a tiny perturbation stays close to the trivial trajectory") {
    ScenarioSpec s;
    s.n = 32;
    s.amp = 1e-8;
    s.t_hat_end = 3.0;
    s.sample_every = 0.1;
    const auto r = run(s, SchemeConfig{});
    for (const auto& rec : r.records) CHECK(rec.h1_dist <= 1e-6);
}

TEST_CASE("run: step failure carries the partial results") {
    ScenarioSpec s = trivial_spec(1.0, 16);
    s.t_hat_end = 1.0;
    SchemeConfig cfg;
    cfg.positivity_floor = 2.0;
    try {
        (void)run(s, cfg);
        FAIL("expected RunFailure");
    } catch (const RunFailure& f) {
        CHECK(f.cause().field() == "u");
        CHECK(f.partial().records.size() == 1);
        CHECK(f.partial().bounds.has_value());
    }
}
