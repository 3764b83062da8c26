#include "boutroux/descent.hpp"
#include "boutroux/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace boutroux;

TEST_CASE("problem degree bookkeeping") {
    const ProblemSpec f4 = fixtures::two_poles_cubic();
    CHECK(f4.R() == 3);
    CHECK(f4.M() == 4);
    CHECK(f4.genus() == 2);
    CHECK(f4.lead() == cplx(1.0));
    ProblemSpec bad = fixtures::three_poles_linear();
    bad.L = 3;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    ProblemSpec dup = fixtures::two_point();
    dup.e_points.push_back(1.0);
    CHECK_THROWS_AS(dup.validate(), ConfigError);
}

TEST_CASE("functional") {
    const auto st = DifferentialState::from_roots(fixtures::two_point(), {}, {});
    CHECK(functional(st) < 1e-16);
    PeriodData pd;
    pd.T = {1.0};
    pd.P = {cplx(0, 2.0), cplx(0, -1.0)};
    CHECK(functional(fixtures::two_point(), pd) == 0.0);
    pd.T = {cplx(1.0, 0.5)};
    pd.P = {cplx(0.3, 2.0)};
    CHECK(std::abs(functional(fixtures::two_point(), pd) - 0.5 * (0.25 + 0.09)) < 1e-15);
    CHECK(functional(random_state(fixtures::five_poles(), 1)) > 0.0);
}

TEST_CASE("random state respects the problem degrees") {
    for (const auto& spec : {fixtures::five_poles(), fixtures::three_poles_linear(), fixtures::two_poles_cubic()}) {
        const auto st = random_state(spec, 99);
        CHECK(st.L() == spec.L);
        CHECK(st.M() == spec.M());
        CHECK(st.S.leading() == spec.lead());
        CHECK(st.delta.leading() == cplx(1.0));
        CHECK(2 * st.L() + st.M() - st.N() == 2 * (spec.R() - 1));
        // deterministic per seed
        const auto again = random_state(spec, 99);
        CHECK(again.delta_roots == st.delta_roots);
    }
}

TEST_CASE("step with dt = 0 leaves the state unchanged") {
    const auto st = random_state(fixtures::three_poles_linear(), 2);
    const Deformation v = solve_deformation(st);
    const auto same = step(st, v, 0.0);
    CHECK(same.delta.coeffs() == st.delta.coeffs());
    CHECK(same.S.coeffs() == st.S.coeffs());
}

TEST_CASE("one small step shrinks F by about dt F") {
    const auto st = random_state(fixtures::three_poles_linear(), 2);
    const double F0 = functional(st);
    const Deformation v = solve_deformation(st);
    const double dt = 1e-3;
    const double F1 = functional(step(st, v, dt));
    const double drop = F0 - F1;
    CHECK(drop > 0.8 * dt * F0);
    CHECK(drop < 1.2 * dt * F0);
}

TEST_CASE("gradient identity on the three-pole linear data") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto st = random_state(fixtures::three_poles_linear(), seed);
        const double F = functional(st);
        const Deformation v = solve_deformation(st);
        const double dF = directional_derivative(st, v, 1e-4);
        CHECK(std::abs(dF + F) < 0.01 * F);
        CHECK(v.sylvester_residual < 1e-12);
    }
}

TEST_CASE("fixed point has zero velocity") {
    DescentOptions o;
    o.f_exit = 1e-20;
    o.max_iter = 200;
    const DescentReport r = run(fixtures::cube_roots(), 1, o);
    const Deformation v = solve_deformation(r.final_state);
    CHECK(v.f_dot.norm() < 1e-6);
    CHECK(v.delta_dot.norm() < 1e-6);
    const auto moved = step(r.final_state, v, 0.5);
    CHECK(std::abs(moved.delta_roots[0] - r.final_state.delta_roots[0]) < 1e-6);
}

TEST_CASE("adapt_dt rules") {
    DescentOptions o;
    CHECK(adapt_dt(std::vector<double>{2.0, 1.0}, 0.1, o) == doctest::Approx(0.12));
    CHECK(adapt_dt(std::vector<double>{2.0, 1.0}, 0.45, o) == doctest::Approx(0.5));
    CHECK(adapt_dt(std::vector<double>{1.0, 2.0}, 0.1, o) == doctest::Approx(0.05));
    CHECK_THROWS_AS(adapt_dt(std::vector<double>{1.0, 2.0}, 1.5e-12, o), StepFloorReached);
}

TEST_CASE("merge check") {
    ProblemSpec spec = fixtures::five_poles();
    std::vector<cplx> d{1e-5, -1e-5, 5.0};
    auto st = DifferentialState::from_roots(spec, {}, d);
    REQUIRE(merge_check(st, 1e-4));
    CHECK(st.L() == 1);
    CHECK(st.M() == 1);
    CHECK(std::abs(st.s_roots[0]) < 1e-12);
    CHECK(std::abs(st.delta_roots[0] - 5.0) < 1e-15);
    CHECK(st.S.leading() == spec.lead());
    CHECK(2 * st.L() + st.M() - st.N() == 2 * (spec.R() - 1));

    std::vector<cplx> far{0.1, -0.1, 5.0};
    auto st2 = DifferentialState::from_roots(spec, {}, far);
    CHECK_FALSE(merge_check(st2, 1e-4));
    CHECK(st2.M() == 3);
}

TEST_CASE("two-point run converges immediately") {
    const DescentReport r = run(fixtures::two_point(), 1);
    CHECK(r.status == DescentStatus::Converged);
    CHECK(r.F_history.back() < 1e-10);
    CHECK(std::abs(r.final_periods.T[0] - 1.0) < 1e-8);
}

TEST_CASE("square run merges into the cross") {
    DescentOptions o;
    o.f_exit = 1e-14;
    const DescentReport r = run(fixtures::square(), 1, o);
    CHECK(r.status == DescentStatus::Converged);
    CHECK(r.merges == 1);
    REQUIRE(r.final_state.L() == 1);
    CHECK(r.final_state.M() == 0);
    CHECK(std::abs(r.final_state.s_roots[0]) < 1e-6);
}

TEST_CASE("accepted iterates never increase F across a fixed basis") {
    DescentOptions o;
    int epoch = -1;
    double last = 1e300;
    bool monotone = true;
    o.observer = [&](int, const DifferentialState& s, double F) {
        if (s.basis.epoch == epoch && F > last) monotone = false;
        epoch = s.basis.epoch;
        last = F;
    };
    const DescentReport r = run(fixtures::three_poles_linear(), 4, o);
    CHECK(r.status == DescentStatus::Converged);
    CHECK(monotone);
}
