#include <random>

#include "boutroux/errors.hpp"
#include "boutroux/periods.hpp"
#include "boutroux/state.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace boutroux;

namespace {

// L = 1 merged square state: S = z, Delta = 1, genus 1.
DifferentialState square_g1() {
    ProblemSpec spec = fixtures::square();
    spec.L = 1;
    std::vector<cplx> s{0.0};
    return DifferentialState::from_roots(spec, s, {});
}

std::vector<cplx> circle(cplx c, double r, int n = 64) {
    std::vector<cplx> out;
    for (int k = 0; k <= n; ++k) out.push_back(c + std::polar(r, 2.0 * std::numbers::pi * (k % n) / n + 0.05));
    return out;
}

}  // namespace

TEST_CASE("basis sizes") {
    const auto two = DifferentialState::from_roots(fixtures::two_point(), {}, {});
    CHECK(two.basis.cycles.empty());
    const auto sq = square_g1();
    CHECK(sq.genus() == 1);
    CHECK(sq.basis.cycles.size() == 2);
    const auto f1 = random_state(fixtures::five_poles(), 2);
    CHECK(f1.basis.cycles.size() == 2u * f1.genus());
    for (const Cycle& c : f1.basis.cycles) {
        CHECK(c.polygon.front() == c.polygon.back());
        CHECK(SheetPath::closed_polygon(c.polygon, f1.cuts()).total_crossings() % 2 == 0);
    }
}

TEST_CASE("moment at infinity for the two-point state") {
    const auto st = DifferentialState::from_roots(fixtures::two_point(), {}, {});
    const cplx I = sheet_tracked_integral(circle(0.0, 10.0), st, 0);
    CHECK(std::abs(I / cplx(0, 2.0 * std::numbers::pi) - 1.0) < 1e-10);
    const PeriodData pd = compute_periods(st);
    REQUIRE(pd.T.size() == 1);
    CHECK(std::abs(pd.T[0] - 1.0) < 1e-8);
    CHECK(pd.P.empty());
    const PeriodMatrix pm = period_matrix(st);
    CHECK(pm.A.rows() == 0);
    CHECK(pm.B.rows() == 0);
}

TEST_CASE("A block is the residue at infinity for R = 1, g = 0") {
    ProblemSpec spec;
    spec.e_points = {-1.0, 1.0};
    spec.phi = {1.0};
    spec.L = 1;  // M = 2R - 2 + N - 2L = 0
    std::vector<cplx> s{0.3};
    const auto st = DifferentialState::from_roots(spec, s, {});
    const PeriodMatrix pm = period_matrix(st);
    REQUIRE(pm.A.rows() == 1);
    REQUIRE(pm.A.cols() == 1);
    CHECK(std::abs(pm.A(0, 0) - 1.0) < 1e-10);
    CHECK(pm.B.rows() == 0);
}

TEST_CASE("Cauchy: closed path off the cuts") {
    const auto st = random_state(fixtures::five_poles(), 3);
    // small circle around a point far from the branch points
    const cplx I = sheet_tracked_integral(circle(cplx(6.0, 6.0), 1.0), st);
    CHECK(std::abs(I) < 1e-10);
}

TEST_CASE("T_R matches t_R") {
    for (const auto& spec : {fixtures::three_poles_linear(), fixtures::two_poles_cubic()}) {
        const auto st = random_state(spec, 8);
        const PeriodData pd = compute_periods(st);
        CHECK(std::abs(pd.T.back() - spec.t(spec.R())) < 1e-10);
    }
}

TEST_CASE("g = 1 square periods against independent contours") {
    const auto st = square_g1();
    const PeriodData pd = compute_periods(st);
    REQUIRE(pd.P.size() == 2);
    const auto& cyc = st.basis.cycles;
    const auto bp = st.branch_points();
    for (std::size_t k = 0; k < 2; ++k) {
        const cplx p = bp[cyc[k].id_a], q = bp[cyc[k].id_b];
        const cplx ell = oracle::ellipse_period(st, p, q, 1.25, 0.35);
        CHECK(oracle::sign_agnostic_error(ell, pd.P[k]) < 1e-8);
    }
    // symmetric state: periods purely imaginary
    for (const cplx& P : pd.P) CHECK(std::abs(P.real()) < 1e-8);

    const PeriodMatrix pm = period_matrix(st);
    REQUIRE(pm.B.rows() == 2);
    REQUIRE(pm.B.cols() == 1);
    // B entries: same oracle with the integrand 1 / sqrt(Delta E) = sqrt(Q) / S
    for (int k = 0; k < 2; ++k) {
        const cplx p = bp[cyc[k].id_a], q = bp[cyc[k].id_b];
        const double a = 0.5 * std::abs(q - p) * 1.25, b = 0.5 * std::abs(q - p) * 0.35;
        const cplx c = 0.5 * (p + q), u = (q - p) / std::abs(q - p);
        const int n = 6000;
        cplx sum = 0.0, w = 1.0;
        for (int j = 0; j < n; ++j) {
            const double th = 2.0 * std::numbers::pi * j / n;
            const cplx z = c + u * cplx(a * std::cos(th), b * std::sin(th));
            const cplx dz = u * cplx(-a * std::sin(th), b * std::cos(th));
            cplx v = 1.0 / std::sqrt(st.E(z));
            if (j > 0 && (v * std::conj(w)).real() < 0.0) v = -v;
            w = v;
            sum += v * dz;
        }
        sum *= 2.0 * std::numbers::pi / n;
        CHECK(oracle::sign_agnostic_error(sum, pm.B(k, 0)) < 1e-8);
    }
}

TEST_CASE("cycle around a single cut collapses onto the cut") {
    const auto st = square_g1();
    const PeriodData pd = compute_periods(st);
    const auto bp = st.branch_points();
    const Cycle& c0 = st.basis.cycles[0];
    const cplx p = bp[c0.id_a], q = bp[c0.id_b];
    bool is_cut = false;
    for (const Cut& c : st.cuts().cuts) is_cut = is_cut || (c.a == p && c.b == q) || (c.a == q && c.b == p);
    REQUIRE(is_cut);
    CHECK(oracle::sign_agnostic_error(oracle::collapsed_cut_period(st, p, q), pd.P[0]) < 1e-10);
}

TEST_CASE("A entries below the second subdiagonal vanish") {
    const auto st = random_state(fixtures::two_poles_cubic(), 5);
    const PeriodMatrix pm = period_matrix(st);
    REQUIRE(pm.A.rows() == 3);
    int checked = 0;
    for (int a = 1; a <= pm.A.rows(); ++a)
        for (int b = 1; b <= pm.A.cols(); ++b)
            if (b - a <= -2) {
                CHECK(std::abs(pm.A(a - 1, b - 1)) <= 1e-10);
                ++checked;
            }
    CHECK(checked > 0);
}

TEST_CASE("homotopy invariance under vertex perturbation") {
    const auto st = random_state(fixtures::five_poles(), 6);
    const PeriodSnapshot base = evaluate_periods(st);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t k = 0; k < st.basis.cycles.size(); ++k) {
        const Cycle& c = st.basis.cycles[k];
        std::vector<cplx> poly = c.polygon;
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) poly[i] += 0.05 * c.clearance * cplx(u(rng), u(rng)) / std::sqrt(2.0);
        poly.back() = poly.front();
        const cplx P = sheet_tracked_integral(poly, st);
        CHECK(std::abs(P - base.data.P[k]) < 1e-8 * std::abs(base.data.P[k]));
    }
}

TEST_CASE("double traversal doubles the period") {
    const auto st = random_state(fixtures::five_poles(), 6);
    for (const Cycle& c : st.basis.cycles) {
        std::vector<cplx> twice = c.polygon;
        twice.insert(twice.end(), c.polygon.begin() + 1, c.polygon.end());
        const cplx one = sheet_tracked_integral(c.polygon, st);
        const cplx two = sheet_tracked_integral(twice, st);
        CHECK(std::abs(two - 2.0 * one) < 1e-12 * std::abs(one));
    }
}

TEST_CASE("quadrature refinement is stable") {
    const auto st = random_state(fixtures::three_poles_linear(), 12);
    QuadratureOptions hi;
    hi.order = 64;
    const PeriodData a = compute_periods(st), b = compute_periods(st, hi);
    for (std::size_t k = 0; k < a.P.size(); ++k) CHECK(std::abs(a.P[k] - b.P[k]) < 1e-10 * std::max(1.0, std::abs(a.P[k])));
    for (std::size_t k = 0; k < a.T.size(); ++k) CHECK(std::abs(a.T[k] - b.T[k]) < 1e-10 * std::max(1.0, std::abs(a.T[k])));
}

TEST_CASE("basis survives small moves and rebuilds around the same pair") {
    auto st = random_state(fixtures::five_poles(), 6);
    const HomologyBasis before = st.basis;
    st.delta_roots[0] += cplx(1e-6, 0.0);
    st.delta = ComplexPoly::from_roots(st.delta_roots);
    st.rebuild_geometry(true);
    CHECK(st.basis.epoch == before.epoch);
    for (std::size_t k = 0; k < before.cycles.size(); ++k) {
        CHECK(st.basis.cycles[k].id_a == before.cycles[k].id_a);
        CHECK(st.basis.cycles[k].id_b == before.cycles[k].id_b);
    }
}
