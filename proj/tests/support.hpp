#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// The oracles deliberately avoid the library's cut system, basis builder and
// adaptive quadrature: they only use pointwise Q(z) and sign continuity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "boutroux/descent.hpp"
#include "boutroux/quadrature.hpp"

namespace fixtures {

using boutroux::cplx;
using boutroux::ProblemSpec;

inline ProblemSpec two_point() {
    ProblemSpec s;
    s.e_points = {-1.0, 1.0};
    return s;
}

inline ProblemSpec cube_roots() {
    ProblemSpec s;
    for (int k = 0; k < 3; ++k) s.e_points.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0));
    s.e_points[0] = 1.0;
    return s;
}

inline ProblemSpec square() {
    ProblemSpec s;
    s.e_points = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    return s;
}

inline ProblemSpec five_poles() {
    ProblemSpec s;
    s.e_points = {cplx(-1, 1), cplx(-1, -1), cplx(0.4, 0.2), cplx(2, -1), cplx(1, 1)};
    return s;
}

inline ProblemSpec three_poles_linear() {
    ProblemSpec s;
    s.e_points = {cplx(0, -1), cplx(0, 1), 1.0};
    s.phi = {1.0};
    s.t0 = 0.0;
    return s;
}

inline ProblemSpec two_poles_cubic() {
    ProblemSpec s;
    s.e_points = {cplx(0, -1), cplx(0, 1)};
    s.phi = {cplx(0, -1), 0.0, 1.0};  // t1, t2, t3
    s.t0 = 0.0;
    s.L = 1;
    return s;
}

}  // namespace fixtures

namespace oracle {

using boutroux::cplx;

// sqrt(Q(z)) with the sign chosen closest to prev.
inline cplx follow(const boutroux::DifferentialState& st, cplx z, cplx prev) {
    cplx w = std::sqrt(st.Q(z));
    return (w * std::conj(prev)).real() >= 0.0 ? w : -w;
}

// Integral of sqrt Q over the ellipse with foci-ish axis [p, q]: semi-axes
// (|q-p|/2) * major and (|q-p|/2) * minor, counter-clockwise, periodic
// trapezoid rule with n nodes. The overall sign is arbitrary (sheet).
inline cplx ellipse_period(const boutroux::DifferentialState& st, cplx p, cplx q, double major, double minor,
                           int n = 6000) {
    const cplx c = 0.5 * (p + q);
    const cplx u = (q - p) / std::abs(q - p);
    const double a = 0.5 * std::abs(q - p) * major;
    const double b = 0.5 * std::abs(q - p) * minor;
    cplx sum = 0.0;
    cplx w = 1.0;
    bool first = true;
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n;
        const cplx z = c + u * cplx(a * std::cos(th), b * std::sin(th));
        const cplx dz = u * cplx(-a * std::sin(th), b * std::cos(th));
        w = first ? std::sqrt(st.Q(z)) : follow(st, z, w);
        first = false;
        sum += w * dz;
    }
    return sum * (2.0 * std::numbers::pi / n);
}

// Twice the integral of the boundary value of sqrt Q along the segment
// [a, b], via z = m + h cos(theta) which absorbs the square-root end-point
// behaviour: g(theta)^2 = Q h^2 sin^2(theta) is smooth. Sign arbitrary.
inline cplx collapsed_cut_period(const boutroux::DifferentialState& st, cplx a, cplx b, int order = 64) {
    const auto& gl = boutroux::gauss_legendre(order);
    const cplx m = 0.5 * (a + b);
    const cplx h = 0.5 * (b - a);
    // nodes in increasing theta for the continuity walk
    std::vector<std::pair<double, double>> nodes;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        nodes.emplace_back(0.5 * std::numbers::pi * (1.0 + gl.nodes[i]), 0.5 * std::numbers::pi * gl.weights[i]);
    std::sort(nodes.begin(), nodes.end());
    cplx sum = 0.0;
    cplx g = 1.0;
    bool first = true;
    for (auto [th, wt] : nodes) {
        const cplx z = m + h * std::cos(th);
        const cplx gsq = st.Q(z) * h * h * std::sin(th) * std::sin(th);
        cplx v = std::sqrt(gsq);
        if (!first && (v * std::conj(g)).real() < 0.0) v = -v;
        first = false;
        g = v;
        sum += wt * g;
    }
    return 2.0 * sum;
}

inline double sign_agnostic_error(cplx x, cplx y) { return std::min(std::abs(x - y), std::abs(x + y)); }

}  // namespace oracle
