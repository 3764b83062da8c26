#include "boutroux/periods.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "boutroux/errors.hpp"
#include "boutroux/state.hpp"

namespace boutroux {

namespace {

constexpr int kCapSegments = 8;
constexpr double kClearanceFraction = 0.4;
constexpr double kValidityFraction = 0.25;

bool lex_less(cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

double polyline_distance(cplx z, std::span<const cplx> arc) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) d = std::min(d, point_segment_distance(z, arc[i], arc[i + 1]));
    return d;
}

double arc_clearance(std::span<const cplx> arc, std::span<const cplx> others) {
    double c = std::numeric_limits<double>::infinity();
    for (const cplx& o : others) c = std::min(c, polyline_distance(o, arc));
    double shortest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) shortest = std::min(shortest, std::abs(arc[i + 1] - arc[i]));
    // Miter offsets stay sane only while the tube is thin against the segments.
    return std::min(kClearanceFraction * c, 0.25 * shortest);
}

// Counter-clockwise tube of radius delta around a polyline arc.
std::vector<cplx> tube(std::span<const cplx> arc, double delta, double phase) {
    const std::size_t n = arc.size() - 1;
    std::vector<cplx> u(n), nrm(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = (arc[i + 1] - arc[i]) / std::abs(arc[i + 1] - arc[i]);
        nrm[i] = cplx(0.0, 1.0) * u[i];
    }
    auto miter = [&](std::size_t i) {  // interior vertex i (1..n-1)
        cplx m = nrm[i - 1] + nrm[i];
        m /= std::abs(m);
        const double dot = (m * std::conj(nrm[i])).real();
        return m * (delta / dot);
    };
    // Half circle of cap vertices, end points included so the phase also
    // moves the vertices beside the branch point.
    auto cap = [&](cplx centre, cplx from_dir, std::vector<cplx>& out) {
        const double a0 = std::arg(from_dir);
        for (int k = 0; k <= kCapSegments; ++k) {
            const double a = a0 + std::numbers::pi * (k + phase) / kCapSegments;
            out.push_back(centre + delta * std::polar(1.0, a));
        }
    };

    std::vector<cplx> poly;
    for (std::size_t i = 1; i < n; ++i) poly.push_back(arc[i] - miter(i));
    cap(arc[n], -nrm[n - 1], poly);
    for (std::size_t i = n - 1; i >= 1; --i) poly.push_back(arc[i] + miter(i));
    cap(arc[0], nrm[0], poly);
    poly.push_back(poly.front());
    return poly;
}

bool vertices_clear_of_cuts(std::span<const cplx> poly, const CutSystem& cuts) {
    const double eps = 1e-7 * cuts.scale;
    for (const cplx& v : poly)
        for (const Cut& c : cuts.cuts)
            if (point_segment_distance(v, c.a, c.b) < eps) return false;
    return true;
}

}  // namespace

Cycle make_cycle(cplx p, cplx q, std::span<const cplx> others, const CutSystem& cuts) {
    const double len = std::abs(q - p);
    if (len == 0.0) throw ClearanceFailure("cycle endpoints coincide");
    const cplx mid = 0.5 * (p + q);
    const cplx nrm = cplx(0.0, 1.0) * (q - p);

    std::vector<std::vector<cplx>> arcs{{p, q}};
    for (double h : {0.3, -0.3, 0.6, -0.6}) arcs.push_back({p, mid + h * nrm, q});

    std::size_t best = 0;
    double best_delta = arc_clearance(arcs[0], others);
    const double straight_delta = best_delta;
    for (std::size_t i = 1; i < arcs.size(); ++i) {
        const double d = arc_clearance(arcs[i], others);
        if (d > best_delta) {
            best_delta = d;
            best = i;
        }
    }
    // Prefer the straight arc unless a point crowds it badly.
    if (straight_delta >= 0.25 * best_delta) {
        best = 0;
        best_delta = straight_delta;
    }
    const double floor = 1e-9 * cuts.scale;
    if (!(best_delta > floor)) throw ClearanceFailure("no arc keeps clear of the other branch points");

    double delta = best_delta;
    double phase = 0.0;
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<cplx> poly = tube(arcs[best], delta, phase);
        if (vertices_clear_of_cuts(poly, cuts)) {
            Cycle c;
            c.polygon = std::move(poly);
            c.clearance = delta;
            return c;
        }
        phase = 0.45 * std::sin(1.7 * (attempt + 1));
        delta *= 0.93;
        if (delta < floor) break;
    }
    throw ClearanceFailure("cycle vertices keep landing on cuts");
}

HomologyBasis build_homology_basis(const CutSystem& cuts, std::span<const int> ids) {
    HomologyBasis basis;
    const int g = cuts.genus();
    if (g <= 0) return basis;

    auto id_of = [&](cplx z) {
        for (std::size_t i = 0; i < cuts.branch_points.size(); ++i)
            if (cuts.branch_points[i] == z) return ids.empty() ? static_cast<int>(i) : ids[i];
        throw std::logic_error("cut endpoint not among branch points");
    };

    std::vector<cplx> order;
    for (const Cut& c : cuts.cuts) {
        if (lex_less(c.a, c.b)) {
            order.push_back(c.a);
            order.push_back(c.b);
        } else {
            order.push_back(c.b);
            order.push_back(c.a);
        }
    }
    for (int k = 0; k < 2 * g; ++k) {
        const cplx p = order[static_cast<std::size_t>(k)];
        const cplx q = order[static_cast<std::size_t>(k + 1)];
        std::vector<cplx> others;
        for (const cplx& z : cuts.branch_points)
            if (z != p && z != q) others.push_back(z);
        Cycle c = make_cycle(p, q, others, cuts);
        c.id_a = id_of(p);
        c.id_b = id_of(q);
        basis.cycles.push_back(std::move(c));
    }
    return basis;
}

bool cycle_still_valid(const Cycle& cycle, std::span<const TaggedPoint> points, const CutSystem& cuts) {
    for (const TaggedPoint& tp : points) {
        const int wn = winding_number(cycle.polygon, tp.z);
        const bool member = tp.id == cycle.id_a || tp.id == cycle.id_b;
        if (member != (wn != 0)) return false;
        if (polyline_distance(tp.z, cycle.polygon) < kValidityFraction * cycle.clearance) return false;
    }
    return vertices_clear_of_cuts(cycle.polygon, cuts);
}

int refresh_basis(HomologyBasis& basis, std::span<const TaggedPoint> points, const CutSystem& cuts) {
    int rebuilt = 0;
    for (Cycle& c : basis.cycles) {
        if (cycle_still_valid(c, points, cuts)) continue;
        cplx p{}, q{};
        std::vector<cplx> others;
        bool found_a = false, found_b = false;
        for (const TaggedPoint& tp : points) {
            if (tp.id == c.id_a) {
                p = tp.z;
                found_a = true;
            } else if (tp.id == c.id_b) {
                q = tp.z;
                found_b = true;
            } else {
                others.push_back(tp.z);
            }
        }
        if (!found_a || !found_b) throw std::logic_error("refresh_basis: cycle endpoint identity vanished");
        Cycle fresh = make_cycle(p, q, others, cuts);
        fresh.id_a = c.id_a;
        fresh.id_b = c.id_b;
        c = std::move(fresh);
        ++rebuilt;
    }
    return rebuilt;
}

Eigen::VectorXcd integrate_on_surface(std::span<const cplx> polygon, const CutRadical& radical,
                                      const SheetIntegrand& f, int components,
                                      const QuadratureOptions& opts) {
    const CutSystem& cuts = radical.cuts();
    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(components);
    double sheet = 1.0;
    for (std::size_t i = 0; i + 1 < polygon.size(); ++i) {
        const cplx a = polygon[i], b = polygon[i + 1];
        const std::vector<Crossing> marks = segment_crossings(a, b, cuts);
        double t_prev = 0.0;
        for (std::size_t k = 0; k <= marks.size(); ++k) {
            const double t_next = k < marks.size() ? marks[k].t : 1.0;
            const double s = sheet;
            auto g = [&](cplx z) { return f(z, s * radical.eval_unchecked(z)); };
            total += integrate_segment(g, a + t_prev * (b - a), a + t_next * (b - a), components, opts);
            if (k < marks.size()) sheet = -sheet;
            t_prev = t_next;
        }
    }
    if (polygon.size() > 1 && polygon.front() == polygon.back() && sheet != 1.0)
        throw Error("closed path crosses the cuts an odd number of times");
    return total;
}

std::vector<cplx> infinity_contour(const CutSystem& cuts) {
    double rmax = 0.0;
    for (const cplx& z : cuts.branch_points) rmax = std::max(rmax, std::abs(z));
    const double r = std::max(2.5 * rmax, 2.0);
    constexpr int sides = 16;
    std::vector<cplx> poly;
    for (int k = 0; k <= sides; ++k)
        poly.push_back(std::polar(r, 2.0 * std::numbers::pi * (k % sides) / sides + 0.1));
    return poly;
}

cplx sheet_tracked_integral(std::span<const cplx> polygon, const DifferentialState& state,
                            std::optional<int> weight, const QuadratureOptions& opts) {
    const int l = weight.value_or(0);
    auto f = [&](cplx z, cplx rho) {
        Eigen::VectorXcd v(1);
        v(0) = state.S(z) * rho / state.E(z) * std::pow(z, -l);
        return v;
    };
    return integrate_on_surface(polygon, state.radical, f, 1, opts)(0);
}

PeriodSnapshot evaluate_periods(const DifferentialState& state, const QuadratureOptions& opts) {
    const int R = state.spec.R();
    const int g = state.genus();
    const int n = state.unknowns();
    if (n != g + R) throw std::logic_error("evaluate_periods: degree bookkeeping violated");
    const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);

    PeriodSnapshot snap;
    snap.matrix.A = Eigen::MatrixXcd::Zero(R, n);
    snap.matrix.B = Eigen::MatrixXcd::Zero(2 * g, n);

    // Moments at infinity: components [z^-l sqrt(Q)]_{l=0..R} followed by
    // [z^m / sqrt(Delta E)]_{m=1-R..g+R-1}.
    const int m_lo = 1 - R;
    const int n_moment = R > 0 ? n - m_lo : 0;
    const int comps0 = R + 1 + n_moment;
    auto f0 = [&](cplx z, cplx rho) {
        Eigen::VectorXcd v(comps0);
        const cplx sq = state.S(z) * rho / state.E(z);
        const cplx zinv = 1.0 / z;
        cplx p = 1.0;
        for (int l = 0; l <= R; ++l, p *= zinv) v(l) = sq * p;
        if (n_moment > 0) {
            cplx zm = std::pow(z, m_lo) / rho;
            for (int k = 0; k < n_moment; ++k, zm *= z) v(R + 1 + k) = zm;
        }
        return v;
    };
    const std::vector<cplx> gamma0 = infinity_contour(state.cuts());
    const Eigen::VectorXcd res0 = integrate_on_surface(gamma0, state.radical, f0, comps0, opts) / two_pi_i;
    snap.data.T.assign(res0.data(), res0.data() + R + 1);
    for (int a = 1; a <= R; ++a)
        for (int b = 1; b <= n; ++b) snap.matrix.A(a - 1, b - 1) = res0(R + 1 + (b - a) - m_lo);

    const int comps = 1 + n;
    auto fc = [&](cplx z, cplx rho) {
        Eigen::VectorXcd v(comps);
        v(0) = state.S(z) * rho / state.E(z);
        cplx zk = 1.0 / rho;
        for (int k = 0; k < n; ++k, zk *= z) v(1 + k) = zk;
        return v;
    };
    for (std::size_t j = 0; j < state.basis.cycles.size(); ++j) {
        const Eigen::VectorXcd r = integrate_on_surface(state.basis.cycles[j].polygon, state.radical, fc, comps, opts);
        snap.data.P.push_back(r(0));
        for (int k = 0; k < n; ++k) snap.matrix.B(static_cast<int>(j), k) = r(1 + k);
    }
    return snap;
}

PeriodData compute_periods(const DifferentialState& state, const QuadratureOptions& opts) {
    return evaluate_periods(state, opts).data;
}

PeriodMatrix period_matrix(const DifferentialState& state, const QuadratureOptions& opts) {
    return evaluate_periods(state, opts).matrix;
}

}  // namespace boutroux
