#include "boutroux/radical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "boutroux/errors.hpp"

namespace boutroux {

double cross2(cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); }

double point_segment_distance(cplx z, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    const double t = std::clamp(((z - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
    auto orient = [](cplx a, cplx b, cplx c) {
        const double v = cross2(b - a, c - a);
        return (v > 0.0) - (v < 0.0);
    };
    auto on_segment = [](cplx a, cplx b, cplx c) {
        return std::min(a.real(), b.real()) <= c.real() && c.real() <= std::max(a.real(), b.real()) &&
               std::min(a.imag(), b.imag()) <= c.imag() && c.imag() <= std::max(a.imag(), b.imag());
    };
    const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment(q1, q2, p2)) return true;
    return false;
}

double diameter(std::span<const cplx> pts) {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
    return d;
}

int winding_number(std::span<const cplx> polygon, cplx z) {
    int wn = 0;
    for (std::size_t i = 0; i + 1 < polygon.size(); ++i) {
        const cplx a = polygon[i], b = polygon[i + 1];
        if (a.imag() <= z.imag()) {
            if (b.imag() > z.imag() && cross2(b - a, z - a) > 0.0) ++wn;
        } else if (b.imag() <= z.imag() && cross2(b - a, z - a) < 0.0) {
            --wn;
        }
    }
    return wn;
}

namespace {

bool lex_less(cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

// Counter-clockwise hull keeping collinear boundary points, starting at the
// lexicographically smallest point. Empty result means "all collinear".
std::vector<cplx> hull_with_collinear(std::vector<cplx> pts, double tol) {
    std::sort(pts.begin(), pts.end(), lex_less);
    if (pts.size() < 3) return {};
    bool collinear = true;
    for (std::size_t i = 2; i < pts.size() && collinear; ++i)
        if (std::abs(cross2(pts[1] - pts[0], pts[i] - pts[0])) > tol) collinear = false;
    // A single off-line point is enough to span a hull, but test all pairs
    // relative to the extreme points for robustness.
    if (collinear) {
        const cplx a = pts.front(), b = pts.back();
        for (const cplx& p : pts)
            if (std::abs(cross2(b - a, p - a)) > tol) collinear = false;
    }
    if (collinear) return {};

    std::vector<cplx> lower, upper;
    for (const cplx& p : pts) {
        while (lower.size() >= 2 &&
               cross2(lower.back() - lower[lower.size() - 2], p - lower[lower.size() - 2]) < -tol)
            lower.pop_back();
        lower.push_back(p);
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (upper.size() >= 2 &&
               cross2(upper.back() - upper[upper.size() - 2], *it - upper[upper.size() - 2]) < -tol)
            upper.pop_back();
        upper.push_back(*it);
    }
    std::vector<cplx> hull(lower.begin(), lower.end() - 1);
    for (auto it = upper.begin(); it != upper.end() - 1; ++it)
        if (std::find(hull.begin(), hull.end(), *it) == hull.end()) hull.push_back(*it);
    return hull;
}

bool cuts_valid(const std::vector<Cut>& cuts, std::span<const cplx> bps, double eps) {
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        for (std::size_t j = i + 1; j < cuts.size(); ++j)
            if (segments_intersect(cuts[i].a, cuts[i].b, cuts[j].a, cuts[j].b)) return false;
        for (const cplx& p : bps) {
            if (p == cuts[i].a || p == cuts[i].b) continue;
            if (point_segment_distance(p, cuts[i].a, cuts[i].b) < eps) return false;
        }
    }
    return true;
}

std::vector<Cut> pair_sorted(std::vector<cplx> pts) {
    std::sort(pts.begin(), pts.end(), lex_less);
    std::vector<Cut> cuts;
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) cuts.push_back({pts[i], pts[i + 1]});
    return cuts;
}

}  // namespace

CutSystem select_cuts(std::span<const cplx> branch_points) {
    const std::size_t n = branch_points.size();
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("select_cuts: need an even number >= 2 of branch points");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (branch_points[i] == branch_points[j])
                throw std::invalid_argument("select_cuts: branch points must be distinct");

    CutSystem out;
    out.branch_points.assign(branch_points.begin(), branch_points.end());
    out.scale = std::max(diameter(branch_points), 1e-12);
    const double tol = 1e-12 * out.scale * out.scale;

    std::vector<cplx> remaining(branch_points.begin(), branch_points.end());
    while (!remaining.empty()) {
        std::vector<cplx> hull = hull_with_collinear(remaining, tol);
        if (hull.empty()) {
            // Degenerate stage (two points or a collinear set).
            for (const Cut& c : pair_sorted(remaining)) out.cuts.push_back(c);
            remaining.clear();
            break;
        }
        const std::size_t h = hull.size();
        for (std::size_t i = 0; i + 1 < h; i += 2) {
            out.cuts.push_back({hull[i], hull[i + 1]});
            std::erase(remaining, hull[i]);
            std::erase(remaining, hull[i + 1]);
        }
    }

    if (!cuts_valid(out.cuts, out.branch_points, out.eps_cut())) {
        std::vector<Cut> fallback = pair_sorted(out.branch_points);
        if (!cuts_valid(fallback, out.branch_points, out.eps_cut()))
            throw DegenerateHull("no non-intersecting straight cut system found");
        out.cuts = std::move(fallback);
    }
    return out;
}

CutRadical::CutRadical(CutSystem cuts) : cuts_(std::move(cuts)) {
    conj_dir_.reserve(cuts_.cuts.size());
    cplx centroid = 0.0;
    for (const Cut& c : cuts_.cuts) {
        conj_dir_.push_back(std::conj(c.a - c.b));
        centroid += c.a + c.b;
    }
    if (!cuts_.cuts.empty()) centroid /= 2.0 * static_cast<double>(cuts_.cuts.size());
    // Each factor is ~ (z - midpoint) at infinity; confirm at a far probe.
    const cplx probe = centroid + 10.0 * cuts_.scale;
    cplx ref = 1.0;
    for (const Cut& c : cuts_.cuts) ref *= probe - 0.5 * (c.a + c.b);
    sign_ = (eval_unchecked(probe) / ref).real() >= 0.0 ? 1.0 : -1.0;
}

cplx CutRadical::eval_unchecked(cplx z) const {
    cplx acc = sign_;
    for (std::size_t j = 0; j < conj_dir_.size(); ++j) {
        const cplx cd = conj_dir_[j];
        const Cut& c = cuts_.cuts[j];
        acc *= std::sqrt(cd * (z - c.a)) * std::sqrt(cd * (z - c.b)) / cd;
    }
    return acc;
}

double CutRadical::distance_to_cuts(cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Cut& c : cuts_.cuts) d = std::min(d, point_segment_distance(z, c.a, c.b));
    return d;
}

cplx CutRadical::operator()(cplx z) const {
    if (distance_to_cuts(z) < cuts_.eps_cut())
        throw OnCutEvaluation("radical evaluated on a branch cut");
    return eval_unchecked(z);
}

std::vector<Crossing> segment_crossings(cplx p, cplx q, const CutSystem& cuts) {
    std::vector<Crossing> out;
    const cplx d1 = q - p;
    const double eps = cuts.eps_cut();
    for (std::size_t j = 0; j < cuts.cuts.size(); ++j) {
        const Cut& c = cuts.cuts[j];
        const cplx d2 = c.b - c.a;
        const double denom = cross2(d1, d2);
        const double sin_angle = std::abs(denom) / (std::abs(d1) * std::abs(d2));
        if (sin_angle < 1e-8) {
            const bool touching = point_segment_distance(p, c.a, c.b) < eps ||
                                  point_segment_distance(q, c.a, c.b) < eps ||
                                  point_segment_distance(c.a, p, q) < eps ||
                                  point_segment_distance(c.b, p, q) < eps ||
                                  segments_intersect(p, q, c.a, c.b);
            if (touching) throw TangentialCrossing("path segment runs along a cut");
            continue;
        }
        const double t = cross2(c.a - p, d2) / denom;
        const double s = cross2(c.a - p, d1) / denom;
        if (t > 0.0 && t < 1.0 && s >= 0.0 && s <= 1.0)
            out.push_back({static_cast<int>(j), t});
    }
    std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
    return out;
}

SheetPath SheetPath::closed_polygon(std::vector<cplx> vertices, const CutSystem& cuts) {
    if (vertices.size() < 3) throw std::invalid_argument("closed_polygon: need >= 3 vertices");
    if (vertices.front() != vertices.back()) vertices.push_back(vertices.front());
    const double eps = cuts.eps_cut();
    for (const cplx& v : vertices)
        for (const Cut& c : cuts.cuts)
            if (point_segment_distance(v, c.a, c.b) < eps)
                throw OnCutEvaluation("path vertex lies on a cut");
    SheetPath path;
    path.vertices = std::move(vertices);
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i)
        path.crossing_marks.push_back(segment_crossings(path.vertices[i], path.vertices[i + 1], cuts));
    return path;
}

int SheetPath::total_crossings() const {
    int n = 0;
    for (const auto& m : crossing_marks) n += static_cast<int>(m.size());
    return n;
}

}  // namespace boutroux
