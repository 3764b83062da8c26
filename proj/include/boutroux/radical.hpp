#pragma once

#include <complex>
#include <span>
#include <vector>

#include "boutroux/poly.hpp"

namespace boutroux {

struct Cut {
    cplx a;
    cplx b;
};

/// Straight, pairwise disjoint cuts pairing all 2g+2 branch points.
struct CutSystem {
    std::vector<Cut> cuts;
    std::vector<cplx> branch_points;
    double scale = 1.0;  ///< diameter of the branch-point set (>= tiny floor)

    int genus() const { return static_cast<int>(cuts.size()) - 1; }
    double eps_cut() const { return 1e-9 * scale; }
};

/// Pair branch points into straight cuts by convex-hull peeling: take the
/// hull boundary (collinear boundary points kept as vertices), starting at
/// the lexicographically smallest vertex add every second side, drop the
/// paired points, repeat. With an odd hull the closing side is skipped and
/// its last vertex carried to the next peel. Collinear leftovers are paired
/// consecutively after sorting by (Re, Im).
CutSystem select_cuts(std::span<const cplx> branch_points);

/// sqrt(prod_j (z - a_j)(z - b_j)) with discontinuities exactly on the cuts
/// and the determination ~ +z^(g+1) at infinity.
class CutRadical {
public:
    CutRadical() = default;
    explicit CutRadical(CutSystem cuts);

    const CutSystem& cuts() const { return cuts_; }
    /// Throws OnCutEvaluation within eps_cut of a cut.
    cplx operator()(cplx z) const;
    /// Same, without the on-cut check (callers guarantee clearance).
    cplx eval_unchecked(cplx z) const;
    double distance_to_cuts(cplx z) const;

private:
    CutSystem cuts_;
    std::vector<cplx> conj_dir_;  // conj(a_j - b_j)
    double sign_ = 1.0;
};

/// One crossing of a path segment with a cut.
struct Crossing {
    int cut;
    double t;  ///< parameter along the segment, in (0, 1)
};

/// Transversal intersections of [p, q] with the cuts, sorted by t. Throws
/// TangentialCrossing for (near-)parallel overlaps or intersections within
/// angular tolerance of tangency.
std::vector<Crossing> segment_crossings(cplx p, cplx q, const CutSystem& cuts);

/// Closed polygon (first vertex repeated at the end) and its crossing marks
/// against a cut system, one list per segment.
struct SheetPath {
    std::vector<cplx> vertices;
    std::vector<std::vector<Crossing>> crossing_marks;

    static SheetPath closed_polygon(std::vector<cplx> vertices, const CutSystem& cuts);
    int total_crossings() const;
};

// Small planar helpers shared by the geometric modules.
double cross2(cplx u, cplx v);
double point_segment_distance(cplx z, cplx a, cplx b);
bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2);
double diameter(std::span<const cplx> pts);
/// Winding number of a closed polygon (last vertex == first) around z.
int winding_number(std::span<const cplx> polygon, cplx z);

}  // namespace boutroux
