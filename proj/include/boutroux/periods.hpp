#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "boutroux/quadrature.hpp"
#include "boutroux/radical.hpp"

namespace boutroux {

struct DifferentialState;

/// Closed polygon around the arc joining two branch points.
struct Cycle {
    std::vector<cplx> polygon;  ///< closed: back() == front()
    int id_a = -1;              ///< identities of the enclosed branch points
    int id_b = -1;
    double clearance = 0.0;     ///< design distance from the arc to the polygon
};

struct HomologyBasis {
    std::vector<Cycle> cycles;
    int epoch = 0;  ///< bumped whenever any cycle is (re)built
};

/// Branch point with a stable identity (E points 0..N-1, Delta roots N+k).
struct TaggedPoint {
    cplx z;
    int id;
};

/// Consecutive-pair basis. Branch points are ordered by cut (as produced by
/// select_cuts) and, inside a cut, by (Re, Im); cycle k encircles the pair
/// {p_k, p_k+1}, k = 1..2g. `ids[i]` tags cuts.branch_points[i]; when empty
/// the index itself is used.
HomologyBasis build_homology_basis(const CutSystem& cuts, std::span<const int> ids = {});

/// Polygon around the arc from p to q that keeps clear of `others`. Tries
/// the straight arc first and bent arcs when a point sits close to it.
/// Throws ClearanceFailure when no arc keeps a usable margin.
Cycle make_cycle(cplx p, cplx q, std::span<const cplx> others, const CutSystem& cuts);

/// Whether a cycle still encloses exactly its two branch points with margin
/// and keeps its vertices off the given cuts.
bool cycle_still_valid(const Cycle& cycle, std::span<const TaggedPoint> points, const CutSystem& cuts);

/// Keep still-valid cycles and rebuild the others around the same pair of
/// identities. Returns the number of rebuilt cycles.
int refresh_basis(HomologyBasis& basis, std::span<const TaggedPoint> points, const CutSystem& cuts);

/// Integrand callback: z and the sheet-tracked radical value sqrt(Delta E)(z).
using SheetIntegrand = std::function<Eigen::VectorXcd(cplx z, cplx rho)>;

/// Integral along a closed polygon of the analytic continuation of the
/// integrand: start on the sheet given by the cut radical at the first
/// vertex, flip the sheet at every cut crossing.
Eigen::VectorXcd integrate_on_surface(std::span<const cplx> polygon, const CutRadical& radical,
                                      const SheetIntegrand& f, int components,
                                      const QuadratureOptions& opts = {});

/// Large counter-clockwise polygonal circle used for the moments at infinity.
std::vector<cplx> infinity_contour(const CutSystem& cuts);

/// Scalar sheet-tracked integral of z^(-weight) sqrt(Q) (or sqrt(Q) when
/// weight is empty) along a closed polygon.
cplx sheet_tracked_integral(std::span<const cplx> polygon, const DifferentialState& state,
                            std::optional<int> weight = std::nullopt,
                            const QuadratureOptions& opts = {});

struct PeriodData {
    std::vector<cplx> T;  ///< T_0..T_R
    std::vector<cplx> P;  ///< periods over the 2g basis cycles
};

struct PeriodMatrix {
    Eigen::MatrixXcd A;  ///< R x (g+R): moments of z^(b-a) / sqrt(Delta E) at infinity
    Eigen::MatrixXcd B;  ///< 2g x (g+R): cycle integrals of z^(b-1) / sqrt(Delta E)
};

struct PeriodSnapshot {
    PeriodData data;
    PeriodMatrix matrix;
};

/// All period data and the extended period matrix in one pass.
PeriodSnapshot evaluate_periods(const DifferentialState& state, const QuadratureOptions& opts = {});
PeriodData compute_periods(const DifferentialState& state, const QuadratureOptions& opts = {});
PeriodMatrix period_matrix(const DifferentialState& state, const QuadratureOptions& opts = {});

}  // namespace boutroux
