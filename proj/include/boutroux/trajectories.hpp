#pragma once

#include <string>
#include <vector>

#include "boutroux/state.hpp"

namespace boutroux {

enum class CriticalKind { SimplePoleE, SimpleZeroDelta, Stagnation };

std::string to_string(CriticalKind k);

struct CriticalPoint {
    cplx location;
    CriticalKind kind = CriticalKind::SimplePoleE;
    int multiplicity = 1;          // S-multiplicity for stagnation points
    std::vector<cplx> directions;  // unit launch directions
};

/// Local order n of Q at the point: -1, 1 or 2m.
int local_order(const CriticalPoint& p);

/// E points, then Delta roots, then clustered S roots. Directions are the
/// n+2 rays where Q dz^2 < 0 to leading order.
std::vector<CriticalPoint> critical_points(const DifferentialState& state);

enum class Termination { ReachedNode, ClosedLoop, Escaped, StepLimit, Error };

std::string to_string(Termination t);

struct TraceOptions {
    double capture = 1e-3;     // times the diameter of the critical set
    double escape = 10.0;      // times the diameter
    int max_steps = 100000;
    double rk_tol = 1e-9;      // local error, times the diameter
    double level_tol = 1e-6;   // allowed |Re W - Re W(start)|, times the diameter
    double h_floor = 1e-14;    // times the diameter
};

struct TraceResult {
    std::vector<cplx> path;
    Termination termination = Termination::Error;
    int end_node = -1;
    double max_drift = 0.0;    // largest |Re W - Re W(start)| seen along the path
    int steps = 0;
};

/// Horizontal trajectory of -Q dz^2 (level curve of Re of the integral of
/// sqrt Q) from z0 along dir. When z0 is one of `nodes`, the first step is
/// the straight launch of length 10 capture radii (at most a quarter of the
/// distance to the nearest other critical point). Throws StiffRegion when
/// the step size underflows.
TraceResult trace(const DifferentialState& state, const std::vector<CriticalPoint>& nodes, cplx z0, cplx dir,
                  const TraceOptions& opts = {});
TraceResult trace(const DifferentialState& state, cplx z0, cplx dir, const TraceOptions& opts = {});

struct GraphEdge {
    int from = -1;
    int to = -1;  // -1 unless the trace reached a node
    int direction = -1;
    std::vector<cplx> path;
    Termination termination = Termination::Error;
    double max_drift = 0.0;
    std::string error;

    bool bounded() const { return termination == Termination::ReachedNode; }
};

struct TrajectoryGraph {
    std::vector<CriticalPoint> nodes;
    std::vector<GraphEdge> edges;               // deduplicated
    std::vector<std::vector<int>> adjacency;    // node -> incident edge indices (bounded edges only)
    std::vector<int> component;                 // connected component label per node
    int launched = 0;                           // traces attempted before deduplication

    int component_count() const;
    bool connected() const { return component_count() <= 1; }
};

TrajectoryGraph build_graph(const DifferentialState& state, const TraceOptions& opts = {});

/// Symmetric Hausdorff distance between two polylines (vertices against segments).
double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace boutroux
