#include "boutroux/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <numeric>

#include "boutroux/errors.hpp"
#include "boutroux/quadrature.hpp"

namespace boutroux {

std::string to_string(CriticalKind k) {
    switch (k) {
        case CriticalKind::SimplePoleE: return "SimplePoleE";
        case CriticalKind::SimpleZeroDelta: return "SimpleZeroDelta";
        case CriticalKind::Stagnation: return "Stagnation";
    }
    return "?";
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::ReachedNode: return "reached-node";
        case Termination::ClosedLoop: return "closed-loop";
        case Termination::Escaped: return "escaped";
        case Termination::StepLimit: return "step-limit";
        case Termination::Error: return "error";
    }
    return "?";
}

int local_order(const CriticalPoint& p) {
    switch (p.kind) {
        case CriticalKind::SimplePoleE: return -1;
        case CriticalKind::SimpleZeroDelta: return 1;
        case CriticalKind::Stagnation: return 2 * p.multiplicity;
    }
    return 0;
}

namespace {

constexpr double kClusterTol = 1e-6;
constexpr double kAmbiguityTol = 1e-4;

std::vector<cplx> launch_directions(cplx c, int n) {
    std::vector<cplx> out;
    const double base = std::numbers::pi - std::arg(c);
    for (int k = 0; k < n + 2; ++k) out.push_back(std::polar(1.0, (base + 2.0 * std::numbers::pi * k) / (n + 2)));
    return out;
}

double critical_diameter(const std::vector<CriticalPoint>& nodes) {
    std::vector<cplx> pts;
    for (const auto& n : nodes) pts.push_back(n.location);
    const double d = diameter(pts);
    return d > 0.0 ? d : 1.0;
}

// Sign of sqrt Q chosen to continue w_ref.
cplx continue_sqrt(const DifferentialState& st, cplx z, cplx w_ref) {
    cplx w = std::sqrt(st.Q(z));
    if ((w * std::conj(w_ref)).real() < 0.0) w = -w;
    return w;
}

std::vector<std::size_t> sorted_order(const GaussLegendre& gl) {
    std::vector<std::size_t> order(gl.nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gl.nodes[a] < gl.nodes[b]; });
    return order;
}

// Integral of sqrt Q along the chord a -> b, sign continued from w_a.
cplx chord_integral(const DifferentialState& st, cplx a, cplx b, cplx w_a) {
    const GaussLegendre& gl = gauss_legendre(16);
    const auto order = sorted_order(gl);
    const cplx half = 0.5 * (b - a);
    cplx w = w_a;
    cplx sum = 0.0;
    for (std::size_t i : order) {
        const cplx z = 0.5 * (a + b) + half * gl.nodes[i];
        w = continue_sqrt(st, z, w);
        sum += gl.weights[i] * w;
    }
    return sum * half;
}

// Integral of sqrt Q along the ray from the critical point p to z, with
// z = p + tau^2 (z - p) to tame the end-point singularity. The sign is
// continued backwards from w_z.
cplx ray_integral(const DifferentialState& st, cplx p, cplx z, cplx w_z) {
    const GaussLegendre& gl = gauss_legendre(32);
    const auto order = sorted_order(gl);
    const cplx d = z - p;
    cplx w = w_z;
    cplx sum = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const double tau = 0.5 * (1.0 + gl.nodes[*it]);
        w = continue_sqrt(st, p + tau * tau * d, w);
        sum += 0.5 * gl.weights[*it] * w * 2.0 * tau;
    }
    return sum * d;
}

cplx velocity(cplx w) { return cplx(0.0, 1.0) * std::conj(w) / std::abs(w); }

double polyline_distance(cplx z, const std::vector<cplx>& line) {
    if (line.size() == 1) return std::abs(z - line[0]);
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < line.size(); ++i) d = std::min(d, point_segment_distance(z, line[i], line[i + 1]));
    return d;
}

cplx arc_midpoint(const std::vector<cplx>& line) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) total += std::abs(line[i + 1] - line[i]);
    double run = 0.0;
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        const double seg = std::abs(line[i + 1] - line[i]);
        if (run + seg >= 0.5 * total && seg > 0.0) return line[i] + (0.5 * total - run) / seg * (line[i + 1] - line[i]);
        run += seg;
    }
    return line.back();
}

}  // namespace

std::vector<CriticalPoint> critical_points(const DifferentialState& state) {
    std::vector<CriticalPoint> out;
    const ComplexPoly e_prime = state.E.derivative();
    const ComplexPoly d_prime = state.delta.derivative();

    for (const cplx& e : state.spec.e_points) {
        const cplx s = state.S(e);
        CriticalPoint p{e, CriticalKind::SimplePoleE, 1, {}};
        p.directions = launch_directions(s * s * state.delta(e) / e_prime(e), -1);
        out.push_back(std::move(p));
    }
    for (const cplx& d : state.delta_roots) {
        const cplx s = state.S(d);
        CriticalPoint p{d, CriticalKind::SimpleZeroDelta, 1, {}};
        p.directions = launch_directions(s * s * d_prime(d) / state.E(d), 1);
        out.push_back(std::move(p));
    }

    std::vector<cplx> all = state.branch_points();
    all.insert(all.end(), state.s_roots.begin(), state.s_roots.end());
    const double D = std::max(diameter(all), 1.0);

    std::vector<std::vector<cplx>> clusters;
    for (const cplx& r : state.s_roots) {
        bool placed = false;
        for (auto& c : clusters)
            if (std::abs(c.front() - r) < kClusterTol * D) {
                c.push_back(r);
                placed = true;
                break;
            }
        if (!placed) clusters.push_back({r});
    }
    for (std::size_t i = 0; i < clusters.size(); ++i)
        for (std::size_t j = i + 1; j < clusters.size(); ++j)
            for (const cplx& a : clusters[i])
                for (const cplx& b : clusters[j])
                    if (std::abs(a - b) < kAmbiguityTol * D)
                        throw MultiplicityAmbiguity("S roots " + std::to_string(std::abs(a - b)) +
                                                    " apart cannot be resolved into one multiple root");

    for (std::size_t i = 0; i < clusters.size(); ++i) {
        cplx loc = 0.0;
        for (const cplx& r : clusters[i]) loc += r;
        loc /= static_cast<double>(clusters[i].size());
        cplx reduced = state.S.leading();
        for (std::size_t j = 0; j < clusters.size(); ++j)
            if (j != i)
                for (const cplx& r : clusters[j]) reduced *= loc - r;
        const int m = static_cast<int>(clusters[i].size());
        CriticalPoint p{loc, CriticalKind::Stagnation, m, {}};
        p.directions = launch_directions(reduced * reduced * state.delta(loc) / state.E(loc), 2 * m);
        out.push_back(std::move(p));
    }
    return out;
}

TraceResult trace(const DifferentialState& state, const std::vector<CriticalPoint>& nodes, cplx z0, cplx dir,
                  const TraceOptions& opts) {
    const double D = critical_diameter(nodes);
    cplx centre = 0.0;
    for (const auto& n : nodes) centre += n.location;
    if (!nodes.empty()) centre /= static_cast<double>(nodes.size());

    const double capture = opts.capture * D;
    const double escape = opts.escape * D;
    const double atol = opts.rk_tol * D;
    const double level_tol = opts.level_tol * D;
    const double h_max = 0.01 * D;
    dir /= std::abs(dir);

    int start = -1;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (std::abs(nodes[i].location - z0) < 1e-9 * D) start = static_cast<int>(i);

    auto node_distance = [&](cplx z) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& n : nodes) d = std::min(d, std::abs(z - n.location));
        return d;
    };

    TraceResult res;
    res.path.push_back(z0);

    cplx z, w, W;
    // launch length, shortened when another critical point sits close by
    double h0 = 10.0 * capture;
    if (start >= 0)
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (static_cast<int>(i) != start) h0 = std::min(h0, 0.25 * std::abs(nodes[i].location - z0));
    if (start >= 0) {
        z = z0 + h0 * dir;
        w = std::sqrt(state.Q(z));
        if ((velocity(w) * std::conj(dir)).real() < 0.0) w = -w;
        W = ray_integral(state, z0, z, w);
        for (int it = 0; it < 4 && std::abs(W.real()) > 0.01 * level_tol; ++it) {
            z -= W.real() * std::conj(w) / std::norm(w);
            w = continue_sqrt(state, z, w);
            W = ray_integral(state, z0, z, w);
        }
        res.path.push_back(z);
    } else {
        z = z0;
        w = std::sqrt(state.Q(z));
        if ((velocity(w) * std::conj(dir)).real() < 0.0) w = -w;
        W = 0.0;
    }
    res.max_drift = std::abs(W.real());

    // Dormand-Prince 5(4)
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    double h = std::min(h0, 0.1 * node_distance(z));
    double travelled = 0.0;
    while (true) {
        if (res.steps >= opts.max_steps) {
            res.termination = Termination::StepLimit;
            return res;
        }
        const double dist = node_distance(z);
        h = std::min({h, 0.1 * dist, h_max});
        if (h < opts.h_floor * D) throw StiffRegion("trajectory step underflow near " + std::to_string(z.real()) + "," +
                                                    std::to_string(z.imag()));

        const cplx w_ref = w;
        auto f = [&](cplx p) { return velocity(continue_sqrt(state, p, w_ref)); };
        const cplx k1 = velocity(w);
        const cplx k2 = f(z + h * (a21 * k1));
        const cplx k3 = f(z + h * (a31 * k1 + a32 * k2));
        const cplx k4 = f(z + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const cplx k5 = f(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const cplx k6 = f(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const cplx z_new = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const cplx k7 = f(z_new);
        const double err = std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
        const double factor = err > 0.0 ? std::clamp(0.9 * std::pow(atol / err, 0.2), 0.2, 4.0) : 4.0;
        if (err > atol) {
            h *= factor;
            continue;
        }

        cplx zn = z_new;
        cplx wn = continue_sqrt(state, zn, w);
        cplx Wn = W + chord_integral(state, z, zn, w);
        for (int it = 0; it < 4 && std::abs(Wn.real()) > 0.5 * level_tol; ++it) {
            const cplx zp = zn - Wn.real() * std::conj(wn) / std::norm(wn);
            Wn += chord_integral(state, zn, zp, wn);
            wn = continue_sqrt(state, zp, wn);
            zn = zp;
        }
        travelled += std::abs(zn - z);
        z = zn;
        w = wn;
        W = Wn;
        res.path.push_back(z);
        res.max_drift = std::max(res.max_drift, std::abs(W.real()));
        ++res.steps;
        h *= factor;

        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (std::abs(z - nodes[i].location) < capture) {
                res.path.push_back(nodes[i].location);
                res.termination = Termination::ReachedNode;
                res.end_node = static_cast<int>(i);
                return res;
            }
        if (std::abs(z - centre) > escape) {
            res.termination = Termination::Escaped;
            return res;
        }
        if (start < 0 && travelled > 4.0 * h0 && std::abs(z - z0) < capture) {
            res.path.push_back(z0);
            res.termination = Termination::ClosedLoop;
            return res;
        }
    }
}

TraceResult trace(const DifferentialState& state, cplx z0, cplx dir, const TraceOptions& opts) {
    return trace(state, critical_points(state), z0, dir, opts);
}

int TrajectoryGraph::component_count() const {
    if (component.empty()) return 0;
    return *std::max_element(component.begin(), component.end()) + 1;
}

TrajectoryGraph build_graph(const DifferentialState& state, const TraceOptions& opts) {
    TrajectoryGraph g;
    g.nodes = critical_points(state);
    const double D = critical_diameter(g.nodes);

    std::vector<std::future<GraphEdge>> jobs;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (std::size_t k = 0; k < g.nodes[i].directions.size(); ++k)
            jobs.push_back(std::async(std::launch::async, [&, i, k] {
                GraphEdge e;
                e.from = static_cast<int>(i);
                e.direction = static_cast<int>(k);
                try {
                    TraceResult r = trace(state, g.nodes, g.nodes[i].location, g.nodes[i].directions[k], opts);
                    e.path = std::move(r.path);
                    e.termination = r.termination;
                    e.to = r.end_node;
                    e.max_drift = r.max_drift;
                } catch (const Error& err) {
                    e.path = {g.nodes[i].location};
                    e.termination = Termination::Error;
                    e.error = err.what();
                }
                return e;
            }));
    g.launched = static_cast<int>(jobs.size());

    const double same_tol = 10.0 * opts.capture * D;
    for (auto& job : jobs) {
        GraphEdge e = job.get();
        bool duplicate = false;
        if (e.bounded()) {
            const cplx mid = arc_midpoint(e.path);
            for (const GraphEdge& k : g.edges) {
                if (!k.bounded()) continue;
                const bool same_pair = (k.from == e.from && k.to == e.to) || (k.from == e.to && k.to == e.from);
                if (same_pair && polyline_distance(mid, k.path) < same_tol) {
                    duplicate = true;
                    break;
                }
            }
        }
        if (!duplicate) g.edges.push_back(std::move(e));
    }

    const std::size_t n = g.nodes.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    g.adjacency.assign(n, {});
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const GraphEdge& e = g.edges[i];
        if (!e.bounded()) continue;
        g.adjacency[e.from].push_back(static_cast<int>(i));
        if (e.to != e.from) g.adjacency[e.to].push_back(static_cast<int>(i));
        parent[find(e.from)] = find(e.to);
    }
    g.component.assign(n, -1);
    int next = 0;
    std::vector<int> label(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const int r = find(static_cast<int>(i));
        if (label[r] < 0) label[r] = next++;
        g.component[i] = label[r];
    }
    return g;
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double h = 0.0;
    for (const cplx& p : a) h = std::max(h, polyline_distance(p, b));
    for (const cplx& p : b) h = std::max(h, polyline_distance(p, a));
    return h;
}

}  // namespace boutroux
