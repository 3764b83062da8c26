#include "boutroux/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace boutroux {

namespace {

GaussLegendre compute_rule(int n) {
    GaussLegendre rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -z;
        rule.nodes[hi] = z;
        rule.weights[lo] = rule.weights[hi] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return rule;
}

struct PanelResult {
    Eigen::VectorXcd value;
    Eigen::VectorXd mass;
};

PanelResult panel(const SegmentIntegrand& f, cplx a, cplx b, const GaussLegendre& rule,
                  int components) {
    const cplx half = 0.5 * (b - a);
    const cplx mid = 0.5 * (a + b);
    PanelResult r{Eigen::VectorXcd::Zero(components), Eigen::VectorXd::Zero(components)};
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        Eigen::VectorXcd v = f(mid + half * rule.nodes[k]);
        r.value += rule.weights[k] * v;
        r.mass += rule.weights[k] * v.cwiseAbs();
    }
    r.value *= half;
    r.mass *= std::abs(half);
    return r;
}

Eigen::VectorXcd adapt(const SegmentIntegrand& f, cplx a, cplx b, const PanelResult& whole,
                       const GaussLegendre& rule, int components, const QuadratureOptions& opts,
                       int depth) {
    const cplx m = 0.5 * (a + b);
    const PanelResult left = panel(f, a, m, rule, components);
    const PanelResult right = panel(f, m, b, rule, components);
    const Eigen::VectorXcd split = left.value + right.value;
    const Eigen::VectorXd diff = (split - whole.value).cwiseAbs();
    const Eigen::VectorXd mass = left.mass + right.mass;
    bool ok = true;
    for (int c = 0; c < components; ++c)
        if (diff(c) > opts.tol * mass(c) + 1e-300) ok = false;
    if (ok || depth >= opts.max_depth) return split;
    return adapt(f, a, m, left, rule, components, opts, depth + 1) +
           adapt(f, m, b, right, rule, components, opts, depth + 1);
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard lock(mtx);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendre>(compute_rule(n));
    return *slot;
}

Eigen::VectorXcd integrate_segment(const SegmentIntegrand& f, cplx a, cplx b, int components,
                                   const QuadratureOptions& opts) {
    const GaussLegendre& rule = gauss_legendre(opts.order);
    const PanelResult whole = panel(f, a, b, rule, components);
    return adapt(f, a, b, whole, rule, components, opts, 0);
}

}  // namespace boutroux
