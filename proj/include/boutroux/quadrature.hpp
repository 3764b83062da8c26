#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <vector>

namespace boutroux {

using cplx = std::complex<double>;

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes and weights of the n-point rule (cached per n, thread safe).
const GaussLegendre& gauss_legendre(int n);

struct QuadratureOptions {
    int order = 32;
    double tol = 1e-12;   ///< panel acceptance, relative to the panel's L1 mass
    int max_depth = 48;
};

/// Vector-valued integrand evaluated at a point of a straight segment.
using SegmentIntegrand = std::function<Eigen::VectorXcd(cplx)>;

/// Adaptive Gauss-Legendre integral of f(z) dz along the straight segment
/// [a, b]. A panel is accepted once the whole-panel and split-panel
/// estimates agree component-wise within tol times the panel's L1 mass.
Eigen::VectorXcd integrate_segment(const SegmentIntegrand& f, cplx a, cplx b, int components,
                                   const QuadratureOptions& opts = {});

}  // namespace boutroux
