#include "boutroux/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "boutroux/errors.hpp"

namespace boutroux {

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

ComplexPoly::ComplexPoly(std::initializer_list<cplx> coeffs) : coeffs_(coeffs) { trim(); }

ComplexPoly ComplexPoly::from_roots(std::span<const cplx> roots, cplx lead) {
    std::vector<cplx> c{lead};
    for (cplx r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
        c[0] = -r * c[0];
    }
    return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::constant(cplx c) { return ComplexPoly(std::vector<cplx>{c}); }

cplx ComplexPoly::operator[](int k) const {
    if (k < 0 || k > degree()) return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
}

double ComplexPoly::max_abs_coeff() const {
    double m = 0.0;
    for (cplx c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double ComplexPoly::norm() const {
    double s = 0.0;
    for (cplx c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

cplx ComplexPoly::eval(cplx z) const {
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

ComplexPoly ComplexPoly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return ComplexPoly(std::move(d));
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
    trim();
    return *this;
}

ComplexPoly& ComplexPoly::operator-=(const ComplexPoly& other) {
    if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
    for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
    trim();
    return *this;
}

ComplexPoly& ComplexPoly::operator*=(cplx s) {
    for (cplx& c : coeffs_) c *= s;
    trim();
    return *this;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return ComplexPoly(std::move(c));
}

void ComplexPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

cplx eval(const ComplexPoly& p, cplx z) { return p.eval(z); }

namespace {

double root_residual_bound(const ComplexPoly& p, cplx r, double tol) {
    return tol * p.max_abs_coeff() * std::pow(1.0 + std::abs(r), p.degree());
}

}  // namespace

std::vector<cplx> roots(const ComplexPoly& p, double tol) {
    const int n = p.degree();
    if (n < 1) throw std::invalid_argument("roots: polynomial degree must be >= 1");

    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        out.push_back(-p[0] / p[1]);
    } else {
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
        const cplx lead = p.leading();
        for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[i] / lead;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
        if (solver.info() != Eigen::Success) throw NonConvergence("companion eigenvalue solver failed");
        for (int i = 0; i < n; ++i) out.push_back(solver.eigenvalues()(i));
    }

    const ComplexPoly dp = p.derivative();
    for (cplx& r : out) {
        // Newton polish; only keep improvements so clustered roots are not
        // thrown off by a tiny derivative.
        double res = std::abs(p(r));
        for (int it = 0; it < 8 && res > 0.0; ++it) {
            const cplx d = dp(r);
            if (d == cplx{}) break;
            const cplx cand = r - p(r) / d;
            const double cres = std::abs(p(cand));
            if (!(cres < res)) break;
            r = cand;
            res = cres;
        }
        if (!(res <= root_residual_bound(p, r, tol)))
            throw NonConvergence("root residual " + std::to_string(res) + " above tolerance");
    }
    return out;
}

SylvesterSplit sylvester_split(const ComplexPoly& s, const ComplexPoly& delta,
                               const ComplexPoly& f_dot, double coprime_tol) {
    const int L = s.degree();
    const int M = delta.degree();
    if (L < 0 || M < 0) throw std::invalid_argument("sylvester_split: S and Delta must be nonzero");
    const int n = L + M;
    if (f_dot.degree() > n - 1)
        throw std::invalid_argument("sylvester_split: deg F_dot exceeds M+L-1");

    SylvesterSplit out;
    if (n == 0) return out;

    // Columns 0..L-1: z^i * Delta; columns L..L+M-1: z^j * S/2.
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < L; ++i)
        for (int k = 0; k <= M; ++k) A(i + k, i) = delta[k];
    for (int j = 0; j < M; ++j)
        for (int k = 0; k <= L; ++k) A(j + k, L + j) = 0.5 * s[k];

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    double hadamard = std::abs(lu.determinant());
    for (int c = 0; c < n; ++c) hadamard /= A.col(c).norm();
    if (!(hadamard >= coprime_tol))
        throw SingularSylvester("S and Delta are numerically not coprime (normalised resultant " +
                                std::to_string(hadamard) + ")");

    Eigen::VectorXcd rhs(n);
    for (int k = 0; k < n; ++k) rhs(k) = f_dot[k];
    Eigen::VectorXcd x = lu.solve(rhs);
    // One step of iterative refinement keeps the residual at round-off level.
    x += lu.solve(rhs - A * x);

    std::vector<cplx> sd(x.data(), x.data() + L);
    std::vector<cplx> dd(x.data() + L, x.data() + n);
    out.s_dot = ComplexPoly(std::move(sd));
    out.delta_dot = ComplexPoly(std::move(dd));

    const ComplexPoly back = out.s_dot * delta + s * out.delta_dot * 0.5;
    const double fn = f_dot.norm();
    out.residual = fn > 0.0 ? (back - f_dot).norm() / fn : (back - f_dot).norm();
    return out;
}

}  // namespace boutroux
