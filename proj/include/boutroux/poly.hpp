#pragma once

#include <complex>
#include <span>
#include <vector>

namespace boutroux {

using cplx = std::complex<double>;

/// Dense polynomial with complex coefficients, stored in ascending degree.
/// Trailing zeros are trimmed on construction, so the zero polynomial has
/// no coefficients and degree() == -1.
class ComplexPoly {
public:
    ComplexPoly() = default;
    explicit ComplexPoly(std::vector<cplx> coeffs);
    ComplexPoly(std::initializer_list<cplx> coeffs);

    /// Monic-times-lead polynomial lead * prod (z - r).
    static ComplexPoly from_roots(std::span<const cplx> roots, cplx lead = 1.0);
    static ComplexPoly constant(cplx c);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    /// Coefficient of z^k; zero outside the stored range.
    cplx operator[](int k) const;
    cplx leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }
    double max_abs_coeff() const;
    double norm() const;

    cplx operator()(cplx z) const { return eval(z); }
    cplx eval(cplx z) const;
    ComplexPoly derivative() const;

    ComplexPoly& operator+=(const ComplexPoly& other);
    ComplexPoly& operator-=(const ComplexPoly& other);
    ComplexPoly& operator*=(cplx s);

    friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
    friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
    friend ComplexPoly operator*(ComplexPoly a, cplx s) { return a *= s; }
    friend ComplexPoly operator*(cplx s, ComplexPoly a) { return a *= s; }
    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);

private:
    void trim();
    std::vector<cplx> coeffs_;
};

/// Horner evaluation.
cplx eval(const ComplexPoly& p, cplx z);

/// All complex roots with multiplicity. Companion-matrix eigenvalues polished
/// by Newton steps; every returned root satisfies
///   |p(r)| <= tol * max|coeff| * (1 + |r|)^deg.
/// Throws NonConvergence otherwise and std::invalid_argument for deg < 1.
std::vector<cplx> roots(const ComplexPoly& p, double tol = 1e-10);

struct SylvesterSplit {
    ComplexPoly s_dot;
    ComplexPoly delta_dot;
    double residual = 0.0;  ///< ||s_dot*delta + s*delta_dot/2 - f_dot|| / ||f_dot||
};

/// Solve  s_dot * delta + (1/2) s * delta_dot = f_dot  with deg s_dot <= L-1
/// and deg delta_dot <= M-1 where L = deg s, M = deg delta. The system
/// matrix is the Sylvester matrix of (delta, s/2). Throws SingularSylvester
/// when the column-normalised determinant falls below `coprime_tol`.
SylvesterSplit sylvester_split(const ComplexPoly& s, const ComplexPoly& delta,
                               const ComplexPoly& f_dot, double coprime_tol = 1e-10);

}  // namespace boutroux
