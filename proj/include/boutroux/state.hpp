#pragma once

#include <vector>

#include "boutroux/periods.hpp"
#include "boutroux/poly.hpp"
#include "boutroux/radical.hpp"

namespace boutroux {

/// Inputs of the problem: simple poles E, polar part Phi = sum t_l z^l / l
/// (phi holds t_1..t_R), the real residue t0 and the initial number of
/// stagnation points L.
struct ProblemSpec {
    std::vector<cplx> e_points;
    std::vector<cplx> phi;
    double t0 = 1.0;
    int L = 0;

    int N() const { return static_cast<int>(e_points.size()); }
    int R() const { return static_cast<int>(phi.size()); }
    /// deg Delta from 2L + M - N = 2(R - 1).
    int M() const { return 2 * R() - 2 + N() - 2 * L; }
    int genus() const { return (M() + N()) / 2 - 1; }
    /// t_l with t_0 the residue.
    cplx t(int l) const { return l == 0 ? cplx(t0) : phi[static_cast<std::size_t>(l - 1)]; }
    /// Leading coefficient of S: t_R, or t0 when there is no polar part.
    cplx lead() const { return R() >= 1 ? phi.back() : cplx(t0); }

    /// Throws ConfigError when the data is inadmissible.
    void validate() const;
};

/// Current iterate Q = S^2 Delta / E together with its cached geometry.
struct DifferentialState {
    ProblemSpec spec;
    ComplexPoly S;
    ComplexPoly delta;
    ComplexPoly E;
    std::vector<cplx> s_roots;
    std::vector<cplx> delta_roots;  ///< tracked order: identity N+k
    CutRadical radical;
    HomologyBasis basis;

    int L() const { return S.degree(); }
    int M() const { return delta.degree(); }
    int N() const { return E.degree(); }
    int genus() const { return (M() + N()) / 2 - 1; }
    int unknowns() const { return L() + M(); }  ///< = g + R
    const CutSystem& cuts() const { return radical.cuts(); }

    std::vector<cplx> branch_points() const;
    std::vector<TaggedPoint> tagged_branch_points() const;
    double scale() const { return cuts().scale; }

    cplx Q(cplx z) const;
    /// sqrt(Q) = S * sqrt(Delta E) / E on the cut plane.
    cplx sqrt_q(cplx z) const;

    /// State from explicit roots; cuts and a canonical basis are built.
    static DifferentialState from_roots(const ProblemSpec& spec, std::span<const cplx> s_roots,
                                        std::span<const cplx> delta_roots);
    /// Rebuild cuts from the current branch points; with `keep_basis` valid
    /// cycles are kept, otherwise the canonical basis is rebuilt. Returns
    /// the number of cycles that were (re)built.
    int rebuild_geometry(bool keep_basis);
};

}  // namespace boutroux
