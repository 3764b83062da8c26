#include "boutroux/state.hpp"

#include <cmath>
#include <string>

#include "boutroux/errors.hpp"

namespace boutroux {

void ProblemSpec::validate() const {
    if (e_points.empty()) throw ConfigError("points: at least one simple pole is required");
    for (std::size_t i = 0; i < e_points.size(); ++i) {
        if (!std::isfinite(e_points[i].real()) || !std::isfinite(e_points[i].imag()))
            throw ConfigError("points: non-finite coordinate at index " + std::to_string(i));
        for (std::size_t j = i + 1; j < e_points.size(); ++j)
            if (e_points[i] == e_points[j])
                throw ConfigError("points: duplicate E-point at indices " + std::to_string(i) + " and " +
                                  std::to_string(j));
    }
    if (!std::isfinite(t0)) throw ConfigError("t0: must be finite");
    if (L < 0) throw ConfigError("L: must be >= 0");
    if (R() >= 1 && phi.back() == cplx{}) throw ConfigError("phi: leading coefficient t_R must be nonzero");
    if (R() == 0 && t0 == 0.0) throw ConfigError("t0: must be nonzero when phi is empty");
    if (M() < 0) {
        const int max_l = (2 * R() - 2 + N()) / 2;
        throw ConfigError("L: deg Delta = 2R-2+N-2L = " + std::to_string(M()) +
                          " < 0; the largest admissible L is " + std::to_string(std::max(max_l, 0)));
    }
    if (M() + N() < 2) throw ConfigError("genus would be negative for this (N, R, L)");
}

std::vector<cplx> DifferentialState::branch_points() const {
    std::vector<cplx> out = spec.e_points;
    out.insert(out.end(), delta_roots.begin(), delta_roots.end());
    return out;
}

std::vector<TaggedPoint> DifferentialState::tagged_branch_points() const {
    std::vector<TaggedPoint> out;
    int id = 0;
    for (const cplx& e : spec.e_points) out.push_back({e, id++});
    for (const cplx& d : delta_roots) out.push_back({d, id++});
    return out;
}

cplx DifferentialState::Q(cplx z) const {
    const cplx s = S(z);
    return s * s * delta(z) / E(z);
}

cplx DifferentialState::sqrt_q(cplx z) const { return S(z) * radical(z) / E(z); }

DifferentialState DifferentialState::from_roots(const ProblemSpec& spec, std::span<const cplx> s_roots,
                                                std::span<const cplx> delta_roots) {
    spec.validate();
    if (2 * static_cast<int>(s_roots.size()) + static_cast<int>(delta_roots.size()) !=
        2 * spec.R() - 2 + spec.N())
        throw ConfigError("root counts do not satisfy 2L + M - N = 2(R - 1)");
    DifferentialState st;
    st.spec = spec;
    st.spec.L = static_cast<int>(s_roots.size());
    st.S = ComplexPoly::from_roots(s_roots, spec.lead());
    st.delta = ComplexPoly::from_roots(delta_roots);
    st.E = ComplexPoly::from_roots(spec.e_points);
    st.s_roots.assign(s_roots.begin(), s_roots.end());
    st.delta_roots.assign(delta_roots.begin(), delta_roots.end());
    st.rebuild_geometry(false);
    return st;
}

int DifferentialState::rebuild_geometry(bool keep_basis) {
    const std::vector<cplx> bps = branch_points();
    radical = CutRadical(select_cuts(bps));
    const std::vector<TaggedPoint> tagged = tagged_branch_points();
    if (keep_basis && static_cast<int>(basis.cycles.size()) == 2 * genus()) {
        const int n = refresh_basis(basis, tagged, cuts());
        if (n > 0) ++basis.epoch;
        return n;
    }
    std::vector<int> ids;
    for (const TaggedPoint& tp : tagged) ids.push_back(tp.id);
    const int epoch = basis.epoch;
    basis = build_homology_basis(cuts(), ids);
    basis.epoch = epoch + 1;
    return static_cast<int>(basis.cycles.size());
}

}  // namespace boutroux
