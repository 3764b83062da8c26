#include "boutroux/descent.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "boutroux/errors.hpp"

namespace boutroux {

std::string to_string(DescentStatus s) {
    switch (s) {
        case DescentStatus::Converged: return "Converged";
        case DescentStatus::Stalled: return "Stalled";
        case DescentStatus::MergedAndRestarted: return "MergedAndRestarted";
        case DescentStatus::Failed: return "Failed";
    }
    return "Failed";
}

double functional(const ProblemSpec& spec, const PeriodData& periods) {
    double f = 0.0;
    for (int l = 0; l <= spec.R(); ++l) f += std::norm(periods.T[static_cast<std::size_t>(l)] - spec.t(l));
    for (const cplx& p : periods.P) f += p.real() * p.real();
    return 0.5 * f;
}

double functional(const DifferentialState& state, const QuadratureOptions& opts) {
    return functional(state.spec, compute_periods(state, opts));
}

namespace {

// Portable uniform in [0, 1) from the 53 high bits of the engine output.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

cplx random_in_disk(std::mt19937_64& rng, cplx centre, double radius) {
    const double r = radius * std::sqrt(uniform01(rng));
    const double a = 2.0 * std::numbers::pi * uniform01(rng);
    return centre + std::polar(r, a);
}

// Reorder `fresh` so fresh[k] is the root closest to old[k] (greedy over
// globally sorted pair distances).
std::vector<cplx> track_roots(const std::vector<cplx>& old, std::vector<cplx> fresh) {
    const std::size_t n = old.size();
    if (fresh.size() != n || n == 0) return fresh;
    struct Pair {
        double d;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pairs.push_back({std::abs(old[i] - fresh[j]), i, j});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
    std::vector<cplx> out(n);
    std::vector<bool> used_old(n, false), used_new(n, false);
    for (const Pair& p : pairs) {
        if (used_old[p.i] || used_new[p.j]) continue;
        out[p.i] = fresh[p.j];
        used_old[p.i] = used_new[p.j] = true;
    }
    return out;
}

double min_delta_e_distance(const DifferentialState& st) {
    double d = std::numeric_limits<double>::infinity();
    for (const cplx& r : st.delta_roots)
        for (const cplx& e : st.spec.e_points) d = std::min(d, std::abs(r - e));
    return d;
}

}  // namespace

DifferentialState random_state(const ProblemSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::mt19937_64 rng(seed);
    cplx centre = 0.0;
    for (const cplx& e : spec.e_points) centre += e;
    centre /= static_cast<double>(spec.N());
    const double diam = diameter(spec.e_points);
    const double radius = 1.5 * (diam > 0.0 ? diam : 1.0);
    const double min_sep = 1e-3 * (diam > 0.0 ? diam : 1.0);

    auto draw = [&](int count, std::vector<cplx>& taken) {
        std::vector<cplx> out;
        while (static_cast<int>(out.size()) < count) {
            const cplx z = random_in_disk(rng, centre, radius);
            bool ok = true;
            for (const cplx& t : taken)
                if (std::abs(z - t) < min_sep) ok = false;
            if (!ok) continue;
            out.push_back(z);
            taken.push_back(z);
        }
        return out;
    };
    std::vector<cplx> taken = spec.e_points;
    const std::vector<cplx> delta_roots = draw(spec.M(), taken);
    const std::vector<cplx> s_roots = draw(spec.L, taken);
    return DifferentialState::from_roots(spec, s_roots, delta_roots);
}

Deformation solve_deformation(const DifferentialState& state, const PeriodSnapshot& snap, double cond_cap) {
    const int R = state.spec.R();
    const int g = state.genus();
    const int n = state.unknowns();
    Deformation out;
    if (n == 0) return out;

    const Eigen::MatrixXcd& A = snap.matrix.A;
    const Eigen::MatrixXcd& B = snap.matrix.B;
    Eigen::MatrixXd K(2 * n, 2 * n);
    Eigen::VectorXd rhs(2 * n);
    K.topRows(R) << A.imag(), A.real();
    K.middleRows(R, R) << A.real(), -A.imag();
    K.bottomRows(2 * g) << B.real(), -B.imag();
    for (int l = 0; l < R; ++l) {
        const cplx r = state.spec.t(l) - snap.data.T[static_cast<std::size_t>(l)];
        rhs(l) = r.imag();
        rhs(R + l) = r.real();
    }
    for (int j = 0; j < 2 * g; ++j) rhs(2 * R + j) = -snap.data.P[static_cast<std::size_t>(j)].real();
    // The residual obeys r' = -r/2 so that dF/dt = -F.
    rhs *= 0.5;

    Eigen::VectorXd colscale(2 * n);
    for (int c = 0; c < 2 * n; ++c) {
        const double nrm = K.col(c).norm();
        colscale(c) = nrm > 0.0 ? 1.0 / nrm : 1.0;
    }
    const Eigen::MatrixXd Ks = K * colscale.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Ks, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (!(out.condition <= cond_cap))
        throw IllConditionedSystem("deformation system condition estimate " + std::to_string(out.condition));
    const Eigen::VectorXd x = colscale.asDiagonal() * svd.solve(rhs);

    std::vector<cplx> f(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) f[static_cast<std::size_t>(k)] = cplx(x(k), x(n + k));
    out.f_dot = ComplexPoly(std::move(f));
    SylvesterSplit split = sylvester_split(state.S, state.delta, out.f_dot);
    out.s_dot = std::move(split.s_dot);
    out.delta_dot = std::move(split.delta_dot);
    out.sylvester_residual = split.residual;
    return out;
}

Deformation solve_deformation(const DifferentialState& state, const QuadratureOptions& opts) {
    return solve_deformation(state, evaluate_periods(state, opts));
}

DifferentialState step(const DifferentialState& state, const Deformation& velocity, double dt) {
    if (dt < 0.0) throw std::invalid_argument("step: dt must be >= 0");
    DifferentialState next = state;
    if (dt == 0.0) return next;
    next.S += velocity.s_dot * dt;
    next.delta += velocity.delta_dot * dt;
    if (next.S.degree() != state.S.degree() || next.S.leading() != state.S.leading() ||
        next.delta.degree() != state.delta.degree() || next.delta.leading() != cplx(1.0))
        throw std::logic_error("step: pinned leading coefficients changed");
    if (next.M() >= 1) next.delta_roots = track_roots(state.delta_roots, roots(next.delta));
    if (next.L() >= 1) next.s_roots = track_roots(state.s_roots, roots(next.S));
    next.rebuild_geometry(true);
    return next;
}

double adapt_dt(std::span<const double> F_history, double dt, const DescentOptions& opts) {
    if (F_history.empty()) throw std::invalid_argument("adapt_dt: empty history");
    double next = dt;
    if (F_history.size() >= 2 && !(F_history.back() < F_history[F_history.size() - 2]))
        next = dt / 2.0;
    else
        next = std::min(dt * opts.grow, opts.dt_max);
    if (next < opts.dt_floor) throw StepFloorReached("dt fell below " + std::to_string(opts.dt_floor));
    return next;
}

bool merge_check(DifferentialState& state, double merge_eps) {
    const std::size_t m = state.delta_roots.size();
    if (m < 2) return false;
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = std::abs(state.delta_roots[i] - state.delta_roots[j]);
            if (d < best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    if (!(best < merge_eps * state.scale())) return false;

    const cplx mid = 0.5 * (state.delta_roots[bi] + state.delta_roots[bj]);
    std::vector<cplx> remaining;
    for (std::size_t k = 0; k < m; ++k)
        if (k != bi && k != bj) remaining.push_back(state.delta_roots[k]);
    state.s_roots.push_back(mid);
    state.delta_roots = std::move(remaining);
    state.S = ComplexPoly::from_roots(state.s_roots, state.spec.lead());
    state.delta = ComplexPoly::from_roots(state.delta_roots);
    state.spec.L = state.L();
    if (2 * state.L() + state.M() - state.N() != 2 * (state.spec.R() - 1))
        throw std::logic_error("merge_check: degree relation broken");
    state.rebuild_geometry(false);
    return true;
}

double directional_derivative(const DifferentialState& state, const Deformation& velocity, double eps,
                              const QuadratureOptions& opts) {
    const double f0 = functional(state, opts);
    const double f1 = functional(step(state, velocity, eps), opts);
    const double f2 = functional(step(state, velocity, 0.5 * eps), opts);
    const double d1 = (f1 - f0) / eps;
    const double d2 = (f2 - f0) / (0.5 * eps);
    return 2.0 * d2 - d1;
}

DescentReport run(const DifferentialState& init, const DescentOptions& opts) {
    DescentReport report;
    DifferentialState state = init;
    PeriodSnapshot snap;
    double F = 0.0;
    auto refresh = [&] {
        snap = evaluate_periods(state, opts.quadrature);
        F = functional(state.spec, snap.data);
    };

    try {
        refresh();
    } catch (const Error& e) {
        report.final_state = state;
        report.status = DescentStatus::Failed;
        report.reason = std::string("initial evaluation: ") + e.what();
        return report;
    }
    report.F_history.push_back(F);
    double dt = opts.dt0;
    bool rebuilt_for_conditioning = false;

    auto finish = [&](DescentStatus status, std::string reason) {
        report.status = status;
        report.reason = std::move(reason);
        report.final_state = state;
        report.final_periods = snap.data;
        return report;
    };

    while (true) {
        if (F < opts.f_exit) return finish(DescentStatus::Converged, "");
        const auto stalled = report.merges > 0 ? DescentStatus::MergedAndRestarted : DescentStatus::Stalled;
        if (report.iterations >= opts.max_iter) return finish(stalled, "max_iter reached");

        Deformation vel;
        try {
            vel = solve_deformation(state, snap, opts.cond_cap);
            rebuilt_for_conditioning = false;
        } catch (const IllConditionedSystem& e) {
            if (rebuilt_for_conditioning)
                return finish(DescentStatus::Failed, "iteration " + std::to_string(report.iterations) + ": " + e.what());
            rebuilt_for_conditioning = true;
            try {
                state.rebuild_geometry(false);
                refresh();
            } catch (const Error& e2) {
                return finish(DescentStatus::Failed, std::string("basis rebuild: ") + e2.what());
            }
            ++report.basis_rebuilds;
            continue;
        } catch (const SingularSylvester& e) {
            bool merged = false;
            try {
                merged = merge_check(state, opts.merge_eps);
                if (merged) refresh();
            } catch (const Error& e2) {
                return finish(DescentStatus::Failed, std::string("merge: ") + e2.what());
            }
            if (merged) {
                ++report.merges;
                report.F_history.push_back(F);
                continue;
            }
            return finish(DescentStatus::Failed, "iteration " + std::to_string(report.iterations) + ": " + e.what());
        }
        report.max_sylvester_residual = std::max(report.max_sylvester_residual, vel.sylvester_residual);

        while (true) {
            DifferentialState trial;
            PeriodSnapshot trial_snap;
            double F_trial = std::numeric_limits<double>::infinity();
            bool valid = false;
            try {
                trial = step(state, vel, dt);
                if (min_delta_e_distance(trial) >= opts.collision_eps * trial.scale()) {
                    trial_snap = evaluate_periods(trial, opts.quadrature);
                    F_trial = functional(trial.spec, trial_snap.data);
                    valid = std::isfinite(F_trial);
                }
            } catch (const Error&) {
                valid = false;
            }
            const bool new_basis = valid && trial.basis.epoch != state.basis.epoch;
            if (valid && (F_trial < F || new_basis)) {
                if (F_trial < F) dt = adapt_dt(std::array{F, F_trial}, dt, opts);
                if (new_basis) ++report.basis_rebuilds;
                state = std::move(trial);
                snap = std::move(trial_snap);
                F = F_trial;
                break;
            }
            ++report.rejected_steps;
            try {
                dt = adapt_dt(std::array{F, F_trial}, dt, opts);
            } catch (const StepFloorReached& e) {
                return finish(stalled, e.what());
            }
        }
        ++report.iterations;
        report.F_history.push_back(F);
        if (opts.observer) opts.observer(report.iterations, state, F);

        bool merged = false;
        try {
            merged = merge_check(state, opts.merge_eps);
        } catch (const Error& e) {
            return finish(DescentStatus::Failed, std::string("merge: ") + e.what());
        }
        if (merged) {
            ++report.merges;
            try {
                refresh();
            } catch (const Error& e) {
                return finish(DescentStatus::Failed, std::string("after merge: ") + e.what());
            }
            report.F_history.push_back(F);
            dt = opts.dt0;
        }
    }
}

DescentReport run(const ProblemSpec& spec, std::uint64_t seed, const DescentOptions& opts) {
    return run(random_state(spec, seed), opts);
}

}  // namespace boutroux
