#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "boutroux/periods.hpp"
#include "boutroux/state.hpp"

namespace boutroux {

struct DescentOptions {
    double f_exit = 1e-10;
    int max_iter = 20000;
    double dt0 = 0.1;
    double dt_max = 0.5;
    double dt_floor = 1e-12;
    double grow = 1.2;
    double merge_eps = 1e-4;       ///< relative to the branch-point diameter
    double collision_eps = 1e-6;   ///< Delta-E root distance, relative
    double cond_cap = 1e12;
    QuadratureOptions quadrature{};
    /// Called after every accepted iterate (used by tests and logging).
    std::function<void(int iteration, const DifferentialState&, double F)> observer;
};

/// Polynomial velocity (S_dot, Delta_dot) with its intermediate F_dot.
struct Deformation {
    ComplexPoly s_dot;
    ComplexPoly delta_dot;
    ComplexPoly f_dot;
    double sylvester_residual = 0.0;
    double condition = 1.0;
};

enum class DescentStatus { Converged, Stalled, MergedAndRestarted, Failed };

std::string to_string(DescentStatus s);

struct DescentReport {
    int iterations = 0;
    int rejected_steps = 0;
    int merges = 0;
    int basis_rebuilds = 0;
    std::vector<double> F_history;
    DifferentialState final_state;
    PeriodData final_periods;
    DescentStatus status = DescentStatus::Failed;
    std::string reason;
    double max_sylvester_residual = 0.0;
};

/// F = 1/2 sum_l |T_l - t_l|^2 + 1/2 sum_j (Re P_j)^2.
double functional(const ProblemSpec& spec, const PeriodData& periods);
double functional(const DifferentialState& state, const QuadratureOptions& opts = {});

/// Random initial state: roots of Delta and S uniform in the disk of radius
/// 1.5 diam(E) around the centroid of E; S carries the pinned leading
/// coefficient.
DifferentialState random_state(const ProblemSpec& spec, std::uint64_t seed);

/// Velocity making dF/dt = -F: solve the real block system for F_dot from
/// the extended period matrix, then split F_dot = S_dot Delta + S Delta_dot / 2.
/// Throws IllConditionedSystem or SingularSylvester.
Deformation solve_deformation(const DifferentialState& state, const PeriodSnapshot& snap,
                              double cond_cap = 1e12);
Deformation solve_deformation(const DifferentialState& state, const QuadratureOptions& opts = {});

/// Euler step S += dt S_dot, Delta += dt Delta_dot. Roots are re-tracked,
/// cuts rebuilt and basis cycles kept where still valid.
DifferentialState step(const DifferentialState& state, const Deformation& velocity, double dt);

/// dt rule: growth by `grow` (capped) after a decrease, halving after an
/// increase. Throws StepFloorReached below dt_floor.
double adapt_dt(std::span<const double> F_history, double dt, const DescentOptions& opts = {});

/// Merge the closest pair of Delta roots closer than merge_eps * diameter
/// into a new simple root of S. Returns true if a merge happened.
bool merge_check(DifferentialState& state, double merge_eps = 1e-4);

/// Finite-difference directional derivative of F along the velocity, with
/// one Richardson extrapolation step; the basis cycles are held fixed.
double directional_derivative(const DifferentialState& state, const Deformation& velocity,
                              double eps = 1e-4, const QuadratureOptions& opts = {});

/// Gradient-flow descent until F < f_exit, max_iter or a stall.
DescentReport run(const DifferentialState& init, const DescentOptions& opts = {});
DescentReport run(const ProblemSpec& spec, std::uint64_t seed, const DescentOptions& opts = {});

}  // namespace boutroux
