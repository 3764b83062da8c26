"""Boutroux quadratic differentials Q = S^2 Delta / E and their critical graphs."""

from ._boutroux import (
    ConfigError,
    CriticalPoint,
    Edge,
    Error,
    Graph,
    IoError,
    MultiplicityAmbiguity,
    NonConvergence,
    PeriodData,
    ProblemSpec,
    Report,
    SingularSylvester,
    State,
    build_graph,
    compute_periods,
    critical_points,
    functional,
    parse_phi,
    parse_points,
    random_state,
    render_svg,
    roots,
    select_cuts,
    solve,
)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
