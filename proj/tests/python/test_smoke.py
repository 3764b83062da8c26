import math

import pytest

import boutroux as bx


def test_two_point_converges():
    spec = bx.ProblemSpec([-1, 1])
    rep = bx.solve(spec)
    assert rep.status == "Converged"
    assert rep.F < 1e-10
    assert abs(rep.periods.T[0] - 1) < 1e-8


def test_cube_roots_star():
    pts = [complex(math.cos(2 * math.pi * k / 3), math.sin(2 * math.pi * k / 3)) for k in range(3)]
    rep = bx.solve(bx.ProblemSpec(pts), tol=1e-14)
    assert rep.status == "Converged"
    assert abs(rep.state.delta_roots[0]) < 1e-6
    g = bx.build_graph(rep.state)
    assert g.connected
    assert len(g.edges) == 3
    assert all(e.bounded for e in g.edges)


def test_two_poles_cubic_bookkeeping():
    spec = bx.ProblemSpec(bx.parse_points("0,-1;0,1"), bx.parse_phi("[0,-1];[0,0];[1,0]"), t0=0.0, L=1)
    assert (spec.R, spec.M, spec.genus) == (3, 4, 2)
    st = bx.random_state(spec, 3)
    pd = bx.compute_periods(st)
    assert abs(pd.T[-1] - 1) < 1e-10
    assert len(pd.P) == 4


def test_config_error():
    with pytest.raises(bx.ConfigError):
        bx.ProblemSpec([1j, -1j, 1], L=1)


def test_helpers():
    r = sorted(bx.roots([1, 0, 1]), key=lambda z: z.imag)
    assert abs(r[0] + 1j) < 1e-12 and abs(r[1] - 1j) < 1e-12
    assert len(bx.select_cuts([1, 1j, -1, -1j])) == 2


def test_svg():
    st = bx.State.from_roots(bx.ProblemSpec([-1, 1]), [], [])
    svg = bx.render_svg(bx.build_graph(st), st)
    assert svg.startswith("<?xml")
    assert svg.count('fill="red"') == 2
