import pytest

from openchainq.fock import agree_on_window, restrict_to_block
from openchainq.operators import L_REPS, build_K, build_L, build_R
from openchainq.solvers import (SolverError, solve_fusion_objects, solve_K_from_intertwining,
                                solve_K_from_RE, solve_K_fusion, solve_L_fusion, solve_R_from_linear)

N = 9


@pytest.mark.parametrize("name", L_REPS)
def test_reflection_solution_matches_closed_form(point, name):
    y, z = point.s("y"), point.s("z")
    sol = solve_K_from_RE(name, point, y, z, N)
    assert sol.dimension == 1
    assert agree_on_window(sol.unique(), build_K(name, point, y, N))


def test_intertwining_solution(point):
    q, u, xi, z = point.q, point.u, point.xi, point.s("z")
    sol = solve_K_from_intertwining(point, z, N)
    k = sol.unique()
    assert k.entry((0,), (0,)) == 1
    c = q * q / (u * u * xi)
    assert k.entry((1,), (1,)) == (1 - c * z * z) / (z * z - c)
    assert agree_on_window(k, build_K("upsilon", point, z, N))


@pytest.mark.parametrize("pair", ["upsilon_phi", "rho_rhobar"])
def test_r_solution_matches_closed_form(point, pair):
    z = point.s("z")
    extra = (point.s("w"),) if pair == "rho_rhobar" else ()
    sol = solve_R_from_linear(pair, point, z, N, 6, extra)
    assert sol.dimension == 1
    x, r = sol.unique(), build_R(pair, point, z, N)
    assert restrict_to_block(x, 0) == [[1]]
    for m in range(7):
        assert restrict_to_block(x, m) == restrict_to_block(r, m)


def test_r_needs_room(point):
    with pytest.raises(ValueError):
        solve_R_from_linear("upsilon_phi", point, point.s("z"), 6, 6)


def test_rho_rhobar_needs_auxiliary(point):
    with pytest.raises(ValueError):
        solve_R_from_linear("rho_rhobar", point, point.s("z"), N, 4)


def test_unique_rejects_other_dimensions(point):
    sol = solve_K_from_RE("rho", point, point.s("y"), point.s("z"), N)
    sol.dimension = 2
    with pytest.raises(SolverError):
        sol.unique()


def test_fusion_l_at_unit_r_is_rho(point):
    pr = point.with_values(r=1)
    z = point.s("z")
    sol = solve_L_fusion(pr, z, N)
    assert sol.dimension == 1
    assert agree_on_window(sol.unique(), build_L("rho", pr, z, N))


def test_fusion_objects(point):
    fo = solve_fusion_objects(point, point.s("z"), point.s("w"), N)
    assert fo.dimensions == {"L": 1, "K": 1, "K_up": 1, "K_down": 1}
    assert fo.K.column((0,)) == {(0,): 1}
    assert fo.L.column((0, 0)) == {(0, 0): 1}


def test_fusion_k_independent_of_auxiliary(point):
    y = point.s("y")
    a = solve_K_fusion(point, y, point.s("w"), N).unique()
    b = solve_K_fusion(point, y, point.s("x"), N).unique()
    assert agree_on_window(a, b)


def test_dimensions_stable(points):
    dims = set()
    for pt in points:
        dims.add(tuple(solve_K_from_RE(n, pt, pt.s("y"), pt.s("z"), N).dimension for n in L_REPS))
    assert dims == {(1, 1, 1, 1)}
