import numpy as np
import pytest
from scipy.optimize import linprog as scipy_linprog

from tcpkit.lp import linprog, minimax_on_simplex


def test_small_known_optimum():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = linprog([-1, -1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert res.status == "optimal"
    assert np.allclose(res.x, [1.6, 1.2])
    assert res.fun == pytest.approx(-2.8)


def test_infeasible_and_unbounded():
    assert linprog([1, 1], A_eq=[[1, 1]], b_eq=[-1]).status == "infeasible"
    assert linprog([-1, 0], A_ub=[[0, 1]], b_ub=[1]).status == "unbounded"


def test_negative_rhs_and_equalities():
    res = linprog([1, 2, 0], A_ub=[[-1, -1, 0]], b_ub=[-2], A_eq=[[1, 0, 1]], b_eq=[3])
    assert res.status == "optimal"
    assert res.fun == pytest.approx(2.0)


@pytest.mark.parametrize("seed", range(60))
def test_matches_scipy(seed):
    rng = np.random.default_rng(seed)
    nv, nu, ne = rng.integers(1, 6), rng.integers(0, 5), rng.integers(0, 3)
    c = rng.integers(-4, 5, nv).astype(float)
    A_ub = rng.integers(-3, 4, (nu, nv)).astype(float)
    b_ub = rng.integers(-2, 6, nu).astype(float)
    A_eq = rng.integers(-3, 4, (ne, nv)).astype(float)
    b_eq = rng.integers(-2, 4, ne).astype(float)
    kw = dict(A_ub=A_ub if nu else None, b_ub=b_ub if nu else None,
              A_eq=A_eq if ne else None, b_eq=b_eq if ne else None)
    ours = linprog(c, **kw)
    ref = scipy_linprog(c, bounds=[(0, None)] * nv, method="highs", **kw)
    expected = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    assert ours.status == expected
    if expected == "optimal":
        assert ours.fun == pytest.approx(ref.fun, abs=1e-8)
        assert np.all(ours.x >= -1e-12)


def test_minimax_examples():
    v, x = minimax_on_simplex(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    assert v == pytest.approx(-0.5)
    assert np.allclose(x, [0.5, 0.5])
    v, _ = minimax_on_simplex(np.eye(3))
    assert v == pytest.approx(1 / 3)
