import math
import random

import numpy as np
import pytest

from cfpolydisc.completion import (
    CompletionError,
    ParrottProblem,
    central_solution,
    dmp_factor,
    dmp_pointwise,
    parrott_complete,
    parrott_factors,
)
from cfpolydisc.opnorm import op_norm
from cfpolydisc.polyalg import TorusGrid, TrigPoly, grid_values

from oracles import assemble_block, min_completion_norm_scalar

GRID = TorusGrid()


def random_feasible_problem(rng, p, q, r, s, level=0.9):
    """Blocks cut out of a random matrix scaled to norm `level`."""
    g = rng.standard_normal((p + r, q + s)) + 1j * rng.standard_normal((p + r, q + s))
    g *= level / op_norm(g)
    return ParrottProblem(a=g[:p, :q], c=g[p:, :q], d=g[p:, q:])


# ---------------------------------------------------------------------------
# anchors


def test_scalar_rotation_anchor():
    v = 1 / math.sqrt(2)
    prob = ParrottProblem(a=[[v]], c=[[v]], d=[[v]])
    sol = central_solution(prob)
    assert sol.x[0, 0] == pytest.approx(-v, abs=1e-12)
    assert sol.norm == pytest.approx(1.0, abs=1e-12)
    assert sol.unique
    m = prob.assemble(sol.x)
    assert np.allclose(m @ m.conj().T, np.eye(2), atol=1e-12)


def test_zero_problem_central_is_zero_and_not_unique():
    prob = ParrottProblem(a=np.zeros((2, 2)), c=np.zeros((2, 2)),
                          d=np.zeros((2, 2)))
    sol = central_solution(prob)
    assert np.allclose(sol.x, 0)
    assert not sol.unique
    v = np.array([[0.6, 0.0], [0.0, -0.3j]])
    sol2 = parrott_complete(prob, v=v)
    assert np.allclose(sol2.x, v)


def test_unique_when_row_is_isometric():
    # C = 0, D = 1 forces Y = D with Y*Y = I, so the right defect vanishes
    # and X = 0 is the only completion.
    prob = ParrottProblem(a=[[0.5]], c=[[0.0]], d=[[1.0]])
    sol = central_solution(prob)
    assert sol.unique
    assert sol.x[0, 0] == pytest.approx(0.0, abs=1e-12)


# ---------------------------------------------------------------------------
# the minimum completion norm equals the max of the fixed row and column


def test_minimum_norm_matches_brute_force_scalar_blocks():
    rng = random.Random(41)
    for _ in range(8):
        a = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        c = complex(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
        d = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        level = max(
            op_norm(np.array([[a], [c]])), op_norm(np.array([[c, d]]))
        )
        scaled = ParrottProblem(a=[[a / level]], c=[[c / level]],
                                d=[[d / level]])
        sol = central_solution(scaled)
        x = level * sol.x[0, 0]
        achieved = op_norm(assemble_block([[a]], [[x]], [[c]], [[d]]))
        _, best = min_completion_norm_scalar([[a]], [[c]], [[d]])
        assert achieved == pytest.approx(level, abs=1e-9)
        assert best == pytest.approx(level, abs=1e-3)


# ---------------------------------------------------------------------------
# random feasible problems


def test_central_completion_is_contractive_random():
    rng = np.random.default_rng(42)
    for _ in range(20):
        p, q, r, s = (int(rng.integers(1, 4)) for _ in range(4))
        prob = random_feasible_problem(rng, p, q, r, s)
        sol = central_solution(prob)
        assert sol.norm <= 1 + 1e-9
        assert sol.x.shape == prob.free_shape


def test_every_contraction_parameter_is_feasible():
    rng = np.random.default_rng(43)
    prob = random_feasible_problem(rng, 2, 2, 2, 2, level=0.8)
    for _ in range(10):
        v = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        v /= max(1.0, op_norm(v))
        sol = parrott_complete(prob, v=v)
        assert sol.norm <= 1 + 1e-9
    with pytest.raises(CompletionError):
        parrott_complete(prob, v=np.full((2, 2), 5.0))


def test_factor_residuals_definitions():
    rng = np.random.default_rng(44)
    prob = random_feasible_problem(rng, 2, 3, 3, 2, level=0.95)
    f = parrott_factors(prob)
    left = np.eye(3) - prob.c @ prob.c.conj().T
    right = np.eye(3) - prob.c.conj().T @ prob.c
    from cfpolydisc.opnorm import psd_sqrt

    assert np.allclose(psd_sqrt(left) @ f.y, prob.d, atol=1e-10)
    assert np.allclose(f.z @ psd_sqrt(right), prob.a, atol=1e-10)
    assert op_norm(f.y) <= 1 + 1e-9 and op_norm(f.z) <= 1 + 1e-9


def test_infeasible_blocks_raise():
    with pytest.raises(CompletionError):
        parrott_factors(ParrottProblem(a=[[0.0]], c=[[1.2]], d=[[0.0]]))
    with pytest.raises(CompletionError):
        # row [C, D] has norm sqrt(2) > 1
        parrott_factors(ParrottProblem(a=[[0.0]], c=[[1.0]], d=[[1.0]]))
    with pytest.raises(CompletionError):
        # column [[A], [C]] too long
        parrott_factors(ParrottProblem(a=[[1.0]], c=[[1.0]], d=[[0.0]]))


def test_problem_shape_validation():
    with pytest.raises(ValueError):
        ParrottProblem(a=np.zeros((1, 2)), c=np.zeros((2, 3)), d=np.zeros((2, 1)))
    with pytest.raises(ValueError):
        ParrottProblem(a=np.zeros((1, 2)), c=np.zeros((2, 2)), d=np.zeros((3, 1)))


# ---------------------------------------------------------------------------
# scalar two-by-two margin


def test_dmp_factor_is_exact_contraction_test():
    rng = random.Random(45)
    for _ in range(50):
        t = complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) * 0.8
        x = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        margin = dmp_factor(t, x)
        nrm = op_norm(np.array([[t, x], [0, t]]))
        if margin > 1e-9:
            assert nrm <= 1
        if margin < -1e-9:
            assert nrm > 1


def test_dmp_factor_boundary_anchor():
    t = 1 / math.sqrt(2)
    x = 0.5
    assert dmp_factor(t, x) == pytest.approx(0.0, abs=1e-15)
    assert op_norm(np.array([[t, x], [0, t]])) == pytest.approx(1.0, abs=1e-12)


def test_dmp_pointwise_constant_symbols():
    p1 = TrigPoly.constant(1, 0.6)
    p2 = TrigPoly.constant(1, 0.2)
    m = dmp_pointwise(p1, p2, GRID)
    assert m == pytest.approx(1 - 0.36 - 0.2, abs=1e-12)
    assert m.converged


def test_dmp_pointwise_matches_dense_scan():
    p1 = TrigPoly(1, {(0,): 0.2, (1,): 0.2})
    p2 = TrigPoly(1, {(0,): 0.2, (1,): 0.2, (2,): 0.2})
    m = dmp_pointwise(p1, p2, GRID)
    vals1 = np.abs(grid_values(p1, 4096))
    vals2 = np.abs(grid_values(p2, 4096))
    dense = float(np.min(1 - vals1**2 - vals2))
    assert m == pytest.approx(dense, abs=1e-9)


def test_dmp_pointwise_requires_matching_variables():
    with pytest.raises(ValueError):
        dmp_pointwise(TrigPoly.constant(1, 0.1), TrigPoly.constant(2, 0.1), GRID)
