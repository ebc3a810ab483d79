import math
import random

import numpy as np
import pytest

from cfpolydisc.polyalg import NPoly, TorusGrid, TrigPoly
from cfpolydisc.opnorm import (
    NotPSDError,
    full_function_norm,
    laurent_section_norm,
    op_norm,
    psd_sqrt,
    toeplitz_eval,
    toeplitz_norm,
)
from cfpolydisc.slicing import reformulate

from oracles import GOLDEN, opnorm_power_iteration, svd_2x2_triangular, toeplitz_upper

GRID = TorusGrid()


def scalar(v):
    return TrigPoly.constant(0, v)


# ---------------------------------------------------------------------------
# op_norm / psd_sqrt


def test_op_norm_basic():
    assert op_norm([[0, 1], [0, 0]]) == pytest.approx(1.0)
    assert op_norm(np.zeros((3, 3))) == 0.0
    assert op_norm([[3]]) == pytest.approx(3.0)


def test_op_norm_matches_power_iteration():
    rng = np.random.default_rng(11)
    for _ in range(10):
        m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        assert op_norm(m) == pytest.approx(opnorm_power_iteration(m), rel=1e-8)


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(12)
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = b @ b.conj().T
    r = psd_sqrt(a)
    assert np.allclose(r @ r, a, atol=1e-10 * op_norm(a))
    assert np.allclose(r, r.conj().T)


def test_psd_sqrt_diagonal_anchor():
    r = psd_sqrt(np.diag([2.0, 0.0]))
    assert np.allclose(r, np.diag([math.sqrt(2.0), 0.0]))


def test_psd_sqrt_clamps_roundoff_but_rejects_negatives():
    eps = 1e-14
    r = psd_sqrt(np.diag([1.0, -eps]))
    assert r[1, 1] == 0.0
    with pytest.raises(NotPSDError):
        psd_sqrt(np.diag([1.0, -1e-3]))
    with pytest.raises(NotPSDError):
        psd_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))  # not Hermitian


# ---------------------------------------------------------------------------
# triangular symbol matrices


def test_toeplitz_eval_layout():
    sym = (TrigPoly(1, {(0,): 2.0}), TrigPoly(1, {(1,): 3.0}))
    m = toeplitz_eval(sym, (1j,))
    want = np.array(
        [[0, 2.0, 3j], [0, 0, 2.0], [0, 0, 0]], dtype=complex
    )
    assert np.allclose(m, want)


def test_toeplitz_norm_scalar_anchors():
    # ||T(1, 1)|| is the golden ratio.
    v = toeplitz_norm((scalar(1.0), scalar(1.0)), GRID)
    assert v == pytest.approx(GOLDEN, abs=1e-12)
    assert v.converged and v.points == 1
    # ||T(1, s)|| = (s + sqrt(s*s + 4)) / 2.
    for s in (0.25, 1.0, 2.0, 3.5):
        got = toeplitz_norm((scalar(1.0), scalar(s)), GRID)
        assert got == pytest.approx((s + math.sqrt(s * s + 4)) / 2, abs=1e-12)
    # Halving the entries halves the norm of T(1, 1).
    assert toeplitz_norm((scalar(0.5), scalar(0.5)), GRID) == pytest.approx(
        GOLDEN / 2, abs=1e-12
    )


def test_toeplitz_norm_matches_dense_svd_for_scalars():
    rng = random.Random(21)
    for _ in range(10):
        seq = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(4)]
        got = toeplitz_norm(tuple(scalar(c) for c in seq), GRID)
        assert got == pytest.approx(op_norm(toeplitz_upper(seq)), abs=1e-12)


def test_toeplitz_norm_one_torus_variable_closed_form():
    # Two symbols in one variable: the nonzero singular values come from the
    # 2x2 triangular block [[p1, p2], [0, p1]], so the supremum has the
    # closed form max over the circle of svd_2x2_triangular(p1, p2).
    p1 = TrigPoly(1, {(0,): 0.2, (1,): 0.2})
    p2 = TrigPoly(1, {(0,): 0.2, (1,): 0.2, (2,): 0.2})
    got = toeplitz_norm((p1, p2), GRID)
    best = 0.0
    for k in range(4096):
        lam = complex(math.cos(2 * math.pi * k / 4096), math.sin(2 * math.pi * k / 4096))
        a = 0.2 + 0.2 * lam
        b = 0.2 + 0.2 * lam + 0.2 * lam * lam
        best = max(best, svd_2x2_triangular(a, b))
    assert got == pytest.approx(best, abs=1e-9)
    assert got == pytest.approx(0.8, abs=1e-12)  # attained at lam = 1
    assert got.converged


def test_toeplitz_norm_rejects_mixed_variable_counts():
    with pytest.raises(ValueError):
        toeplitz_norm((scalar(1.0), TrigPoly(1, {(0,): 1.0})), GRID)


def test_toeplitz_norm_empty_family_is_zero():
    assert toeplitz_norm((), GRID) == 0.0


# ---------------------------------------------------------------------------
# the gap between the triangular matrix and the function norm


def test_triangular_norm_can_sit_below_function_norm():
    # One ambient monomial per level: p = z1 + z1**2 in two variables has
    # constant symbols (1, 1), so the triangular matrix norm is the golden
    # ratio while the function supremum is 2.  The gap is structural, not a
    # resolution artifact.
    f = NPoly(2, {(1, 0): 1.0, (2, 0): 1.0})
    fam = reformulate(f)
    tri = toeplitz_norm(fam.symbols, GRID)
    full = full_function_norm(f, GRID)
    assert tri == pytest.approx(GOLDEN, abs=1e-12)
    assert full == pytest.approx(2.0, abs=1e-9)
    assert full - tri > 0.38


def test_uniform_quadratic_gap_regression():
    f = NPoly(2, {a: 0.2 for a in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))})
    fam = reformulate(f)
    tri = toeplitz_norm(fam.symbols, GRID)
    full = full_function_norm(f, GRID)
    assert tri == pytest.approx(0.8, abs=1e-9)
    assert full == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# Laurent sections


def test_laurent_section_univariate_growth_to_function_norm():
    f = TrigPoly(1, {(1,): 1.0, (2,): 1.0})
    full = full_function_norm(f, GRID)
    prev = 0.0
    for w in (2, 4, 8, 16, 48):
        v = laurent_section_norm(f, w, GRID)
        assert v >= prev - 1e-12
        assert v <= full + 1e-9
        prev = v
    assert prev == pytest.approx(2.0, rel=5e-3)


def test_laurent_section_exact_for_single_slice():
    phi = TrigPoly(2, {(1, 1): 1.0})  # one slice at offset 2, symbol lam
    v = laurent_section_norm(phi, 4, GRID)
    assert v == pytest.approx(1.0, abs=1e-12)


def test_laurent_section_tracks_full_norm_bivariate():
    rng = random.Random(31)
    for _ in range(3):
        terms = {
            (i, j): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            for i in range(3)
            for j in range(3)
            if 0 < i + j <= 3
        }
        f = NPoly(2, terms)
        full = full_function_norm(f, GRID)
        v = laurent_section_norm(f, 8 * 3, GRID)
        assert v <= full + 1e-9
        assert abs(v - full) <= 0.01 * full


def test_laurent_section_validation():
    with pytest.raises(ValueError):
        laurent_section_norm(TrigPoly(0, {(): 1.0}), 4, GRID)
    with pytest.raises(ValueError):
        laurent_section_norm(TrigPoly(1, {(1,): 1.0}), -1, GRID)
