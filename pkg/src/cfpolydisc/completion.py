"""Norm-one completions of partially specified block matrices.

Given fixed blocks A (top left), C (bottom left), D (bottom right) and a free
top-right corner X, the block

    [[A, X],
     [C, D]]

admits a completion of norm at most one exactly when the fixed column
[[A], [C]] and the fixed row [C, D] are contractions.  In that case, writing

    Y = pinv((I - C C*)**(1/2)) D,   Z = A pinv((I - C* C)**(1/2)),

every solution is

    X = -Z C* Y + (I - Z Z*)**(1/2) V (I - Y* Y)**(1/2),   ||V|| <= 1,

and the deterministic central choice takes V = 0.  The completion is unique
exactly when one of the two defect factors vanishes.

The same module carries the scalar two-by-two test used by the pointwise
necessary condition: [[t, x], [0, t]] is a contraction iff |x| <= 1 - |t|**2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .opnorm import op_norm, psd_sqrt
from .polyalg import GridValue, TorusGrid, grid_sweep, grid_values

CONTRACTION_TOL = 1e-9
PINV_RCOND = 1e-10


class CompletionError(ValueError):
    """The fixed blocks violate a feasibility precondition, or a computed
    completion fails its verification."""


def _as_matrix(m) -> np.ndarray:
    a = np.atleast_2d(np.asarray(m, dtype=complex))
    if a.ndim != 2:
        raise ValueError("blocks must be two-dimensional")
    return a


@dataclass(frozen=True)
class ParrottProblem:
    """Fixed blocks of a one-corner completion problem."""

    a: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        a, c, d = _as_matrix(self.a), _as_matrix(self.c), _as_matrix(self.d)
        if a.shape[1] != c.shape[1]:
            raise ValueError("A and C must have the same number of columns")
        if c.shape[0] != d.shape[0]:
            raise ValueError("C and D must have the same number of rows")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    @property
    def free_shape(self) -> tuple:
        return (self.a.shape[0], self.d.shape[1])

    def column_norm(self) -> float:
        return op_norm(np.vstack([self.a, self.c]))

    def row_norm(self) -> float:
        return op_norm(np.hstack([self.c, self.d]))

    def feasible(self, tol: float = CONTRACTION_TOL) -> bool:
        return self.column_norm() <= 1 + tol and self.row_norm() <= 1 + tol

    def assemble(self, x) -> np.ndarray:
        x = _as_matrix(x)
        if x.shape != self.free_shape:
            raise ValueError(f"X must have shape {self.free_shape}")
        return np.block([[self.a, x], [self.c, self.d]])


@dataclass(frozen=True)
class ParrottFactors:
    """Intermediate contractions of a feasible problem.

    y and z satisfy D = (I - C C*)**(1/2) y and A = z (I - C* C)**(1/2);
    defect_left and defect_right are the square roots (I - z z*)**(1/2) and
    (I - y* y)**(1/2) that parametrize the solution set.
    """

    y: np.ndarray
    z: np.ndarray
    defect_left: np.ndarray
    defect_right: np.ndarray

    @property
    def unique(self) -> bool:
        """No freedom remains beyond tolerance.

        The corner varies by defect_left @ V @ defect_right, so the norm of
        the product bounds the total freedom; comparing the product (rather
        than either factor) keeps square-root roundoff of order sqrt(eps) in
        one factor from masking an exactly determined corner.
        """
        return (
            op_norm(self.defect_left) * op_norm(self.defect_right)
            <= CONTRACTION_TOL
        )


def parrott_factors(problem: ParrottProblem,
                    tol: float = CONTRACTION_TOL) -> ParrottFactors:
    """Factor the fixed blocks, verifying feasibility as it goes."""
    a, c, d = problem.a, problem.c, problem.d
    k = c.shape[0]
    q = c.shape[1]
    if op_norm(c) > 1 + tol:
        raise CompletionError("the pivot block C is not a contraction")
    left = psd_sqrt(np.eye(k) - c @ c.conj().T)
    right = psd_sqrt(np.eye(q) - c.conj().T @ c)
    y = np.linalg.pinv(left, rcond=PINV_RCOND) @ d
    z = a @ np.linalg.pinv(right, rcond=PINV_RCOND)
    scale = 1.0 + max(op_norm(a), op_norm(d))
    if op_norm(left @ y - d) > tol * scale:
        raise CompletionError("the row [C, D] is not a contraction")
    if op_norm(z @ right - a) > tol * scale:
        raise CompletionError("the column [[A], [C]] is not a contraction")
    if op_norm(y) > 1 + tol:
        raise CompletionError("the row [C, D] is not a contraction")
    if op_norm(z) > 1 + tol:
        raise CompletionError("the column [[A], [C]] is not a contraction")
    p, s = problem.free_shape
    defect_left = psd_sqrt(np.eye(p) - z @ z.conj().T)
    defect_right = psd_sqrt(np.eye(s) - y.conj().T @ y)
    return ParrottFactors(y=y, z=z, defect_left=defect_left,
                          defect_right=defect_right)


@dataclass(frozen=True)
class ParrottSolution:
    """A completed corner together with its verification data."""

    x: np.ndarray
    norm: float
    unique: bool
    factors: ParrottFactors


def parrott_complete(problem: ParrottProblem, v=None,
                     tol: float = CONTRACTION_TOL) -> ParrottSolution:
    """Complete the corner at norm level one.

    v is the free contraction parameter (defaults to zero, the central
    completion).  The assembled block is re-checked to be a contraction and a
    CompletionError is raised otherwise.
    """
    factors = parrott_factors(problem, tol=tol)
    p, s = problem.free_shape
    if v is None:
        v = np.zeros((p, s), dtype=complex)
    v = _as_matrix(v)
    if v.shape != (p, s):
        raise ValueError(f"V must have shape {(p, s)}")
    if op_norm(v) > 1 + tol:
        raise CompletionError("the parameter V must be a contraction")
    x = -factors.z @ problem.c.conj().T @ factors.y
    x = x + factors.defect_left @ v @ factors.defect_right
    norm = op_norm(problem.assemble(x))
    if norm > 1 + tol:
        raise CompletionError(
            f"assembled completion has norm {norm:.12g} > 1"
        )
    return ParrottSolution(x=x, norm=norm, unique=factors.unique,
                           factors=factors)


def central_solution(problem: ParrottProblem,
                     tol: float = CONTRACTION_TOL) -> ParrottSolution:
    """The completion with the free parameter set to zero."""
    return parrott_complete(problem, v=None, tol=tol)


# ---------------------------------------------------------------------------
# the scalar two-by-two contraction test


def dmp_factor(t: complex, x: complex) -> float:
    """Contraction margin of [[t, x], [0, t]]: nonnegative iff norm <= 1.

    The matrix is a contraction exactly when |x| <= 1 - |t|**2, so the margin
    1 - |t|**2 - |x| is the scalar feasibility certificate.
    """
    return 1.0 - abs(t) ** 2 - abs(x)


def dmp_pointwise(p1, p2, grid: TorusGrid) -> GridValue:
    """Minimum over the torus of the scalar margin 1 - |p1|**2 - |p2|.

    p1 and p2 are symbols on the same torus; a nonnegative result certifies
    the pointwise necessary condition for the degree-two problem.
    """
    if p1.nvars != p2.nvars:
        raise ValueError("symbols must share a variable count")
    band = max(p1.bandwidth(), p2.bandwidth())

    def values(n_points: int) -> np.ndarray:
        v1 = np.abs(grid_values(p1, n_points))
        v2 = np.abs(grid_values(p2, n_points))
        return (1.0 - v1 ** 2 - v2).reshape(-1)

    return grid_sweep(grid, values, bandwidth=band, minimize=True)
