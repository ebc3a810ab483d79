"""Hankel data of torus symbols and distance to the analytic ones.

Grading a symbol by total exponent sum, the strictly negative slices form a
Hankel matrix: entry (i, j) is the slice of index -(i + j + 1), a symbol in
one variable fewer.  Its pointwise operator norm is a lower bound for the
distance from the symbol to analytic polynomials; for one-variable symbols
with finitely many negative coefficients the matrix is a finite numeric
Hankel matrix and the bound is the exact distance.

The same data gives a quick necessary screen for the two-variable degree-two
extension problem: multiplying the polynomial by the cube of the conjugated
first coordinate pushes its slices to levels -1 and -2, and the resulting
two-by-two Hankel matrix must be pointwise contractive for an extension to
exist.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cfsolver import CFInstance
from .completion import CONTRACTION_TOL
from .opnorm import symbol_matrix_norm
from .polyalg import GridValue, TorusGrid, TrigPoly
from .slicing import slice_decompose, slice_support


def natural_depth(phi: TrigPoly) -> int:
    """Smallest depth whose Hankel matrix holds every negative slice."""
    negatives = [-j for j in slice_support(phi) if j < 0]
    return max(negatives, default=0)


def hankel_build(phi: TrigPoly, depth: int):
    """Depth-square matrix of negative slices: entry (i, j) is the slice of
    index -(i + j + 1)."""
    if phi.nvars < 1:
        raise ValueError("hankel data needs at least one variable")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    return tuple(
        tuple(slice_decompose(phi, -(i + j + 1)) for j in range(depth))
        for i in range(depth)
    )


def hankel_norm(phi: TrigPoly, grid: TorusGrid,
                depth: int | None = None) -> GridValue:
    """Pointwise operator norm of the Hankel matrix of phi.

    depth defaults to the smallest value capturing all negative slices;
    larger depths only pad with zero slices and cannot change the value.
    """
    if depth is None:
        depth = natural_depth(phi)
    return symbol_matrix_norm(hankel_build(phi, depth), grid)


def nehari_distance(phi: TrigPoly, grid: TorusGrid,
                    depth: int | None = None) -> GridValue:
    """Distance from phi to analytic symbols, as certified by Hankel data.

    For one-variable symbols this equals the true distance (the matrix is a
    finite numeric Hankel matrix and the classical duality is exact); in more
    variables it is a lower bound for the distance.
    """
    return hankel_norm(phi, grid, depth=depth)


@dataclass(frozen=True)
class BridgeReport:
    """Necessary screen for two-variable degree-two instances."""

    hankel: GridValue
    tol: float

    @property
    def ok(self) -> bool:
        return float(self.hankel) <= 1.0 + self.tol


def cf_bridge_necessary(inst: CFInstance, grid: TorusGrid,
                        tol: float = CONTRACTION_TOL) -> BridgeReport:
    """Hankel screen for the two-variable degree-two problem.

    The polynomial is multiplied by the conjugated first coordinate cubed,
    placing its homogeneous levels at slice indices -2 and -1, and the
    resulting depth-two Hankel matrix [[p_2, p_1], [p_1, 0]] must be pointwise
    contractive whenever the instance extends.  The screen is necessary but
    strictly weaker than the triangular-matrix condition.
    """
    if inst.n != 2 or inst.d != 2:
        raise ValueError(
            "the bridge screen is defined for two variables and degree two"
        )
    shifted = TrigPoly(
        2, {(a[0] - 3, a[1]): c for a, c in inst.p.terms.items()}
    )
    value = hankel_norm(shifted, grid, depth=2)
    return BridgeReport(hankel=value, tol=tol)
