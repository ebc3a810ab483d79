"""Operator norms of matrices with trigonometric-polynomial entries.

A matrix whose entries are multiplication operators by torus symbols has
operator norm equal to the essential supremum, over the torus, of the largest
singular value of the pointwise numeric matrix.  This module evaluates such
suprema by batched singular value decompositions over refining uniform grids,
and provides the two structured families the solver needs:

* the strictly upper triangular Toeplitz matrix built from symbols
  p_1, ..., p_d (entry (r, c) equal to p_{c-r} above the diagonal), and
* finite sections of the doubly infinite Laurent matrix of a symbol, whose
  diagonals are the symbol's total-degree slices.

Also here: the positive semidefinite square root with a relative clamping
tolerance, and the plain largest-singular-value helper.
"""

from __future__ import annotations

import numpy as np

from .polyalg import GridValue, TorusGrid, TrigPoly, grid_sweep, grid_values, sup_norm
from .slicing import slice_decompose, slice_support

PSD_CLAMP_REL = 1e-10


class NotPSDError(ValueError):
    """A matrix required to be positive semidefinite has a negative eigenvalue
    beyond the clamping tolerance."""


def op_norm(m) -> float:
    """Largest singular value of a numeric matrix."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def psd_sqrt(m, clamp_rel: float = PSD_CLAMP_REL) -> np.ndarray:
    """Hermitian square root of a PSD matrix, clamping tiny negative spectrum.

    Eigenvalues above -clamp_rel * ||m|| are clamped to zero when negative;
    anything lower raises NotPSDError.  The input must be Hermitian to the
    same relative tolerance.
    """
    m = np.asarray(m, dtype=complex)
    scale = float(np.linalg.norm(m, 2)) if m.size else 0.0
    tol = clamp_rel * max(scale, 1.0)
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol:
        raise NotPSDError("matrix is not Hermitian")
    w, v = np.linalg.eigh(m)
    if w.size and w[0] < -tol:
        raise NotPSDError(f"eigenvalue {w[0]:.3e} below -{tol:.3e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


# ---------------------------------------------------------------------------
# pointwise suprema of symbol matrices


def _diagonal_matrix_sup(diagonals: dict, size: int, nvars: int,
                         grid: TorusGrid) -> GridValue:
    """Supremum over the torus of sigma_max of a Toeplitz-structured matrix.

    diagonals maps an offset k to the symbol sitting on entries (r, r + k);
    all symbols live on the nvars-torus.  For nvars == 0 the matrix is a
    single numeric matrix and the result is exact.
    """
    diagonals = {k: q for k, q in diagonals.items() if not q.is_zero}
    if nvars == 0:
        m = np.zeros((size, size), dtype=complex)
        for k, q in diagonals.items():
            val = q.coeff(())
            for r in range(size):
                if 0 <= r + k < size:
                    m[r, r + k] = val
        return GridValue(op_norm(m), converged=True, points=1)

    band = max((q.bandwidth() for q in diagonals.values()), default=0)

    def values(n_points: int) -> np.ndarray:
        flat = {k: grid_values(q, n_points).reshape(-1)
                for k, q in diagonals.items()}
        count = n_points ** nvars
        stack = np.zeros((count, size, size), dtype=complex)
        for k, vals in flat.items():
            for r in range(size):
                c = r + k
                if 0 <= c < size:
                    stack[:, r, c] = vals
        if not diagonals:
            return np.zeros(count)
        return np.linalg.svd(stack, compute_uv=False)[:, 0]

    return grid_sweep(grid, values, bandwidth=band)


def symbol_matrix_norm(entries, grid: TorusGrid) -> GridValue:
    """Supremum over the torus of sigma_max of a matrix of symbols.

    entries is a rectangular nested sequence of TrigPoly sharing one variable
    count; for zero-variable entries the result is a single exact matrix norm.
    """
    rows = tuple(tuple(row) for row in entries)
    if not rows or not rows[0]:
        return GridValue(0.0, converged=True, points=1)
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise ValueError("entries must form a rectangular matrix")
    nvars = rows[0][0].nvars
    if any(e.nvars != nvars for r in rows for e in r):
        raise ValueError("entries must share a variable count")
    if nvars == 0:
        m = np.array([[e.coeff(()) for e in r] for r in rows], dtype=complex)
        return GridValue(op_norm(m), converged=True, points=1)

    band = max((e.bandwidth() for r in rows for e in r), default=0)

    def values(n_points: int) -> np.ndarray:
        count = n_points ** nvars
        stack = np.zeros((count, len(rows), ncols), dtype=complex)
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                if not e.is_zero:
                    stack[:, i, j] = grid_values(e, n_points).reshape(-1)
        return np.linalg.svd(stack, compute_uv=False)[:, 0]

    return grid_sweep(grid, values, bandwidth=band)


def symbol_matrix_min_eig(entries, grid: TorusGrid) -> GridValue:
    """Infimum over the torus of the smallest eigenvalue of a Hermitian
    matrix of symbols.

    entries must be pointwise Hermitian (entry (i, j) the conjugate transpose
    of entry (j, i) as torus functions); only the lower triangle is read.
    Zero-variable entries give a single exact eigenvalue computation.
    """
    rows = tuple(tuple(row) for row in entries)
    if not rows or not rows[0]:
        return GridValue(0.0, converged=True, points=1)
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise ValueError("entries must form a square matrix")
    nvars = rows[0][0].nvars
    if any(e.nvars != nvars for r in rows for e in r):
        raise ValueError("entries must share a variable count")
    if nvars == 0:
        m = np.array([[e.coeff(()) for e in r] for r in rows], dtype=complex)
        return GridValue(
            float(np.linalg.eigvalsh(m)[0]), converged=True, points=1
        )

    band = max((e.bandwidth() for r in rows for e in r), default=0)

    def values(n_points: int) -> np.ndarray:
        count = n_points ** nvars
        stack = np.zeros((count, size, size), dtype=complex)
        for i in range(size):
            for j in range(i + 1):
                e = rows[i][j]
                if not e.is_zero:
                    stack[:, i, j] = grid_values(e, n_points).reshape(-1)
        return np.linalg.eigvalsh(stack)[:, 0]

    return grid_sweep(grid, values, bandwidth=band, minimize=True)


def toeplitz_eval(symbols, point) -> np.ndarray:
    """Numeric value at one torus point of the triangular symbol matrix.

    The (d+1) x (d+1) matrix has entry (r, c) equal to symbols[c-r-1]
    evaluated at the point when c > r, and zero on and below the diagonal.
    """
    from .polyalg import evaluate

    d = len(symbols)
    m = np.zeros((d + 1, d + 1), dtype=complex)
    for r in range(d + 1):
        for c in range(r + 1, d + 1):
            m[r, c] = evaluate(symbols[c - r - 1], point)
    return m


def toeplitz_norm(symbols, grid: TorusGrid) -> GridValue:
    """Operator norm of the triangular symbol matrix (torus supremum of
    sigma_max).  Exact for zero-variable symbols."""
    symbols = tuple(symbols)
    if not symbols:
        return GridValue(0.0, converged=True, points=1)
    nvars = symbols[0].nvars
    if any(s.nvars != nvars for s in symbols):
        raise ValueError("symbols must share a variable count")
    diagonals = {k: symbols[k - 1] for k in range(1, len(symbols) + 1)}
    return _diagonal_matrix_sup(diagonals, len(symbols) + 1, nvars, grid)


def full_function_norm(q: TrigPoly, grid: TorusGrid) -> GridValue:
    """Supremum norm of the symbol itself over the full torus."""
    return sup_norm(q, grid)


def laurent_section_norm(phi: TrigPoly, half_width: int,
                         grid: TorusGrid) -> GridValue:
    """Norm of a finite window of the Laurent matrix of phi.

    Rows and columns are indexed by -half_width..half_width and entry (r, c)
    is the total-degree slice of index c - r, a symbol in one variable fewer,
    evaluated pointwise.  These window norms increase to the supremum norm of
    phi as half_width grows (compressions of multiplication by phi on
    doubly infinite sequence space).
    """
    if phi.nvars < 1:
        raise ValueError("laurent sections need at least one variable")
    if half_width < 0:
        raise ValueError("half_width must be nonnegative")
    size = 2 * half_width + 1
    diagonals = {}
    for j in slice_support(phi):
        if abs(j) < size:
            diagonals[j] = slice_decompose(phi, j)
    return _diagonal_matrix_sup(diagonals, size, phi.nvars - 1, grid)
