"""Positivity certificates from the power-series Cayley transform.

For an analytic polynomial a vanishing at the origin, the transform
c = a / (1 - a), computed as a truncated power series, links two statements
level by level: the Hermitian block matrix built from c's total-degree slices
(ones on the diagonal, slice C_{l-m} below it, its conjugate above) is
pointwise positive semidefinite at depth m exactly when the triangular matrix
of a's slices A_1, ..., A_m is a pointwise contraction.  The bridge is an
exact finite-matrix identity: with P the unit upper triangular matrix carrying
-a's scalar coefficients and A their triangular matrix,

    P C^T P* = (I - A A*) (+) [1],

verified here as a residual check.  The transform also produces the test
function on integer exponents (1 at zero, c's coefficient on nonnegative
exponents, conjugated on nonpositive ones, zero on mixed signs) whose Gram
matrices over exponent windows are positive whenever a maps the polydisc into
the disc.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .completion import CONTRACTION_TOL
from .opnorm import symbol_matrix_min_eig, toeplitz_norm
from .polyalg import (
    GridValue,
    NPoly,
    TorusGrid,
    TrigPoly,
    evaluate,
    sup_norm,
)
from .slicing import dslice_sort_key, slice_decompose

BOUNDARY_CLEARANCE = 1e-7

# The diagonal normalization of the block matrix: the underlying function is
# scaled so its value at the origin is 1/2, making the zero coefficient of the
# induced kernel exactly 1.
C_ZERO = 0.5


# ---------------------------------------------------------------------------
# the truncated power-series transform


def _hom_parts(q: NPoly, depth: int) -> list:
    return [q.homogeneous_part(k) for k in range(depth + 1)]


def cayley_forward(a: NPoly, depth: int) -> NPoly:
    """c with (1 + c)(1 - a) = 1 through total degree `depth`.

    Degree by degree, c_k = a_k + sum_{j=1..k-1} a_j c_{k-j} on homogeneous
    parts.  a must vanish at the origin; parts of a beyond `depth` are
    ignored.
    """
    if not a.vanishes_at_origin():
        raise ValueError("the series must vanish at the origin")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    parts_a = _hom_parts(a, depth)
    parts_c: list = [NPoly(a.nvars, {})]
    for k in range(1, depth + 1):
        acc = dict(parts_a[k].terms)
        for j in range(1, k):
            for expo, coef in (parts_a[j] * parts_c[k - j]).terms.items():
                acc[expo] = acc.get(expo, 0j) + coef
        parts_c.append(NPoly(a.nvars, acc))
    total: dict = {}
    for part in parts_c:
        total.update(part.terms)
    return NPoly(a.nvars, total)


def cayley_inverse(c: NPoly, depth: int) -> NPoly:
    """a with (1 + c)(1 - a) = 1 through total degree `depth` (a = c - a c)."""
    if not c.vanishes_at_origin():
        raise ValueError("the series must vanish at the origin")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    parts_c = _hom_parts(c, depth)
    parts_a: list = [NPoly(c.nvars, {})]
    for k in range(1, depth + 1):
        acc = dict(parts_c[k].terms)
        for j in range(1, k):
            for expo, coef in (parts_a[j] * parts_c[k - j]).terms.items():
                acc[expo] = acc.get(expo, 0j) - coef
        parts_a.append(NPoly(c.nvars, acc))
    total: dict = {}
    for part in parts_a:
        total.update(part.terms)
    return NPoly(c.nvars, total)


@dataclass(frozen=True)
class CayleyPair:
    """A series and its transform, exact through the stored total degree.

    c0 records the fixed origin normalization of the transformed function;
    the series c itself carries only the nonconstant coefficients.
    """

    a: NPoly
    c: NPoly
    depth: int
    c0: float = C_ZERO

    @property
    def n(self) -> int:
        return self.a.nvars

    def round_trip_residual(self) -> float:
        back = cayley_inverse(self.c, self.depth)
        diff = back - self.a
        return max(
            (abs(v) for e, v in diff.terms.items() if sum(e) <= self.depth),
            default=0.0,
        )


def cayley_pair(a: NPoly, depth: int) -> CayleyPair:
    return CayleyPair(a=a, c=cayley_forward(a, depth), depth=depth)


def _c_series(source) -> NPoly:
    return source.c if isinstance(source, CayleyPair) else source


# ---------------------------------------------------------------------------
# the block matrix of slices and its positivity


def kp_slice_symbols(q: NPoly, depth: int) -> tuple:
    """Total-degree slices 1..depth of q, each in one variable fewer."""
    return tuple(slice_decompose(q, k) for k in range(1, depth + 1))


def kp_block_symbols(source, depth: int):
    """(depth+1)-square Hermitian matrix of slice symbols: ones on the
    diagonal, C_{l-m} at (l, m) below it, the conjugate symbol above.

    source is the transformed series c (or a CayleyPair carrying it).
    """
    c = _c_series(source)
    if c.nvars < 1:
        raise ValueError("the block matrix needs at least one variable")
    slices = kp_slice_symbols(c, depth)
    m = c.nvars - 1
    one = TrigPoly.constant(m, 1.0)
    rows = []
    for l in range(depth + 1):
        row = []
        for col in range(depth + 1):
            if l == col:
                row.append(one)
            elif l > col:
                row.append(slices[l - col - 1])
            else:
                row.append(slices[col - l - 1].conj())
        rows.append(tuple(row))
    return tuple(rows)


def kp_block_matrix(source, depth: int, point) -> np.ndarray:
    """Numeric Hermitian block matrix at one torus point of dimension
    nvars - 1."""
    symbols = kp_block_symbols(source, depth)
    out = np.empty((depth + 1, depth + 1), dtype=complex)
    for i, row in enumerate(symbols):
        for j, entry in enumerate(row):
            out[i, j] = evaluate(entry, point)
    return out


@dataclass(frozen=True)
class KPPositivity:
    """Pointwise minimum eigenvalue of the slice block matrix."""

    min_eig: GridValue
    tol: float

    @property
    def ok(self) -> bool:
        return float(self.min_eig) >= -self.tol


def kp_positive(source, depth: int, grid: TorusGrid,
                tol: float = CONTRACTION_TOL) -> KPPositivity:
    return KPPositivity(
        min_eig=symbol_matrix_min_eig(kp_block_symbols(source, depth), grid),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# the scalar identity bridging positivity and contractivity


def schur_identity_check(a) -> float:
    """Max-entry residual of P C^T P* = (I - A A*) (+) [1] for scalars.

    a lists a_1, ..., a_n; c is their scalar transform; C is the Hermitian
    Toeplitz matrix with first column (1, c_1, ..., c_n), P the unit upper
    triangular matrix with -a_{j-i} above the diagonal, and A the n-square
    triangular matrix with a_1 on the diagonal.
    """
    seq = [complex(v) for v in a]
    n = len(seq)
    if n < 1:
        raise ValueError("at least one coefficient is required")
    c = [0j] * (n + 1)
    for k in range(1, n + 1):
        c[k] = seq[k - 1] + sum(seq[j - 1] * c[k - j] for j in range(1, k))
    cm = np.eye(n + 1, dtype=complex)
    pm = np.eye(n + 1, dtype=complex)
    for i in range(n + 1):
        for j in range(n + 1):
            if i > j:
                cm[i, j] = c[i - j]
            elif i < j:
                cm[i, j] = c[j - i].conjugate()
                pm[i, j] = -seq[j - i - 1]
    am = np.zeros((n, n), dtype=complex)
    for r in range(n):
        for col in range(r, n):
            am[r, col] = seq[col - r]
    lhs = pm @ cm.T @ pm.conj().T
    rhs = np.zeros((n + 1, n + 1), dtype=complex)
    rhs[:n, :n] = np.eye(n) - am @ am.conj().T
    rhs[n, n] = 1.0
    return float(np.max(np.abs(lhs - rhs)))


@dataclass(frozen=True)
class KPEquivalence:
    """Both sides of the depth-matched equivalence, evaluated independently."""

    min_eig: GridValue
    toeplitz: GridValue
    tol: float

    @property
    def psd_ok(self) -> bool:
        return float(self.min_eig) >= -self.tol

    @property
    def contractive_ok(self) -> bool:
        return float(self.toeplitz) <= 1.0 + self.tol

    @property
    def agree(self) -> bool | None:
        """Verdict agreement; None when either side is too close to its
        boundary to call."""
        eig_margin = float(self.min_eig)
        norm_margin = 1.0 - float(self.toeplitz)
        if (abs(eig_margin) <= BOUNDARY_CLEARANCE
                or abs(norm_margin) <= BOUNDARY_CLEARANCE):
            return None
        return self.psd_ok == self.contractive_ok


def kp_equivalence_check(a: NPoly, depth: int, grid: TorusGrid,
                         tol: float = CONTRACTION_TOL) -> KPEquivalence:
    """Evaluate both sides of the equivalence at matching depth.

    The block matrix of the transform's slices is positive semidefinite
    pointwise exactly when the triangular matrix of a's slices is a pointwise
    contraction; both sides are computed by independent grid sweeps.
    """
    c = cayley_forward(a, depth)
    return KPEquivalence(
        min_eig=symbol_matrix_min_eig(kp_block_symbols(c, depth), grid),
        toeplitz=toeplitz_norm(kp_slice_symbols(a, depth), grid),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# the positive-definite test function on integer exponents


@dataclass(frozen=True)
class KPFunction:
    """Function on integer exponent tuples built from a transform.

    Takes 1 at the origin, the transform coefficient on nonnegative
    exponents, its conjugate on nonpositive ones, and 0 on mixed signs.
    Gram matrices over nonnegative exponent windows (level-then-lex order)
    use only coefficients the stored depth makes exact.
    """

    n: int
    depth: int
    c: NPoly

    def value(self, alpha) -> complex:
        alpha = tuple(int(v) for v in alpha)
        if len(alpha) != self.n:
            raise ValueError(f"exponent must have {self.n} entries")
        if all(v == 0 for v in alpha):
            return 1.0 + 0j
        if all(v >= 0 for v in alpha):
            return self.c.coeff(alpha)
        if all(v <= 0 for v in alpha):
            return self.c.coeff(tuple(-v for v in alpha)).conjugate()
        return 0j

    def window(self, max_degree: int) -> list:
        """Nonnegative exponents of total degree <= max_degree, ordered by
        level then lexicographically."""
        box = itertools.product(range(max_degree + 1), repeat=self.n)
        idx = [e for e in box if sum(e) <= max_degree]
        return sorted(idx, key=dslice_sort_key)

    def gram(self, max_degree: int) -> np.ndarray:
        if max_degree > self.depth:
            raise ValueError(
                "window degree exceeds the depth the transform is exact to"
            )
        idx = self.window(max_degree)
        g = np.empty((len(idx), len(idx)), dtype=complex)
        for i, ai in enumerate(idx):
            for j, aj in enumerate(idx):
                g[i, j] = self.value(tuple(x - y for x, y in zip(ai, aj)))
        return g

    def gram_min_eig(self, max_degree: int) -> float:
        return float(np.linalg.eigvalsh(self.gram(max_degree))[0])


def kp_function(g: NPoly, depth: int) -> KPFunction:
    """Test function of an analytic polynomial vanishing at the origin."""
    return KPFunction(n=g.nvars, depth=depth, c=cayley_forward(g, depth))


@dataclass(frozen=True)
class KPVerdict:
    """Outcome of the end-to-end positivity check on a disc-valued map."""

    positive: bool
    min_eig: GridValue
    sup: GridValue
    function: KPFunction

    def __bool__(self) -> bool:
        return self.positive


def kp_test_map(g: NPoly, depth: int, grid: TorusGrid,
                tol: float = CONTRACTION_TOL) -> KPVerdict:
    """Transform a map into the open disc and certify block positivity.

    Requires g to vanish at the origin and its grid sup norm to sit strictly
    inside 1; the resulting verdict is expected positive for every such g.
    """
    if not g.vanishes_at_origin():
        raise ValueError("the map must vanish at the origin")
    sup = sup_norm(g.as_trig(), grid)
    if float(sup) >= 1.0:
        raise ValueError("the map must have supremum norm below 1")
    fn = kp_function(g, depth)
    verdict = kp_positive(fn.c, depth, grid, tol)
    return KPVerdict(
        positive=verdict.ok, min_eig=verdict.min_eig, sup=sup, function=fn
    )
