"""Step-by-step norm-preserving extension of symbol families.

A degree-d polynomial p on the polydisc, vanishing at the origin, is encoded
by symbols p_1, ..., p_d (one per homogeneous level, each a torus function in
one variable fewer).  The solver extends the family one level at a time: the
level-(k+1) symbol is the free corner of a one-corner completion problem built
from the triangular matrix of p_1, ..., p_k, solved pointwise on a refining
torus grid with the central (zero-parameter) completion, and the sampled
corner is converted back to coefficients.  An extension step is accepted only
when every significant recovered coefficient lies in the admissible exponent
set for its level; otherwise the run stops and reports the offending
exponents.  When the pointwise completions carry no residual freedom and the
sampling passes agree, a stop is definitive: no other choice of completions
could have avoided it.

The scalar specialization (one ambient variable, so the symbols are numbers)
runs on exact matrices with no grids, and powers the closed-form families of
special_case_extend, where a two-term product structure makes the whole
infinite extension explicit with a certified norm bound.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .completion import CONTRACTION_TOL, CompletionError
from .opnorm import op_norm, toeplitz_norm
from .polyalg import (
    GridValue,
    NPoly,
    TorusGrid,
    TrigPoly,
    grid_values,
    recover_coeffs,
    sup_norm,
)
from .slicing import MembershipReport, SymbolFamily, membership_report, reformulate

RUNNING = "running"
EXTENDED = "extended"
FAILED_NORM = "failed_norm"
FAILED_DEGREE = "failed_degree"

#: Significant-coefficient threshold (relative) for recovered corners.
RECOVERY_REL_THRESHOLD = 1e-8

#: Corners are solved at contraction level 1 + this margin.  Families sitting
#: exactly on the boundary make the defect factors singular, and the
#: pseudoinverse then amplifies data roundoff without bound; backing off by a
#: margin far below every acceptance tolerance keeps the smallest retained
#: defect eigenvalue near 2e-10 and the amplification harmless, at the cost of
#: partial norms 1 + 1e-10 instead of exactly 1.
STEP_REGULARIZATION = 1e-10

#: Margins closer to the boundary than this are treated as undecided when
#: comparing two independent feasibility tests.
BOUNDARY_CLEARANCE = 1e-7


class HypothesisError(ValueError):
    """The closed-form family is outside its domain of validity."""


# ---------------------------------------------------------------------------
# instances


@dataclass(frozen=True)
class CFInstance:
    """A polydisc polynomial posed for extension: p(0) = 0 and degree >= 1."""

    p: NPoly

    def __post_init__(self):
        if not isinstance(self.p, NPoly):
            raise TypeError("instance data must be an analytic polynomial")
        if not self.p.vanishes_at_origin():
            raise ValueError("the polynomial must vanish at the origin")
        if self.p.degree() < 1:
            raise ValueError("the polynomial must have degree at least 1")

    @property
    def n(self) -> int:
        return self.p.nvars

    @property
    def d(self) -> int:
        return self.p.degree()

    def family(self) -> SymbolFamily:
        return reformulate(self.p)


@dataclass(frozen=True)
class NecessaryReport:
    """Feasibility screen: triangular matrix norm, and for the two-variable
    degree-two case the independent scalar-margin test."""

    toeplitz: GridValue
    tol: float
    dmp_margin: GridValue | None = None

    @property
    def margin(self) -> float:
        return 1.0 - float(self.toeplitz)

    @property
    def ok(self) -> bool:
        return float(self.toeplitz) <= 1.0 + self.tol

    @property
    def agree(self) -> bool | None:
        """Sign agreement of the two tests; None off the (2, 2) case or when
        either margin is too close to the boundary to call."""
        if self.dmp_margin is None:
            return None
        m1, m2 = self.margin, float(self.dmp_margin)
        if abs(m1) <= BOUNDARY_CLEARANCE or abs(m2) <= BOUNDARY_CLEARANCE:
            return None
        return (m1 > 0) == (m2 > 0)


def necessary_condition(inst: CFInstance, grid: TorusGrid,
                        tol: float = CONTRACTION_TOL) -> NecessaryReport:
    """Check the triangular-matrix contraction condition for an instance.

    For two ambient variables and degree two, the equivalent pointwise scalar
    margin 1 - |p_1|**2 - |p_2| is evaluated as an independent cross-check and
    reported alongside.
    """
    fam = inst.family()
    tnorm = toeplitz_norm(fam.symbols, grid)
    dmp = None
    if inst.n == 2 and inst.d == 2:
        from .completion import dmp_pointwise

        dmp = dmp_pointwise(fam.symbol(1), fam.symbol(2), grid)
    return NecessaryReport(toeplitz=tnorm, tol=tol, dmp_margin=dmp)


# ---------------------------------------------------------------------------
# pointwise central completions, batched over grid points


def _sqrt_and_pinv(mats: np.ndarray, tol: float):
    """Batched PSD square root and its pseudoinverse via eigendecomposition."""
    w, v = np.linalg.eigh(mats)
    scale = max(float(np.max(w, initial=0.0)), 1.0)
    if float(np.min(w, initial=0.0)) < -1e-10 * scale:
        raise CompletionError(
            "pointwise contraction precondition fails on the sample grid"
        )
    w = np.clip(w, 0.0, None)
    s = np.sqrt(w)
    inv = np.where(s > 1e-10 * math.sqrt(scale), 1.0 / np.where(s == 0, 1.0, s), 0.0)
    vh = v.conj().swapaxes(-1, -2)
    return (v * s[..., None, :]) @ vh, (v * inv[..., None, :]) @ vh


def _central_corner_values(vals: np.ndarray, tol: float):
    """Central completion corner at each sample point.

    vals has shape (k, P): row j holds the values of the level-(j+1) symbol at
    the P grid points.  Returns the corner values (P,), the per-point residual
    freedom (product of the two defect norms, (P,)), and the largest assembled
    matrix norm across points.
    """
    k, npts = vals.shape
    level = 1.0 + STEP_REGULARIZATION
    scaled = vals / level
    a = np.zeros((npts, 1, k), dtype=complex)
    c = np.zeros((npts, k, k), dtype=complex)
    d = np.zeros((npts, k, 1), dtype=complex)
    for j in range(k):
        a[:, 0, j] = scaled[j]
        d[:, k - 1 - j, 0] = scaled[j]
    for r in range(k):
        for col in range(r + 1, k):
            c[:, r, col] = scaled[col - r - 1]
    ch = c.conj().swapaxes(-1, -2)
    eye = np.eye(k)
    left_sqrt, left_pinv = _sqrt_and_pinv(eye - c @ ch, tol)
    right_sqrt, right_pinv = _sqrt_and_pinv(eye - ch @ c, tol)
    y = left_pinv @ d
    z = a @ right_pinv
    scale = 1.0 + float(np.max(np.abs(vals), initial=0.0))
    if np.max(np.abs(left_sqrt @ y - d)) > tol * scale * k:
        raise CompletionError("row blocks are not pointwise contractive")
    if np.max(np.abs(z @ right_sqrt - a)) > tol * scale * k:
        raise CompletionError("column blocks are not pointwise contractive")
    x = (-z @ ch @ y)[:, 0, 0] * level
    zz = np.sum(np.abs(z) ** 2, axis=(1, 2)).real
    yy = np.sum(np.abs(y) ** 2, axis=(1, 2)).real
    freedom = np.sqrt(np.clip(1.0 - zz, 0.0, None)) * np.sqrt(
        np.clip(1.0 - yy, 0.0, None)
    )
    assembled = np.zeros((npts, k + 1, k + 1), dtype=complex)
    for j in range(k):
        assembled[:, 0, j] = vals[j]
        assembled[:, 1 + (k - 1 - j), k] = vals[j]
    assembled[:, 0, k] = x
    for r in range(k):
        for col in range(r + 1, k):
            assembled[:, 1 + r, col] = vals[col - r - 1]
    sigma = np.linalg.svd(assembled, compute_uv=False)[:, 0]
    worst = float(np.max(sigma))
    if worst > 1.0 + 1e-6:
        raise CompletionError(
            f"assembled pointwise completion has norm {worst:.12g}"
        )
    return x, freedom, worst


@dataclass(frozen=True)
class StepRecord:
    """Outcome of one extension level."""

    order: int
    candidate: TrigPoly
    unique: bool
    sampling_converged: bool
    report: MembershipReport
    accepted: bool
    norm_after: GridValue | None = None


def extend_step(symbols, n: int, grid: TorusGrid,
                tol: float = CONTRACTION_TOL) -> StepRecord:
    """Compute the next-level symbol by pointwise central completion.

    symbols are the accepted levels 1..k (torus functions in n-1 variables);
    the returned record carries the level-(k+1) candidate, whether the
    pointwise completions were forced (no residual freedom), whether
    coefficient recovery agreed across two grid resolutions, and the
    admissibility report of the candidate's support.  The caller decides
    acceptance from the report.
    """
    symbols = tuple(symbols)
    if not symbols:
        raise ValueError("at least one symbol is required")
    m = n - 1
    if any(s.nvars != m for s in symbols):
        raise ValueError(f"symbols must have {m} variables")
    k = len(symbols)
    level = k + 1

    def candidate_at(n_points: int):
        vals = np.stack(
            [grid_values(s, n_points).reshape(-1) for s in symbols], axis=0
        )
        x, freedom, _ = _central_corner_values(vals, tol)
        if m == 0:
            poly = TrigPoly(0, {(): complex(x[0])})
        else:
            samples = x.reshape((n_points,) * m)
            poly = recover_coeffs(samples, n_points // 2 - 1,
                                  threshold=RECOVERY_REL_THRESHOLD)
        return poly, float(np.max(freedom))

    if m == 0:
        cand, freedom = candidate_at(1)
        converged = True
    else:
        band = max(s.bandwidth() for s in symbols)
        n1 = grid.base_resolution(max(4, 2 * level * band))
        c1, _ = candidate_at(n1)
        cand, freedom = candidate_at(n1 * grid.refinement_factor)
        converged = _coeffs_close(c1, cand)
        if not converged:
            c3, freedom = candidate_at(n1 * grid.refinement_factor ** 2)
            converged = _coeffs_close(cand, c3)
            cand = c3

    report = membership_report(cand, level)
    return StepRecord(
        order=level,
        candidate=cand,
        unique=freedom <= tol,
        sampling_converged=converged,
        report=report,
        accepted=report.image_ok,
    )


def _coeffs_close(p: TrigPoly, q: TrigPoly, rel: float = 1e-6) -> bool:
    scale = max(p.max_coeff(), q.max_coeff(), 1e-300)
    keys = set(p.terms) | set(q.terms)
    return all(abs(p.coeff(a) - q.coeff(a)) <= rel * scale for a in keys)


# ---------------------------------------------------------------------------
# the extension loop


@dataclass
class ExtensionRun:
    """Full record of an extension attempt up to a target level."""

    n: int
    base_symbols: tuple
    target_order: int
    status: str = RUNNING
    definitive: bool = False
    new_symbols: tuple = ()
    steps: list = field(default_factory=list)
    initial_norm: GridValue | None = None
    message: str = ""

    @property
    def symbols(self) -> tuple:
        return self.base_symbols + self.new_symbols

    @property
    def extended_order(self) -> int:
        return len(self.symbols)


def cf_extend(inst: CFInstance, target_order: int, grid: TorusGrid,
              tol: float = CONTRACTION_TOL) -> ExtensionRun:
    """Extend an instance level by level up to target_order.

    The run stops with status failed_norm if the starting family (or, through
    numerical truncation, an accepted partial family) is not contractive, and
    with failed_degree if a candidate symbol has significant coefficients
    outside the admissible set for its level.  A degree failure is definitive
    when every completion along the way was forced and the sampling converged;
    a failed initial norm is always definitive because grid suprema are lower
    bounds.
    """
    fam = inst.family()
    if target_order < fam.d:
        raise ValueError("target order must be at least the starting degree")
    run = ExtensionRun(n=inst.n, base_symbols=fam.symbols,
                       target_order=target_order)
    run.initial_norm = toeplitz_norm(fam.symbols, grid)
    if float(run.initial_norm) > 1.0 + tol:
        run.status = FAILED_NORM
        run.definitive = True
        run.message = (
            f"starting family has matrix norm {float(run.initial_norm):.12g}"
        )
        return run

    symbols = list(fam.symbols)
    new: list = []
    while len(symbols) < target_order:
        try:
            step = extend_step(symbols, inst.n, grid, tol=tol)
        except CompletionError as exc:
            run.status = FAILED_NORM
            run.definitive = False
            run.message = str(exc)
            return run
        if not step.accepted:
            run.steps.append(step)
            run.status = FAILED_DEGREE
            earlier_forced = all(s.unique for s in run.steps[:-1])
            run.definitive = (step.unique and step.sampling_converged
                              and earlier_forced)
            run.message = (
                f"level {step.order} candidate leaves the admissible exponent "
                f"set at {step.report.offending_image}"
            )
            return run
        symbols.append(step.candidate)
        new.append(step.candidate)
        norm_after = toeplitz_norm(symbols, grid)
        run.steps.append(
            StepRecord(
                order=step.order,
                candidate=step.candidate,
                unique=step.unique,
                sampling_converged=step.sampling_converged,
                report=step.report,
                accepted=True,
                norm_after=norm_after,
            )
        )
        run.new_symbols = tuple(new)
        if float(norm_after) > 1.0 + max(tol, 1e-8):
            run.status = FAILED_NORM
            run.definitive = False
            run.message = (
                f"partial family norm {float(norm_after):.12g} after level "
                f"{step.order}"
            )
            return run
    run.status = EXTENDED
    run.definitive = all(
        s.norm_after is None or s.norm_after.converged for s in run.steps
    )
    return run


# ---------------------------------------------------------------------------
# the scalar specialization


def _toeplitz_matrix(seq) -> np.ndarray:
    """(k+1)-square strictly upper triangular Toeplitz matrix of a sequence."""
    k = len(seq)
    t = np.zeros((k + 1, k + 1), dtype=complex)
    for r in range(k + 1):
        for c in range(r + 1, k + 1):
            t[r, c] = seq[c - r - 1]
    return t


def cf_one_var(a, order: int, tol: float = CONTRACTION_TOL) -> list:
    """Extend a scalar coefficient sequence keeping the triangular matrix
    contractive, using exact central completions.

    a lists the first coefficients; the result has length `order` and starts
    with a.  Raises CompletionError when the starting matrix has norm > 1.
    """
    seq = [complex(v) for v in a]
    if not seq:
        raise ValueError("at least one starting coefficient is required")
    if order < len(seq):
        raise ValueError("order must be at least the starting length")
    start_norm = op_norm(_toeplitz_matrix(seq))
    if start_norm > 1.0 + tol:
        raise CompletionError(
            f"starting sequence has matrix norm {start_norm:.12g} > 1"
        )
    while len(seq) < order:
        vals = np.array(seq, dtype=complex).reshape(-1, 1)
        x, _, _ = _central_corner_values(vals, tol)
        seq.append(complex(x[0]))
    return seq


def nehari_extend_scaled(a, order: int, tol: float = CONTRACTION_TOL) -> list:
    """Extend a scalar sequence preserving its own matrix norm.

    The sequence is normalized by nu = ||T(a)||, extended at level one, and
    rescaled, so every partial matrix of the result has norm at most nu.
    """
    seq = [complex(v) for v in a]
    nu = op_norm(_toeplitz_matrix(seq))
    if nu <= 1e-15:
        return [0j] * order if order >= len(seq) else seq[:order]
    scaled = cf_one_var([v / nu for v in seq], order, tol=tol)
    return [nu * v for v in scaled]


# ---------------------------------------------------------------------------
# closed-form two-term product families


@dataclass(frozen=True)
class SpecialCaseResult:
    """Infinite-order extension data for a two-term product family."""

    symbols: tuple
    case: int
    certified_bound: float
    sup_linear: GridValue
    seq_a: tuple | None
    seq_b: tuple | None


def special_case_extend(alpha: complex, beta: complex, gamma: complex,
                        delta: complex, order: int, grid: TorusGrid,
                        tol: float = CONTRACTION_TOL) -> SpecialCaseResult:
    """Extend the family with p_1 = gamma + delta*w and p_2 = (alpha + beta*w) p_1.

    Valid when some parameter vanishes or the phase alignment
    arg(alpha) - arg(beta) = arg(gamma) - arg(delta) holds; the construction
    splits the two-term structure into two scalar extensions and certifies

        sup |p_1| * (s + sqrt(s*s + 4)) / 2,   s = |alpha| + |beta|,

    as a bound on every partial matrix norm.  Raises HypothesisError outside
    the phase-aligned domain and CompletionError when the certified bound
    cannot reach one (the pointwise scalar margin is violated).
    """
    alpha, beta = complex(alpha), complex(beta)
    gamma, delta = complex(gamma), complex(delta)
    if order < 1:
        raise ValueError("order must be at least 1")
    if alpha and beta and gamma and delta:
        cross = alpha * beta.conjugate() * (gamma * delta.conjugate()).conjugate()
        if abs(cross.imag) > 1e-12 * abs(cross) or cross.real < 0:
            raise HypothesisError(
                "phase alignment arg(alpha)-arg(beta) = arg(gamma)-arg(delta) "
                "is required when all four parameters are nonzero"
            )
    p1 = TrigPoly(1, {(0,): gamma, (1,): delta})
    m = sup_norm(p1, grid)
    s = abs(alpha) + abs(beta)
    if float(m) ** 2 + s * float(m) > 1.0 + tol:
        raise CompletionError(
            "the pointwise margin 1 - |p1|**2 - |p2| is violated: "
            f"sup|p1| = {float(m):.12g}, |alpha|+|beta| = {s:.12g}"
        )
    certified = float(m) * (s + math.sqrt(s * s + 4.0)) / 2.0

    seq_a = seq_b = None
    if beta == 0:
        case = 1
        seq_a = tuple(nehari_extend_scaled([1.0, alpha], order, tol=tol))
        prefactors = [
            TrigPoly.constant(1, seq_a[k]) for k in range(order)
        ]
    elif alpha == 0:
        case = 2
        seq_b = tuple(nehari_extend_scaled([1.0, beta], order, tol=tol))
        prefactors = [
            TrigPoly.monomial(1, (k,), seq_b[k]) for k in range(order)
        ]
    else:
        case = 3
        ratio = abs(alpha) / abs(beta)
        weight = ratio / (1.0 + ratio)
        seq_a = tuple(nehari_extend_scaled([weight, alpha], order, tol=tol))
        seq_b = tuple(nehari_extend_scaled([1.0 - weight, beta], order, tol=tol))
        prefactors = [
            TrigPoly(1, {(0,): seq_a[k]}) + TrigPoly.monomial(1, (k,), seq_b[k])
            for k in range(order)
        ]
    symbols = tuple(pref * p1 for pref in prefactors)
    return SpecialCaseResult(
        symbols=symbols,
        case=case,
        certified_bound=certified,
        sup_linear=m,
        seq_a=seq_a,
        seq_b=seq_b,
    )
