"""Self-test suite: the deliverable's verifiable claims, each with a runtime
budget.

Each criterion function draws its own seeded random data (offset by the run
seed), computes the relevant quantities through the public entry points, and
returns a CriterionResult whose `passed` covers both the numeric checks and
the time budget.  `run_all` executes all ten in order.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass

import numpy as np

from .cfsolver import (
    CFInstance,
    FAILED_DEGREE,
    cf_extend,
    cf_one_var,
    necessary_condition,
    special_case_extend,
)
from .koranyi import (
    cayley_forward,
    cayley_inverse,
    kp_positive,
    kp_slice_symbols,
    kp_test_map,
    schur_identity_check,
)
from .nehari import hankel_build, hankel_norm
from .opnorm import (
    full_function_norm,
    laurent_section_norm,
    op_norm,
    toeplitz_norm,
)
from .polyalg import NPoly, TorusGrid, TrigPoly, sup_norm
from .slicing import inverse_reformulate, reformulate, slice_support

ROOT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    seconds: float
    budget_seconds: float
    details: dict


def _finish(name: str, budget: float, start: float, checks_ok: bool,
            details: dict) -> CriterionResult:
    elapsed = time.perf_counter() - start
    within = elapsed <= budget
    details = dict(details)
    details["within_time_budget"] = within
    return CriterionResult(
        name=name,
        passed=bool(checks_ok and within),
        seconds=elapsed,
        budget_seconds=budget,
        details=details,
    )


def _triangular(seq) -> np.ndarray:
    m = len(seq)
    out = np.zeros((m + 1, m + 1), dtype=complex)
    for r in range(m + 1):
        for c in range(r + 1, m + 1):
            out[r, c] = seq[c - r - 1]
    return out


def _random_vanishing(rng, nvars: int, degree: int, scale: float = 0.5) -> NPoly:
    terms = {}
    for alpha in itertools.product(range(degree + 1), repeat=nvars):
        if 0 < sum(alpha) <= degree:
            terms[alpha] = scale * complex(rng.uniform(-1, 1),
                                           rng.uniform(-1, 1))
    return NPoly(nvars, terms)


# ---------------------------------------------------------------------------
# 1: the boundary instance whose third step is inadmissible


def criterion_1(config) -> CriterionResult:
    start = time.perf_counter()
    grid = TorusGrid(points_per_axis=config.grid)
    p = NPoly(2, {(1, 0): ROOT_HALF, (0, 2): 0.5})
    inst = CFInstance(p)

    report = necessary_condition(inst, grid, config.tol)
    margin_ok = abs(report.margin) <= 1e-8

    run = cf_extend(inst, 5, grid, config.tol)
    failing = run.steps[-1] if run.steps else None
    status_ok = (run.status == FAILED_DEGREE and failing is not None
                 and failing.order == 3 and run.definitive)

    coeff_err = math.inf
    low = math.inf
    if failing is not None:
        cand = failing.candidate
        coeff_err = abs(cand.coeff((4,)) - (-0.5 * ROOT_HALF))
        low = max(abs(cand.coeff((e,))) for e in range(4))
    checks = margin_ok and status_ok and coeff_err <= 1e-8 and low <= 1e-8
    return _finish("criterion_1", 1.0, start, checks, {
        "margin": report.margin,
        "status": run.status,
        "failing_order": None if failing is None else failing.order,
        "definitive": run.definitive,
        "corner_coefficient_error": coeff_err,
        "max_low_order_coefficient": low,
    })


# ---------------------------------------------------------------------------
# 2: one-variable solvability inside the ball, rejection outside


def criterion_2(config) -> CriterionResult:
    start = time.perf_counter()
    rng = random.Random(2000 + config.seed)
    grid = TorusGrid(points_per_axis=config.grid)

    worst_partial = 0.0
    extended = 0
    for _ in range(200):
        a = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(2)]
        nu = op_norm(_triangular(a))
        target = rng.uniform(0.1, 1.0)
        a = [v * target / nu for v in a]
        seq = cf_one_var(a, 20, tol=config.tol)
        for k in range(1, 21):
            worst_partial = max(worst_partial, op_norm(_triangular(seq[:k])))
        extended += 1

    rejected = 0
    for _ in range(50):
        a = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(2)]
        nu = op_norm(_triangular(a))
        a = [v * (1.0 + 1e-3) / nu for v in a]
        inst = CFInstance(NPoly(1, {(1,): a[0], (2,): a[1]}))
        if not necessary_condition(inst, grid, config.tol).ok:
            rejected += 1

    checks = (extended == 200 and worst_partial <= 1.0 + 1e-8
              and rejected == 50)
    return _finish("criterion_2", 10.0, start, checks, {
        "extended": extended,
        "worst_partial_norm": worst_partial,
        "rejected": rejected,
    })


# ---------------------------------------------------------------------------
# 3: function norm against the operator it multiplies by


def criterion_3(config) -> CriterionResult:
    start = time.perf_counter()
    rng = random.Random(3000 + config.seed)
    grid = TorusGrid(points_per_axis=256)

    worst_rel = 0.0
    compression_ok = True
    for _ in range(50):
        p = _random_vanishing(rng, 2, 3)
        full = float(full_function_norm(p.as_trig(), grid))
        window = 8 * p.degree()
        section = float(laurent_section_norm(p.as_trig(), window, grid))
        worst_rel = max(worst_rel, abs(full - section) / full)
        finite = float(toeplitz_norm(reformulate(p).symbols, grid))
        if finite > full + 1e-6:
            compression_ok = False
    checks = worst_rel <= 0.01 and compression_ok
    return _finish("criterion_3", 30.0, start, checks, {
        "worst_relative_gap": worst_rel,
        "finite_section_below_full": compression_ok,
    })


# ---------------------------------------------------------------------------
# 4: the finite matrix identity at machine precision


def criterion_4(config) -> CriterionResult:
    start = time.perf_counter()
    rng = random.Random(4000 + config.seed)
    worst_ratio = 0.0
    for _ in range(100):
        n = rng.randint(1, 8)
        seq = [complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
               for _ in range(n)]
        top = max(abs(v) for v in seq)
        bound = 1e-10 * (1.0 + top) ** n
        worst_ratio = max(worst_ratio, schur_identity_check(seq) / bound)
    checks = worst_ratio <= 1.0
    return _finish("criterion_4", 5.0, start, checks, {
        "worst_residual_over_bound": worst_ratio,
    })


# ---------------------------------------------------------------------------
# 5: positivity and contractivity flip at the same scale


def _positivity_flip(g: NPoly, depth: int, grid: TorusGrid, lo: float,
                     hi: float, tol: float) -> float:
    def positive(scale: float) -> bool:
        c = cayley_forward(g * scale, depth)
        return kp_positive(c, depth, grid, tol).ok

    if not positive(lo) or positive(hi):
        raise ArithmeticError("flip bracket failed")
    for _ in range(12):
        mid = 0.5 * (lo + hi)
        if positive(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def criterion_5(config) -> CriterionResult:
    start = time.perf_counter()
    rng = random.Random(5000 + config.seed)
    grid = TorusGrid(points_per_axis=128)
    depth = 6

    worst_gap = 0.0
    families = 0
    for i in range(30):
        nvars = 1 if i % 2 == 0 else 2
        g = _random_vanishing(rng, nvars, 3 if nvars == 2 else depth)
        # normalize so the contractivity flip sits exactly at scale 1
        g = g * (1.0 / float(toeplitz_norm(kp_slice_symbols(g, depth), grid)))
        flip = _positivity_flip(g, depth, grid, 0.9, 1.1, config.tol)
        worst_gap = max(worst_gap, abs(flip - 1.0))
        families += 1
    checks = families == 30 and worst_gap <= 1e-3
    return _finish("criterion_5", 60.0, start, checks, {
        "families": families,
        "worst_flip_gap": worst_gap,
    })


# ---------------------------------------------------------------------------
# 6: Hankel norm against a convex-minimization distance oracle


def _analytic_distance_socp(phi: TrigPoly, correction_degree: int,
                            grid_pts: int = 512) -> float:
    import cvxpy as cp

    z = np.exp(2j * np.pi * np.arange(grid_pts) / grid_pts)
    vals = np.zeros(grid_pts, dtype=complex)
    for e, c in phi.terms.items():
        vals += complex(c) * z ** e[0]
    powers = np.stack([z ** k for k in range(correction_degree + 1)], axis=1)
    g = cp.Variable(correction_degree + 1, complex=True)
    t = cp.Variable(nonneg=True)
    prob = cp.Problem(cp.Minimize(t), [cp.abs(vals - powers @ g) <= t])
    prob.solve()
    if prob.status not in ("optimal", "optimal_inaccurate"):
        raise RuntimeError(f"oracle solve failed: {prob.status}")
    return float(t.value)


def criterion_6(config) -> CriterionResult:
    start = time.perf_counter()
    try:
        import cvxpy  # noqa: F401
    except ImportError:
        return _finish("criterion_6", 60.0, start, False,
                       {"error": "cvxpy is not installed"})
    rng = random.Random(6000 + config.seed)
    grid = TorusGrid(points_per_axis=config.grid)

    worst_rel = 0.0
    for _ in range(50):
        m = rng.randint(1, 4)
        phi = TrigPoly(1, {
            (-k,): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            for k in range(1, m + 1)
        })
        got = float(hankel_norm(phi, grid))
        want = _analytic_distance_socp(phi, 2 * m)
        worst_rel = max(worst_rel, abs(got - want) / max(want, 1e-12))

    invariance_ok = True
    for _ in range(10):
        phi = TrigPoly(1, {
            (-k,): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            for k in range(1, 4)
        })
        analytic = TrigPoly(1, {
            (k,): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            for k in range(0, 4)
        })
        a = hankel_build(phi, 3)
        b = hankel_build(phi + analytic, 3)
        same = all(
            a[i][j].terms == b[i][j].terms
            for i in range(3) for j in range(3)
        )
        invariance_ok = invariance_ok and same

    checks = worst_rel <= 0.02 and invariance_ok
    return _finish("criterion_6", 60.0, start, checks, {
        "worst_relative_error": worst_rel,
        "analytic_invariance_exact": invariance_ok,
    })


# ---------------------------------------------------------------------------
# 7: multiplication-operator sections converge to the sup norm


def criterion_7(config) -> CriterionResult:
    start = time.perf_counter()
    rng = random.Random(7000 + config.seed)
    grid = TorusGrid(points_per_axis=config.grid)

    worst_rel = 0.0
    for _ in range(30):
        terms = {}
        for a1 in range(-3, 4):
            for a2 in range(-3, 4):
                if rng.random() < 0.35:
                    terms[(a1, a2)] = complex(rng.uniform(-1, 1),
                                              rng.uniform(-1, 1))
        if not terms:
            terms[(1, 0)] = 1.0
        phi = TrigPoly(2, terms)
        slice_band = max(abs(j) for j in slice_support(phi))
        window = 8 * max(slice_band, 1)
        full = float(sup_norm(phi, grid))
        section = float(laurent_section_norm(phi, window, grid))
        worst_rel = max(worst_rel, abs(full - section) / full)
    checks = worst_rel <= 0.01
    return _finish("criterion_7", 20.0, start, checks, {
        "worst_relative_gap": worst_rel,
    })


# ---------------------------------------------------------------------------
# 8: closed-form product extensions stay contractive through order 12


def criterion_8(config) -> CriterionResult:
    start = time.perf_counter()
    rng = random.Random(8000 + config.seed)
    grid = TorusGrid(points_per_axis=config.grid)

    worst = 0.0
    built = 0
    for i in range(20):
        s = rng.uniform(0.2, 1.5)
        split = rng.uniform(0.1, 0.9)
        pa, pb = rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)
        if i % 3 == 0:
            alpha, beta = complex(s * math.cos(pa), s * math.sin(pa)), 0j
        elif i % 3 == 1:
            alpha, beta = 0j, complex(s * math.cos(pb), s * math.sin(pb))
        else:
            alpha = s * split * complex(math.cos(pa), math.sin(pa))
            beta = s * (1 - split) * complex(math.cos(pb), math.sin(pb))
        # aligned: arg(gamma) - arg(delta) = arg(alpha) - arg(beta)
        m_cap = (-s + math.sqrt(s * s + 4.0)) / 2.0
        m = rng.uniform(0.3, 0.999) * m_cap
        gsplit = rng.uniform(0.1, 0.9)
        pg = rng.uniform(0, 2 * math.pi)
        rel = (pa - pb) if (alpha and beta) else rng.uniform(0, 2 * math.pi)
        gamma = m * gsplit * complex(math.cos(pg), math.sin(pg))
        delta = m * (1 - gsplit) * complex(math.cos(pg - rel),
                                           math.sin(pg - rel))
        result = special_case_extend(alpha, beta, gamma, delta, order=12,
                                     grid=grid, tol=config.tol)
        built += 1
        for k in range(1, 13):
            worst = max(worst,
                        float(toeplitz_norm(result.symbols[:k], grid)))
    checks = built == 20 and worst <= 1.0 + 1e-6
    return _finish("criterion_8", 30.0, start, checks, {
        "parameter_sets": built,
        "worst_partial_norm": worst,
    })


# ---------------------------------------------------------------------------
# 9: both reformulation round trips are exact


def criterion_9(config) -> CriterionResult:
    start = time.perf_counter()
    rng = random.Random(9000 + config.seed)

    worst_reform = 0.0
    for _ in range(100):
        n = rng.randint(1, 4)
        p = _random_vanishing(rng, n, rng.randint(1, 4), scale=1.0)
        if p.is_zero:
            p = NPoly(n, {(1,) + (0,) * (n - 1): 1.0})
        q = inverse_reformulate(reformulate(p))
        diff = q - p
        worst_reform = max(worst_reform, diff.max_coeff())

    worst_cayley = 0.0
    for _ in range(100):
        n = rng.randint(1, 3)
        a = _random_vanishing(rng, n, rng.randint(1, 6))
        back = cayley_inverse(cayley_forward(a, 6), 6)
        worst_cayley = max(worst_cayley, (back - a).max_coeff())
    checks = worst_reform <= 1e-12 and worst_cayley <= 1e-12
    return _finish("criterion_9", 10.0, start, checks, {
        "worst_reformulation_error": worst_reform,
        "worst_transform_error": worst_cayley,
    })


# ---------------------------------------------------------------------------
# 10: every strict self-map of the disc certifies positive


def criterion_10(config) -> CriterionResult:
    start = time.perf_counter()
    rng = random.Random(10_000 + config.seed)
    grid = TorusGrid(points_per_axis=config.grid)

    positive = 0
    worst_eig = math.inf
    for i in range(20):
        nvars = 1 if i % 2 == 0 else 2
        g = _random_vanishing(rng, nvars, 3)
        top = float(sup_norm(g.as_trig(), grid))
        g = g * (rng.uniform(0.5, 1.0) * 0.9 / top)
        verdict = kp_test_map(g, 8, grid, config.tol)
        if verdict.positive:
            positive += 1
        worst_eig = min(worst_eig, float(verdict.min_eig))
    checks = positive == 20
    return _finish("criterion_10", 30.0, start, checks, {
        "positive": positive,
        "worst_min_eigenvalue": worst_eig,
    })


# ---------------------------------------------------------------------------


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
)


def run_all(config, progress=None) -> list:
    results = []
    for index, fn in enumerate(CRITERIA, start=1):
        begin = time.perf_counter()
        try:
            result = fn(config)
        except Exception as exc:  # a crashed criterion is a failed criterion
            result = CriterionResult(
                name=f"criterion_{index}",
                passed=False,
                seconds=time.perf_counter() - begin,
                budget_seconds=0.0,
                details={"error": f"{type(exc).__name__}: {exc}"},
            )
        results.append(result)
        if progress is not None:
            verdict = "PASS" if result.passed else "FAIL"
            progress.write(
                f"{result.name}: {verdict} "
                f"({result.seconds:.2f}s / budget {result.budget_seconds:g}s)\n"
            )
    return results
