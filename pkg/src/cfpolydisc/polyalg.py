"""Sparse polynomial / trigonometric-polynomial arithmetic on the torus.

Coefficients are complex doubles stored sparsely as {exponent tuple: coeff}.
Two flavours share one implementation:

  * ``TrigPoly`` — Laurent polynomials on the torus T^m (integer exponents of
    either sign).  ``m = 0`` is allowed and degenerates to a single complex
    scalar with the empty exponent ``()``.
  * ``NPoly``    — analytic polynomials on the polydisc (exponents >= 0,
    at least one variable).

Suprema over the torus are computed on uniform grids synthesized by FFT; a
grid value is always reported together with its refinement certificate (see
``GridValue``), and is a lower bound of the true supremum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

MultiIndex = tuple[int, ...]

#: default relative threshold below which coefficients count as noise
PRUNE_REL_DEFAULT = 1e-12

_SCALARS = (int, float, complex, np.integer, np.floating, np.complexfloating)


class GridError(ValueError):
    """A torus grid is too coarse for the requested operation."""


class EvaluationError(ValueError):
    """A polynomial cannot be evaluated at the requested point."""


def _clean_terms(nvars: int, terms: Mapping, allow_negative: bool) -> dict:
    out: dict[MultiIndex, complex] = {}
    for alpha, c in terms.items():
        key = tuple(int(a) for a in alpha)
        if len(key) != nvars:
            raise ValueError(f"exponent {key} has length {len(key)}, expected {nvars}")
        if not allow_negative and any(a < 0 for a in key):
            raise ValueError(f"negative exponent {key} not allowed here")
        val = complex(c)
        if val != 0:
            out[key] = out.get(key, 0j) + val
    return {k: v for k, v in out.items() if v != 0}


@dataclass(frozen=True)
class TrigPoly:
    """Laurent polynomial sum_alpha c_alpha z**alpha on the torus T^nvars."""

    nvars: int
    terms: dict = field(default_factory=dict)

    _allow_negative = True

    def __post_init__(self):
        if self.nvars < 0:
            raise ValueError("nvars must be >= 0")
        object.__setattr__(
            self, "terms", _clean_terms(self.nvars, self.terms, self._allow_negative)
        )

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int):
        return cls(nvars, {})

    @classmethod
    def monomial(cls, nvars: int, alpha, coeff: complex = 1.0):
        return cls(nvars, {tuple(alpha): coeff})

    @classmethod
    def constant(cls, nvars: int, value: complex):
        return cls(nvars, {(0,) * nvars: value})

    # -- basic queries -----------------------------------------------------
    def coeff(self, alpha) -> complex:
        return self.terms.get(tuple(alpha), 0j)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def bandwidth(self) -> int:
        """Largest |exponent entry| over all terms (0 for constants/zero)."""
        if not self.terms:
            return 0
        return max((max(map(abs, a)) if a else 0) for a in self.terms)

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    # -- arithmetic --------------------------------------------------------
    def _wrap(self, other, terms) -> "TrigPoly":
        cls = type(self)
        if isinstance(other, TrigPoly) and not isinstance(other, type(self)):
            cls = TrigPoly
        return cls(self.nvars, terms)

    def _check_compatible(self, other):
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = type(self).constant(self.nvars, other)
        self._check_compatible(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0j) + c
        return self._wrap(other, out)

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            other = type(self).constant(self.nvars, other)
        return self.__add__(other * (-1.0))

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return type(self)(self.nvars, {a: c * other for a, c in self.terms.items()})
        self._check_compatible(other)
        out: dict[MultiIndex, complex] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, 0j) + ca * cb
        return self._wrap(other, out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def conj(self):
        """Complex conjugate on the torus: exponents negate, coefficients conjugate."""
        return TrigPoly(
            self.nvars, {tuple(-x for x in a): c.conjugate() for a, c in self.terms.items()}
        )

    def prune(self, rel_tol: float = PRUNE_REL_DEFAULT):
        """Drop coefficients below rel_tol times the largest modulus."""
        top = self.max_coeff()
        cut = rel_tol * top
        return type(self)(self.nvars, {a: c for a, c in self.terms.items() if abs(c) > cut})


@dataclass(frozen=True)
class NPoly(TrigPoly):
    """Analytic polynomial on the polydisc: non-negative exponents, nvars >= 1."""

    _allow_negative = False

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("NPoly needs at least one variable")
        super().__post_init__()

    def degree(self) -> int:
        """Total degree: max over terms of the exponent sum (0 for the zero polynomial)."""
        return max((sum(a) for a in self.terms), default=0)

    def vanishes_at_origin(self) -> bool:
        return (0,) * self.nvars not in self.terms

    def as_trig(self) -> TrigPoly:
        return TrigPoly(self.nvars, dict(self.terms))

    def homogeneous_part(self, k: int) -> "NPoly":
        return NPoly(self.nvars, {a: c for a, c in self.terms.items() if sum(a) == k})


def evaluate(q: TrigPoly, point) -> complex:
    """Evaluate q at a point of C^nvars (term-by-term).

    Raises EvaluationError when a zero coordinate meets a negative exponent.
    """
    point = tuple(complex(z) for z in point)
    if len(point) != q.nvars:
        raise EvaluationError(f"point has {len(point)} coordinates, expected {q.nvars}")
    total = 0j
    for alpha, c in q.terms.items():
        val = complex(c)
        for e, z in zip(alpha, point):
            if e < 0 and z == 0:
                raise EvaluationError("negative exponent at a zero coordinate")
            if e:
                val *= z ** e
        total += val
    return total


# ---------------------------------------------------------------------------
# uniform grids on the torus


@dataclass(frozen=True)
class TorusGrid:
    """Uniform evaluation grid policy: base resolution plus refinement rule.

    points_per_axis is the base number of samples per torus dimension (at
    least 64; the effective resolution is raised automatically when a symbol's
    bandwidth needs it, keeping at least 8 samples per oscillation).  A sweep
    makes a second pass at refinement_factor times the resolution, and a third
    when the first two disagree by more than rel_tol relatively.
    """

    points_per_axis: int = 128
    refinement_factor: int = 2
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.points_per_axis < 64:
            raise ValueError("points_per_axis must be at least 64")
        if self.refinement_factor < 2:
            raise ValueError("refinement_factor must be at least 2")
        if not (0 < self.rel_tol < 1):
            raise ValueError("rel_tol must be in (0, 1)")

    def base_resolution(self, bandwidth: int = 0) -> int:
        """Base sample count per axis honouring the 8-samples-per-band floor."""
        n = self.points_per_axis
        while n < 8 * bandwidth:
            n *= 2
        return n


class GridValue(float):
    """A float computed by grid sweeps, carrying its refinement certificate.

    ``converged`` records whether the last two passes agreed to the grid's
    rel_tol; ``points`` is the per-axis resolution of the reported pass.
    Grid suprema are lower bounds of the true supremum; grid minima are upper
    bounds of the true minimum.
    """

    converged: bool
    points: int

    def __new__(cls, value: float, converged: bool, points: int):
        obj = super().__new__(cls, float(value))
        obj.converged = bool(converged)
        obj.points = int(points)
        return obj

    def __repr__(self):
        return (
            f"GridValue({float(self):.17g}, converged={self.converged}, "
            f"points={self.points})"
        )


def grid_sweep(
    grid: TorusGrid,
    values_fn: Callable[[int], np.ndarray],
    bandwidth: int = 0,
    minimize: bool = False,
) -> GridValue:
    """Two-pass (three on disagreement) reduction of values_fn over grid sizes.

    values_fn(n) must return the per-point real values for an n-per-axis grid.
    """
    reduce_fn = np.min if minimize else np.max
    n1 = grid.base_resolution(bandwidth)
    n2 = n1 * grid.refinement_factor
    v1 = float(reduce_fn(values_fn(n1)))
    v2 = float(reduce_fn(values_fn(n2)))
    if abs(v2 - v1) <= grid.rel_tol * max(abs(v2), abs(v1), 1e-300):
        return GridValue(v2, converged=True, points=n2)
    n3 = n2 * grid.refinement_factor
    v3 = float(reduce_fn(values_fn(n3)))
    converged = abs(v3 - v2) <= grid.rel_tol * max(abs(v3), abs(v2), 1e-300)
    return GridValue(v3, converged=converged, points=n3)


def grid_values(q: TrigPoly, n_points: int) -> np.ndarray:
    """Values of q on the uniform n_points**nvars torus grid (FFT synthesis).

    Grid node j has coordinates exp(2*pi*1j*j/n_points).  The result has shape
    (n_points,) * nvars; for nvars == 0 it is a 0-d array.
    """
    if q.nvars == 0:
        return np.asarray(q.coeff(()), dtype=complex)
    if n_points < 2 * q.bandwidth() + 1:
        raise GridError(
            f"{n_points} points per axis cannot resolve bandwidth {q.bandwidth()}"
        )
    spec = np.zeros((n_points,) * q.nvars, dtype=complex)
    for alpha, c in q.terms.items():
        spec[tuple(a % n_points for a in alpha)] += c
    return np.fft.ifftn(spec) * n_points ** q.nvars


def sup_norm(q: TrigPoly, grid: TorusGrid) -> GridValue:
    """Supremum of |q| over the torus, as a certified grid lower bound."""
    return grid_sweep(grid, lambda n: np.abs(grid_values(q, n)), q.bandwidth())


def recover_coeffs(samples: np.ndarray, max_band: int,
                   threshold: float = PRUNE_REL_DEFAULT) -> TrigPoly:
    """Trigonometric coefficients of uniformly sampled torus data (inverse DFT).

    samples must be a (n,)*m array of values on the uniform grid used by
    ``grid_values``.  Coefficients are returned for |exponent entry| <= max_band
    only, and entries below threshold times the largest recovered modulus are
    dropped.  Exact (to roundoff) whenever the sampled function is a
    trigonometric polynomial within the band.
    """
    samples = np.asarray(samples, dtype=complex)
    nvars = samples.ndim
    if nvars == 0:
        return TrigPoly(0, {(): complex(samples)})
    n = samples.shape[0]
    if any(s != n for s in samples.shape):
        raise GridError("samples must be sampled on a square grid")
    if max_band < 0:
        raise ValueError("max_band must be >= 0")
    if n < 2 * max_band + 1:
        raise GridError(
            f"grid of {n} points per axis cannot recover band {max_band}"
        )
    spec = np.fft.fftn(samples) / samples.size
    top = float(np.max(np.abs(spec))) if spec.size else 0.0
    cut = threshold * top
    terms: dict[MultiIndex, complex] = {}
    for idx in np.argwhere(np.abs(spec) > cut):
        expo = tuple(int(i) if i <= n // 2 - (1 - n % 2) else int(i) - n for i in idx)
        if all(abs(e) <= max_band for e in expo):
            terms[expo] = complex(spec[tuple(idx)])
    return TrigPoly(nvars, terms)
