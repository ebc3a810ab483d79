"""Reformulation of polydisc polynomials into torus symbol families.

A degree-d polynomial p on the n-polydisc with p(0) = 0 is encoded as d
symbols p_1, ..., p_d, each a trigonometric polynomial in n-1 variables: the
homogeneous degree-k part of p contributes its Taylor coefficient at z**alpha
to symbol k at the exponent obtained from alpha by reversed suffix sums
(the bookkeeping of one shift power per tensor factor).  For n = 1 the
symbols are plain scalars (zero-variable polynomials).

The same module provides the diagonal-slice decomposition (grading a torus
symbol by total exponent sum) and the level-then-lexicographic total order on
integer exponents used to lay out operator matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key

from .polyalg import MultiIndex, NPoly, TrigPoly


class MembershipError(ValueError):
    """A symbol exponent falls outside the admissible set for its level."""


# ---------------------------------------------------------------------------
# exponent bookkeeping


def monomial_image(i_tuple, n: int) -> MultiIndex:
    """Exponent in n-1 variables produced by a sorted index tuple.

    Each index value i contributes one power to the last i-1 variables, so
    entry j of the result counts the tuple entries exceeding n-1-j.  Requires
    1 <= i_1 <= ... <= i_k <= n.
    """
    i_tuple = tuple(int(i) for i in i_tuple)
    if any(i < 1 or i > n for i in i_tuple):
        raise ValueError(f"index tuple {i_tuple} out of range 1..{n}")
    if any(a > b for a, b in zip(i_tuple, i_tuple[1:])):
        raise ValueError(f"index tuple {i_tuple} is not sorted")
    return tuple(sum(1 for i in i_tuple if i > n - 1 - j) for j in range(n - 1))


def image_exponent(alpha_ambient) -> MultiIndex:
    """Symbol exponent of an ambient monomial: reversed suffix sums of alpha."""
    alpha = tuple(alpha_ambient)
    n = len(alpha)
    return tuple(sum(alpha[n - 1 - j:]) for j in range(n - 1))


def ambient_exponent(expo: MultiIndex, level: int) -> MultiIndex:
    """Inverse of image_exponent at a given level; raises on non-image input."""
    n = len(expo) + 1
    if not in_image_span(expo, level):
        raise MembershipError(
            f"exponent {expo} is not an admissible level-{level} symbol exponent"
        )
    alpha = [0] * n
    if n == 1:
        alpha[0] = level
        return tuple(alpha)
    alpha[n - 1] = expo[0]
    for j in range(2, n):
        alpha[n - j] = expo[j - 1] - expo[j - 2]
    alpha[0] = level - expo[n - 2]
    return tuple(alpha)


def in_image_span(expo, level: int) -> bool:
    """Exponent arises from a sorted level-`level` index tuple.

    Exactly the non-decreasing exponents whose entries do not exceed level.
    """
    expo = tuple(expo)
    if any(e < 0 for e in expo):
        return False
    if any(a > b for a, b in zip(expo, expo[1:])):
        return False
    return max(expo, default=0) <= level


def in_printed_span(expo, level: int) -> bool:
    """Exponent satisfies the non-decreasing chain with total sum <= (n-1)*level.

    A strictly weaker predicate than in_image_span once there are at least two
    symbol variables; both are tracked so a disagreement is reported rather
    than silently resolved.
    """
    expo = tuple(expo)
    if any(e < 0 for e in expo):
        return False
    if any(a > b for a, b in zip(expo, expo[1:])):
        return False
    return sum(expo) <= len(expo) * level


@dataclass(frozen=True)
class MembershipReport:
    """Both admissibility predicates for one symbol at one level."""

    level: int
    image_ok: bool
    printed_ok: bool
    offending_image: tuple
    offending_printed: tuple

    @property
    def agree(self) -> bool:
        return self.image_ok == self.printed_ok


def membership_report(symbol: TrigPoly, level: int) -> MembershipReport:
    bad_image = tuple(
        sorted(a for a in symbol.terms if not in_image_span(a, level))
    )
    bad_printed = tuple(
        sorted(a for a in symbol.terms if not in_printed_span(a, level))
    )
    return MembershipReport(
        level=level,
        image_ok=not bad_image,
        printed_ok=not bad_printed,
        offending_image=bad_image,
        offending_printed=bad_printed,
    )


# ---------------------------------------------------------------------------
# symbol families


@dataclass(frozen=True)
class SymbolFamily:
    """Symbols p_1, ..., p_d of an n-variable polynomial, in n-1 torus variables."""

    n: int
    symbols: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ambient variable count must be >= 1")
        object.__setattr__(self, "symbols", tuple(self.symbols))
        for k, sym in enumerate(self.symbols, start=1):
            if not isinstance(sym, TrigPoly):
                raise TypeError("symbols must be TrigPoly instances")
            if sym.nvars != self.n - 1:
                raise ValueError(
                    f"symbol {k} has {sym.nvars} variables, expected {self.n - 1}"
                )
            report = membership_report(sym, k)
            if not report.printed_ok:
                raise MembershipError(
                    f"symbol {k} contains inadmissible exponents "
                    f"{report.offending_printed}"
                )

    @property
    def d(self) -> int:
        return len(self.symbols)

    def symbol(self, k: int) -> TrigPoly:
        """Symbol at level k (1-based); zero beyond the stored range."""
        if 1 <= k <= len(self.symbols):
            return self.symbols[k - 1]
        return TrigPoly.zero(self.n - 1)

    def membership_reports(self) -> list[MembershipReport]:
        return [membership_report(s, k) for k, s in enumerate(self.symbols, start=1)]


def reformulate(p: NPoly) -> SymbolFamily:
    """Symbol family of an analytic polynomial vanishing at the origin."""
    if not isinstance(p, NPoly):
        raise TypeError("reformulate expects an analytic polynomial")
    if not p.vanishes_at_origin():
        raise ValueError("the polynomial must vanish at the origin")
    n = p.nvars
    d = p.degree()
    buckets: list[dict] = [dict() for _ in range(d)]
    for alpha, c in p.terms.items():
        k = sum(alpha)
        expo = image_exponent(alpha)
        bucket = buckets[k - 1]
        bucket[expo] = bucket.get(expo, 0j) + c
    return SymbolFamily(n, tuple(TrigPoly(n - 1, b) for b in buckets))


def inverse_reformulate(fam: SymbolFamily) -> NPoly:
    """Reassemble the polynomial from its symbols; rejects non-image exponents."""
    terms: dict = {}
    for k, sym in enumerate(fam.symbols, start=1):
        for expo, c in sym.terms.items():
            alpha = ambient_exponent(expo, k)  # raises MembershipError if invalid
            terms[alpha] = terms.get(alpha, 0j) + c
    return NPoly(fam.n, terms)


# ---------------------------------------------------------------------------
# diagonal slices and the level ordering


def dslice_key(alpha):
    """Sort key realizing the level-then-lexicographic total order."""
    alpha = tuple(alpha)
    return (sum(alpha), alpha)


def dslice_compare(a, b) -> int:
    """Three-way comparison of integer exponents: by level, then lexicographic."""
    ka, kb = dslice_key(a), dslice_key(b)
    return (ka > kb) - (ka < kb)


dslice_sort_key = cmp_to_key(dslice_compare)


def slice_decompose(phi: TrigPoly, j: int) -> TrigPoly:
    """Slice of total exponent sum j, as a symbol in one variable fewer.

    The term at exponent m contributes its coefficient at (m_2, ..., m_n);
    restricting to the diagonal z = (z_1, c_1 z_1, ..., c_{n-1} z_1) turns phi
    into sum_j slice_j(c) z_1**j.
    """
    if phi.nvars < 1:
        raise ValueError("slice_decompose needs at least one variable")
    terms = {m[1:]: c for m, c in phi.terms.items() if sum(m) == j}
    return TrigPoly(phi.nvars - 1, terms)


def slice_support(phi: TrigPoly) -> list[int]:
    """Sorted list of slice indices with a nonzero slice."""
    return sorted({sum(m) for m in phi.terms})
