import itertools
import random

import pytest

from cfpolydisc.polyalg import NPoly, TrigPoly, evaluate
from cfpolydisc.slicing import (
    MembershipError,
    ambient_exponent,
    dslice_compare,
    dslice_key,
    dslice_sort_key,
    image_exponent,
    in_image_span,
    in_printed_span,
    inverse_reformulate,
    membership_report,
    monomial_image,
    reformulate,
    slice_decompose,
    slice_support,
    SymbolFamily,
)

from oracles import eval_direct, monomial_image_by_products, reformulate_by_ordered_tuples


def random_vanishing_poly(rng, n, d):
    terms = {}
    for alpha in itertools.product(range(d + 1), repeat=n):
        if 0 < sum(alpha) <= d:
            terms[alpha] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return NPoly(n, terms)


# ---------------------------------------------------------------------------
# monomial_image


def test_monomial_image_matches_product_bookkeeping():
    for n in range(1, 5):
        for k in range(0, 4):
            for tup in itertools.combinations_with_replacement(range(1, n + 1), k):
                assert monomial_image(tup, n) == monomial_image_by_products(tup, n)


def test_monomial_image_examples():
    assert monomial_image((1, 1, 1), 3) == (0, 0)
    assert monomial_image((2, 2), 2) == (2,)
    assert monomial_image((2, 3), 3) == (1, 2)
    assert monomial_image((), 4) == (0, 0, 0)
    assert monomial_image((3,), 3) == (1, 1)


def test_monomial_image_rejects_bad_tuples():
    with pytest.raises(ValueError):
        monomial_image((3, 2), 3)  # not sorted
    with pytest.raises(ValueError):
        monomial_image((0, 1), 2)  # below range
    with pytest.raises(ValueError):
        monomial_image((1, 4), 3)  # above range


def test_image_exponent_is_suffix_sums():
    assert image_exponent((2, 0, 1)) == (1, 1)
    assert image_exponent((5,)) == ()
    # consistency with the index-tuple route: alpha <-> sorted tuple with
    # alpha_m copies of m.
    for alpha in itertools.product(range(3), repeat=3):
        tup = tuple(
            sorted(itertools.chain.from_iterable([m + 1] * a for m, a in enumerate(alpha)))
        )
        assert image_exponent(alpha) == monomial_image(tup, 3)


# ---------------------------------------------------------------------------
# membership predicates


def test_image_span_is_bounded_chain():
    assert in_image_span((0, 1, 1), 1)
    assert not in_image_span((0, 2), 1)  # entry exceeds the level
    assert not in_image_span((1, 0), 2)  # decreasing
    assert not in_image_span((-1, 0), 2)
    assert in_image_span((), 3)


def test_printed_span_is_weaker_for_three_or_more_variables():
    # (0, 2) at level 1: sum 2 <= 2*1 passes the printed test but no sorted
    # index tuple of length 1 produces it.
    assert in_printed_span((0, 2), 1)
    assert not in_image_span((0, 2), 1)
    rep = membership_report(TrigPoly(2, {(0, 2): 1.0}), 1)
    assert rep.printed_ok and not rep.image_ok and not rep.agree
    assert rep.offending_image == ((0, 2),)
    assert rep.offending_printed == ()


def test_predicates_coincide_in_one_symbol_variable():
    for level in range(0, 5):
        for e in range(-2, 12):
            assert in_image_span((e,), level) == in_printed_span((e,), level)


def test_image_span_enumeration_matches_index_tuples():
    for n in range(2, 5):
        for k in range(0, 4):
            reachable = {
                monomial_image(t, n)
                for t in itertools.combinations_with_replacement(range(1, n + 1), k)
            }
            box = itertools.product(range(k + 1), repeat=n - 1)
            predicted = {e for e in box if in_image_span(e, k)}
            assert reachable == predicted


# ---------------------------------------------------------------------------
# reformulate / inverse_reformulate


def test_reformulate_matches_ordered_tuple_oracle():
    rng = random.Random(101)
    for n in range(1, 5):
        for d in range(1, 5):
            p = random_vanishing_poly(rng, n, d)
            fam = reformulate(p)
            assert fam.n == n and fam.d == d
            expected = reformulate_by_ordered_tuples(p.terms, n)
            for k in range(1, d + 1):
                got = fam.symbol(k).terms
                want = expected.get(k, {})
                assert set(got) == {e for e, c in want.items() if abs(c) > 0}
                for e, c in got.items():
                    assert c == pytest.approx(want[e], abs=1e-14)


def test_reformulate_quadratic_in_two_variables():
    p = NPoly(
        2,
        {
            (1, 0): 0.3,
            (0, 1): -0.2 + 0.1j,
            (2, 0): 0.5,
            (1, 1): 0.25j,
            (0, 2): -0.4,
        },
    )
    fam = reformulate(p)
    assert fam.symbol(1).terms == {(0,): 0.3, (1,): -0.2 + 0.1j}
    assert fam.symbol(2).terms == {(0,): 0.5, (1,): 0.25j, (2,): -0.4}


def test_reformulate_three_variables_anchor():
    p = NPoly(3, {(0, 1, 1): 1.0})
    fam = reformulate(p)
    assert fam.symbol(1).is_zero
    assert fam.symbol(2).terms == {(1, 2): 1.0 + 0j}


def test_reformulate_one_variable_gives_scalars():
    p = NPoly(1, {(1,): 0.5, (3,): -0.125})
    fam = reformulate(p)
    assert fam.symbol(1).terms == {(): 0.5}
    assert fam.symbol(2).is_zero
    assert fam.symbol(3).terms == {(): -0.125}


def test_reformulate_requires_vanishing_at_origin():
    with pytest.raises(ValueError):
        reformulate(NPoly(2, {(0, 0): 1.0, (1, 0): 0.5}))


def test_round_trip_many_sizes():
    rng = random.Random(202)
    for _ in range(100):
        n = rng.randint(1, 4)
        d = rng.randint(1, 4)
        p = random_vanishing_poly(rng, n, d)
        q = inverse_reformulate(reformulate(p))
        assert q.nvars == n
        assert set(q.terms) == set(p.terms)
        for a, c in p.terms.items():
            assert q.terms[a] == pytest.approx(c, abs=1e-14)


def test_ambient_exponent_formulas():
    assert ambient_exponent((1, 2), 3) == (1, 1, 1)
    assert ambient_exponent((), 4) == (4,)
    assert ambient_exponent((2,), 2) == (0, 2)
    with pytest.raises(MembershipError):
        ambient_exponent((0, 2), 1)
    with pytest.raises(MembershipError):
        ambient_exponent((2, 1), 3)


def test_inverse_reformulate_rejects_non_image_symbol():
    # Passes family validation (printed span) but has no ambient preimage.
    fam = SymbolFamily(3, (TrigPoly(2, {(0, 2): 1.0}),))
    with pytest.raises(MembershipError):
        inverse_reformulate(fam)


# ---------------------------------------------------------------------------
# SymbolFamily validation


def test_family_rejects_wrong_variable_count():
    with pytest.raises(ValueError):
        SymbolFamily(2, (TrigPoly(2, {(0, 0): 1.0}),))


def test_family_rejects_printed_span_violation():
    with pytest.raises(MembershipError):
        SymbolFamily(2, (TrigPoly(1, {(2,): 1.0}),))  # level 1 allows sum <= 1
    with pytest.raises(MembershipError):
        SymbolFamily(2, (TrigPoly(1, {(-1,): 1.0}),))


def test_family_symbol_beyond_range_is_zero():
    fam = SymbolFamily(2, (TrigPoly(1, {(0,): 1.0}),))
    assert fam.symbol(5).is_zero


# ---------------------------------------------------------------------------
# level ordering


def test_dslice_order_examples():
    assert dslice_compare((0, 1), (1, 0)) == -1
    assert dslice_compare((1, 0), (0, 1)) == 1
    assert dslice_compare((2, 3), (2, 3)) == 0
    assert dslice_compare((1, -1), (0, 1)) == -1  # level 0 before level 1


def test_dslice_sorting_window():
    pts = [(i, j) for i in range(-2, 3) for j in range(-2, 3)]
    via_key = sorted(pts, key=dslice_key)
    via_cmp = sorted(pts, key=dslice_sort_key)
    assert via_key == via_cmp
    levels = [sum(a) for a in via_key]
    assert levels == sorted(levels)


# ---------------------------------------------------------------------------
# diagonal slices


def test_slice_decompose_restriction_identity():
    rng = random.Random(303)
    phi = TrigPoly(
        2,
        {
            (i, j): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            for i in range(-2, 3)
            for j in range(-2, 3)
        },
    )
    support = slice_support(phi)
    assert min(support) >= -4 and max(support) <= 4
    for _ in range(20):
        import cmath

        z1 = cmath.exp(2j * cmath.pi * rng.random())
        lam = cmath.exp(2j * cmath.pi * rng.random())
        direct = eval_direct(phi.terms, (z1, lam * z1))
        summed = sum(
            evaluate(slice_decompose(phi, j), (lam,)) * z1**j for j in range(-4, 5)
        )
        assert abs(direct - summed) < 1e-12


def test_slice_decompose_of_symbols():
    p = NPoly(
        2,
        {(1, 0): 0.3, (0, 1): -0.2, (2, 0): 0.5, (1, 1): 0.25, (0, 2): -0.4},
    )
    fam = reformulate(p)
    # Symbols in one variable grade by the single exponent.
    p2 = fam.symbol(2)
    assert slice_decompose(p2, 0).terms == {(): 0.5 + 0j}
    assert slice_decompose(p2, 1).terms == {(): 0.25 + 0j}
    assert slice_decompose(p2, 2).terms == {(): -0.4 + 0j}
    assert slice_decompose(p2, 3).is_zero


def test_slice_decompose_requires_a_variable():
    with pytest.raises(ValueError):
        slice_decompose(TrigPoly(0, {(): 1.0}), 0)
