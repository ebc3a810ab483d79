"""End-to-end acceptance checks, one test per claim.

Each test runs a single criterion from cfpolydisc.acceptance at its stated
tolerance and runtime budget; `pytest -v` therefore prints one pass/fail line
per criterion.
"""

from cfpolydisc import acceptance
from cfpolydisc.cli import RunConfig

CONFIG = RunConfig()


def _check(result):
    assert result.passed, (
        f"{result.name} failed in {result.seconds:.2f}s "
        f"(budget {result.budget_seconds:g}s): {result.details}"
    )


def test_criterion_01_boundary_counterexample():
    _check(acceptance.criterion_1(CONFIG))


def test_criterion_02_one_variable_extension_and_rejection():
    _check(acceptance.criterion_2(CONFIG))


def test_criterion_03_function_norm_matches_operator_norm():
    _check(acceptance.criterion_3(CONFIG))


def test_criterion_04_matrix_identity_residual():
    _check(acceptance.criterion_4(CONFIG))


def test_criterion_05_positivity_contractivity_flip():
    _check(acceptance.criterion_5(CONFIG))


def test_criterion_06_hankel_norm_against_convex_oracle():
    _check(acceptance.criterion_6(CONFIG))


def test_criterion_07_section_norm_matches_sup():
    _check(acceptance.criterion_7(CONFIG))


def test_criterion_08_product_extension_contractive():
    _check(acceptance.criterion_8(CONFIG))


def test_criterion_09_round_trips_exact():
    _check(acceptance.criterion_9(CONFIG))


def test_criterion_10_disc_self_maps_positive():
    _check(acceptance.criterion_10(CONFIG))
