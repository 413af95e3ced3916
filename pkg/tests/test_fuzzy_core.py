import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ffsolve.fuzzy_core import (
    FuzzyNumber,
    GhCase,
    GhDifferenceError,
    InvalidFuzzyNumberError,
    add,
    align,
    apply_monotone,
    from_csv,
    from_endpoints,
    gh_difference,
    hausdorff_distance,
    hukuhara_sum,
    level_grid,
    multiply,
    norm,
    resample,
    scalar_mul,
    singleton,
    to_csv,
    triangular,
    validate,
)

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)


@st.composite
def triangles(draw, levels=None):
    a, b, c = sorted(draw(st.lists(finite, min_size=3, max_size=3)))
    return triangular(a, b, c, levels)


# {{{ construction


def test_triangular_endpoints():
    u = triangular(0.0, 1.0, 1.5)
    r = level_grid()
    np.testing.assert_allclose(u.lower, r)
    np.testing.assert_allclose(u.upper, 1.5 - 0.5 * r)
    assert u.core == 1.0
    assert u.support == (0.0, 1.5)


def test_triangular_rejects_unsorted():
    with pytest.raises(InvalidFuzzyNumberError):
        triangular(1.0, 0.0, 2.0)


def test_level_grid_must_span_zero_to_one():
    with pytest.raises(ValueError):
        FuzzyNumber(np.array([0.0, 0.5]), np.zeros(2), np.zeros(2))
    with pytest.raises(ValueError):
        FuzzyNumber(np.array([0.0, 0.7, 0.5, 1.0]), np.zeros(4), np.zeros(4))


def test_validate_reports_crossing_and_nesting():
    r = level_grid(3)
    crossed = FuzzyNumber(r, np.array([0.0, 0.5, 2.0]), np.array([2.0, 1.5, 1.0]))
    report = validate(crossed)
    assert not report and report.level == 1.0

    not_nested = FuzzyNumber(r, np.array([0.0, -0.5, 0.0]), np.array([2.0, 2.0, 1.0]))
    assert not validate(not_nested)

    with pytest.raises(InvalidFuzzyNumberError):
        from_endpoints(r, crossed.lower, crossed.upper)


def test_singleton_is_crisp():
    assert singleton(3.0).is_crisp()
    assert not triangular(0, 1, 2).is_crisp()


# }}}


# {{{ arithmetic


def test_scalar_mul_negative_swaps():
    u = scalar_mul(-2.0, triangular(0.0, 1.0, 2.0))
    assert u.tri == (-4.0, -2.0, 0.0)
    np.testing.assert_allclose(u.lower, -4.0 + 2.0 * level_grid())
    assert validate(u)


def test_gh_difference_known_cases():
    u, v = triangular(1, 2, 3), triangular(0, 1, 4)
    w, case = gh_difference(u, v)
    assert case is GhCase.II
    assert w.tri == (-1.0, 1.0, 1.0)

    w, case = gh_difference(triangular(0, 2, 5), triangular(0, 1, 2))
    assert case is GhCase.I
    assert w.tri == (0.0, 1.0, 3.0)


def test_gh_difference_self_is_zero():
    u = triangular(-1, 0.5, 3)
    w, case = gh_difference(u, u)
    assert case is GhCase.I
    assert norm(w) == 0.0


def test_gh_difference_may_not_exist():
    # widths of the two numbers change in opposite directions across levels
    r = level_grid(3)
    u = FuzzyNumber(r, np.array([0.0, 0.9, 1.0]), np.array([2.0, 1.1, 1.0]))
    v = triangular(0, 1, 2, r)
    with pytest.raises(GhDifferenceError):
        gh_difference(u, v)


@given(triangles(), triangles())
def test_gh_difference_inverts_hukuhara_sum(u, v):
    try:
        w, case = gh_difference(u, v)
    except GhDifferenceError:
        # both endpoint differences move the same way, no fuzzy result
        assume(False)
    back = hukuhara_sum(v, w, case)
    assert hausdorff_distance(back, u) <= 1e-12 * (1 + norm(u) + norm(v))


@given(triangles(), triangles(), st.floats(-5, 5))
def test_addition_and_scaling_are_levelwise(u, v, k):
    s = add(u, v)
    np.testing.assert_allclose(s.lower, u.lower + v.lower, atol=1e-12)
    ku = scalar_mul(k, u)
    lo, hi = k * u.lower, k * u.upper
    np.testing.assert_allclose(ku.lower, np.minimum(lo, hi), atol=1e-12)
    np.testing.assert_allclose(ku.upper, np.maximum(lo, hi), atol=1e-12)


def test_multiply_is_interval_product():
    u, v = triangular(-1, 0, 2), triangular(1, 2, 3)
    p = multiply(u, v)
    assert p.lower[0] == -3.0 and p.upper[0] == 6.0
    assert p.lower[-1] == 0.0 and p.upper[-1] == 0.0


def test_apply_monotone_decreasing():
    u = triangular(1, 2, 4)
    inv = apply_monotone(lambda x: 1.0 / x, u)
    assert inv.lower[0] == 0.25 and inv.upper[0] == 1.0
    assert validate(inv)


def test_resample_triangular_is_exact():
    u = triangular(0, 1, 3)
    fine = resample(u, level_grid(101))
    np.testing.assert_allclose(fine.lower, triangular(0, 1, 3, 101).lower, atol=1e-15)


def test_align_builds_union_grid():
    u = triangular(0, 1, 2, 3)
    v = FuzzyNumber(np.array([0.0, 0.25, 1.0]), np.zeros(3), np.ones(3))
    a, b = align(u, v)
    np.testing.assert_array_equal(a.levels, [0.0, 0.25, 0.5, 1.0])
    np.testing.assert_allclose(a.lower, [0.0, 0.25, 0.5, 1.0])


# }}}


# {{{ metric


@settings(max_examples=300)
@given(triangles(), triangles(), triangles())
def test_hausdorff_metric_axioms(u, v, w):
    duv = hausdorff_distance(u, v)
    assert hausdorff_distance(u, u) == 0.0
    assert duv == hausdorff_distance(v, u)
    via = hausdorff_distance(u, w) + hausdorff_distance(w, v)
    assert duv <= via * (1 + 4 * np.finfo(float).eps)


@given(triangles(), triangles(), triangles())
def test_hausdorff_translation_invariant(u, v, w):
    d = hausdorff_distance(add(u, w), add(v, w))
    assert d == pytest.approx(hausdorff_distance(u, v), abs=1e-12)


def test_hausdorff_of_triangles():
    assert hausdorff_distance(triangular(0, 1, 2), triangular(0, 1, 3)) == 1.0
    assert norm(triangular(-4, 0, 1)) == 4.0


# }}}


def test_csv_round_trip():
    u = triangular(-0.5, 0.25, 1.125)
    text = to_csv(u)
    assert text.splitlines()[0] == "r,lower,upper"
    assert text.splitlines()[1] == "0.000000,-0.500000,1.125000"
    assert hausdorff_distance(from_csv(text), u) < 1e-6
