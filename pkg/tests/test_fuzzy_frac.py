import math

import numpy as np
import pytest

from ffsolve import problems
from ffsolve.frac_calc import CrispFunction, QuadratureSpec, mittag_leffler
from ffsolve.fuzzy_core import GhCase, hausdorff_distance, scalar_mul, triangular
from ffsolve.fuzzy_frac import (
    ClassificationError,
    ConstantFunction,
    DiffPlan,
    EndpointFunction,
    ExpansionInvalidError,
    ProductFunction,
    SampledFunction,
    Segment,
    SwitchType,
    WrongCaseError,
    classify_differentiability,
    fuzzy_caputo_gh,
    fuzzy_rl_integral,
    taylor_partial_sum,
    taylor_remainder,
)

U = triangular(0.0, 1.0, 2.0)


def ml_function(alpha, sign=1.0):
    return CrispFunction(lambda t: sign * mittag_leffler(alpha, -np.asarray(t) ** alpha))


# {{{ functions


def test_product_function_endpoints_sorted():
    F = ProductFunction(U, CrispFunction(lambda t: np.cos(t)))
    y = F(math.pi)
    assert y.lower[0] == pytest.approx(-2.0)
    assert y.upper[0] == pytest.approx(0.0)


def test_endpoint_function_matches_product():
    F = EndpointFunction(lambda t, r: t * r, lambda t, r: t * (2 - r))
    G = ProductFunction(U, CrispFunction(lambda t: t))
    assert hausdorff_distance(F(0.7), G(0.7)) < 1e-15


def test_sampled_function_interpolates_and_guards_range():
    F = SampledFunction.from_numbers([0.0, 1.0], [triangular(0, 0, 0), U])
    assert hausdorff_distance(F(0.5), scalar_mul(0.5, U)) < 1e-15
    with pytest.raises(ValueError):
        F(1.5)


def test_sampled_caputo_is_exact_on_piecewise_linear():
    alpha = 0.4
    ts = np.linspace(0, 1, 11)
    F = SampledFunction.from_numbers(ts, [scalar_mul(t, U) for t in ts])
    lo, hi = F.caputo_endpoints(0.0, 1.0, alpha)
    d = 1.0 / math.gamma(2 - alpha)
    np.testing.assert_allclose(hi, d * U.upper, rtol=1e-12)


def test_fuzzy_rl_integral_of_constant():
    value = fuzzy_rl_integral(ConstantFunction(U), 0.0, 1.0, 0.5)
    assert hausdorff_distance(value, scalar_mul(2 / math.sqrt(math.pi), U)) < 1e-10


# }}}


# {{{ gH derivatives


@pytest.mark.parametrize("alpha", [0.3, 0.6, 0.9])
def test_caputo_of_constant_forcing_solution(alpha):
    p = problems.constant_forcing(alpha)
    d = fuzzy_caputo_gh(p.exact, 0.0, 0.6, alpha, GhCase.I)
    # ten times the default quadrature tolerance
    assert hausdorff_distance(d, scalar_mul(math.gamma(alpha + 1), triangular(0, 1, 1.5))) < 1e-7


def test_caputo_of_decay_solution_is_case_ii():
    alpha, t = 0.6, 0.5
    F = ProductFunction(U, ml_function(alpha))
    d = fuzzy_caputo_gh(F, 0.0, t, alpha, GhCase.II)
    # the derivative is -E(-t^alpha) (0, 1, 2)
    E = mittag_leffler(alpha, -(t**alpha))
    assert hausdorff_distance(d, scalar_mul(-E, U)) < 1e-6

    with pytest.raises(WrongCaseError):
        fuzzy_caputo_gh(F, 0.0, t, alpha, GhCase.I)


def test_product_rule_matches_generic_quadrature():
    alpha = 0.7
    F = ProductFunction(U, CrispFunction(lambda t: np.cos(t), lambda t: -np.sin(t)))
    lo, hi = F.caputo_endpoints(0.0, 1.2, alpha)
    glo, ghi = EndpointFunction(
        lambda t, r: np.cos(t) * r, lambda t, r: np.cos(t) * (2 - r)
    ).caputo_endpoints(0.0, 1.2, alpha)
    # cos is positive on [0, 1.2], so the product rule uses the same ordering
    np.testing.assert_allclose(lo, glo, atol=1e-7)
    np.testing.assert_allclose(hi, ghi, atol=1e-7)


# }}}


# {{{ plans and classification


def test_plan_validation():
    with pytest.raises(ClassificationError):
        DiffPlan((Segment(0, 1, GhCase.I), Segment(1, 2, GhCase.I)))
    with pytest.raises(ClassificationError):
        DiffPlan((Segment(0, 1, GhCase.I), Segment(1.5, 2, GhCase.II)))


def test_plan_case_at_switch_belongs_to_later_segment():
    plan = DiffPlan.from_points(0.0, 2.0, GhCase.I, [0.5, 1.5])
    assert [s.case for s in plan.segments] == [GhCase.I, GhCase.II, GhCase.I]
    assert plan.case_at(0.49) is GhCase.I
    assert plan.case_at(0.5) is GhCase.II
    assert plan.case_at(1.5) is GhCase.I
    assert [p.kind for p in plan.switching_points] == [SwitchType.I, SwitchType.II]


def test_classify_nonlinear_solution():
    alpha = 0.9
    p = problems.nonlinear(alpha)
    plan = classify_differentiability(p.exact, 0.0, (0.0, 1.0), alpha, samples=50)
    (point,) = plan.switching_points
    assert point.kind is SwitchType.I
    assert point.t == pytest.approx(0.7381, abs=5e-4)


def test_classify_cosine_finds_zero_crossing_too():
    p = problems.cosine(0.8)
    plan = classify_differentiability(p.exact, 0.0, (1.0, 2.0), 0.8, samples=50)
    points = plan.switching_points
    assert [x.kind for x in points] == [SwitchType.I, SwitchType.II]
    assert points[0].t == pytest.approx(1.40426, abs=1e-4)
    # the solution itself vanishes where 0.8 pi t = 3 pi / 2
    assert points[1].t == pytest.approx(1.875, abs=1e-4)


def test_classify_crisp_is_case_i():
    F = ProductFunction(triangular(1, 1, 1), CrispFunction(lambda t: t))
    plan = classify_differentiability(F, 0.0, (0.0, 1.0), 0.5, samples=10)
    assert plan.segments == (Segment(0.0, 1.0, GhCase.I),)


# }}}


# {{{ Taylor expansion


def test_taylor_constant_forcing_is_exact_after_one_term():
    alpha, t = 0.6, 0.8
    u = triangular(0, 1, 1.5)
    derivs = [triangular(0, 0, 0), scalar_mul(math.gamma(alpha + 1), u)]
    value = taylor_partial_sum(derivs, [GhCase.I], 0.0, t, alpha)
    assert hausdorff_distance(value, scalar_mul(t**alpha, u)) < 1e-14


@pytest.mark.parametrize("n", [4, 8, 12])
def test_taylor_decay_all_case_ii_is_mittag_leffler_series(n):
    alpha, t = 0.6, 0.5
    derivs = [scalar_mul((-1) ** i, U) for i in range(n)]
    value = taylor_partial_sum(derivs, [GhCase.II] * n, 0.0, t, alpha)
    series = sum((-(t**alpha)) ** i / math.gamma(alpha * i + 1) for i in range(n))
    assert hausdorff_distance(value, scalar_mul(series, U)) < 1e-14


def test_taylor_wrong_cases_give_invalid_sum():
    # a crosswise term wider than the running sum crosses its endpoints
    alpha, t = 0.6, 3.0
    derivs = [U, U]
    with pytest.raises(ExpansionInvalidError):
        taylor_partial_sum(derivs, [GhCase.II], 0.0, t, alpha)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_taylor_with_remainder_recovers_decay(n):
    alpha, t = 0.6, 0.5
    q = QuadratureSpec(nodes=512, grading=2.0, adaptive=False)
    derivs = [scalar_mul((-1) ** i, U) for i in range(n)]
    tail = ProductFunction(U, ml_function(alpha, (-1.0) ** n))
    rem = taylor_remainder(tail, 0.0, t, alpha, n, q)

    value = taylor_partial_sum(derivs, [GhCase.II] * (n + 1), 0.0, t, alpha, remainder=rem)
    exact = scalar_mul(mittag_leffler(alpha, -(t**alpha)), U)
    assert hausdorff_distance(value, exact) < 1e-6


# }}}
