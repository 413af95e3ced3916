import math

import numpy as np
import pytest

from ffsolve import problems
from ffsolve.euler_solver import (
    FFIVP,
    StepInvalidError,
    UnsupportedError,
    convergence_bound,
    convergence_study,
    estimate_lipschitz,
    euler_coefficient,
    global_error,
    local_truncation_error,
    solve,
    stability_experiment,
    step_count,
)
from ffsolve.frac_calc import CrispFunction
from ffsolve.fuzzy_core import GhCase, hausdorff_distance, scalar_mul, singleton, triangular
from ffsolve.fuzzy_frac import DiffPlan, ProductFunction

U1 = triangular(0.0, 1.0, 1.5)


def test_euler_coefficient():
    assert euler_coefficient(0.2, 0.3) == pytest.approx(0.2**0.3 / math.gamma(1.3))
    assert euler_coefficient(0.1, 1.0) == pytest.approx(0.1)


def test_step_count_must_divide():
    assert step_count((0.0, 1.0), 0.1) == 10
    with pytest.raises(ValueError):
        step_count((0.0, 1.0), 0.3)


# {{{ scheme identities


def test_case_i_and_case_ii_steps():
    f = triangular(-1.0, 0.5, 2.0)
    y0 = triangular(1.0, 2.0, 4.0)
    c = euler_coefficient(0.25, 0.5)
    for case in GhCase:
        p = FFIVP(0.5, lambda t, y: f, y0, (0.0, 0.25), plan=DiffPlan.uniform(case, 0.0, 0.25))
        y1 = solve(p, 0.25)[1]
        if case is GhCase.I:
            np.testing.assert_allclose(y1.lower, y0.lower + c * f.lower, rtol=0, atol=1e-15)
            np.testing.assert_allclose(y1.upper, y0.upper + c * f.upper, rtol=0, atol=1e-15)
        else:
            np.testing.assert_allclose(y1.lower, y0.lower + c * f.upper, rtol=0, atol=1e-15)
            np.testing.assert_allclose(y1.upper, y0.upper + c * f.lower, rtol=0, atol=1e-15)


@pytest.mark.parametrize("alpha", [0.3, 0.6, 0.9])
@pytest.mark.parametrize("h", [0.2, 0.02])
def test_one_step_constant_forcing_has_no_drift(alpha, h):
    traj = solve(problems.constant_forcing(alpha, T=1.0), h)
    for k, y in enumerate(traj.values):
        assert hausdorff_distance(y, scalar_mul(k * h**alpha, U1)) < 1e-12


@pytest.mark.parametrize("alpha", [0.3, 0.6, 0.9])
def test_memory_constant_forcing_is_exact(alpha):
    p = problems.constant_forcing(alpha)
    for h in (0.2, 0.05, 0.01):
        assert np.max(global_error(solve(p, h, scheme="memory"), p.exact)) < 1e-12


@pytest.mark.parametrize("scheme", ["euler", "memory"])
def test_order_one_is_forward_euler(scheme):
    u = triangular(1.0, 2.0, 3.0)
    p = FFIVP(1.0, lambda t, y: scalar_mul(0.5, y), u, (0.0, 1.0), plan=DiffPlan.uniform(GhCase.I, 0.0, 1.0))
    traj = solve(p, 0.1, scheme=scheme)
    assert hausdorff_distance(traj[-1], scalar_mul(1.05**10, u)) < 1e-12


def test_memory_auto_and_declared_agree_on_decay():
    p = problems.linear_decay(0.7)
    a = solve(p, 0.05, scheme="memory")
    b = solve(p, 0.05, scheme="memory", plan="auto")
    assert max(hausdorff_distance(x, y) for x, y in zip(a.values, b.values)) < 1e-14


def test_large_step_on_decay_is_invalid():
    # c > 1 makes the case (ii) update cross the endpoints
    p = problems.linear_decay(0.5, T=1.5)
    with pytest.raises(StepInvalidError):
        solve(p, 1.5)


def test_memory_needs_history_before_interval():
    p = problems.cosine(0.8)
    bare = FFIVP(**{**p.__dict__, "history": None})
    with pytest.raises(UnsupportedError):
        solve(bare, 0.1, scheme="memory")


# }}}


# {{{ plans


@pytest.mark.parametrize("h", [0.2, 0.02])
def test_cosine_declared_and_auto_agree(h):
    p = problems.cosine(0.8)
    a, b = solve(p, h), solve(p, h, plan="auto")
    assert max(hausdorff_distance(x, y) for x, y in zip(a.values, b.values)) < 1e-6


def test_auto_plan_records_switch():
    traj = solve(problems.cosine(0.8), 0.02, plan="auto")
    assert traj.plan.switching_points[0].t == pytest.approx(1.404, abs=0.02)


def test_memory_cosine_converges_with_history():
    p = problems.cosine(0.8)
    errors = [np.max(global_error(solve(p, h, scheme="memory", plan="auto"), p.exact)) for h in (0.02, 0.01)]
    assert errors[1] < errors[0]
    assert errors[0] / errors[1] == pytest.approx(2.0, abs=0.2)


# }}}


# {{{ truncation and convergence


def test_lte_zero_for_constant_forcing():
    p = problems.constant_forcing(0.6)
    assert np.all(local_truncation_error(p, solve(p, 0.1)) == 0.0)


def test_lte_zero_for_crisp_linear():
    line = ProductFunction(singleton(1.0), CrispFunction(lambda t: t, lambda t: np.ones_like(t)))
    p = FFIVP(1.0, lambda t, y: singleton(1.0), singleton(0.0), (0.0, 1.0), exact=line)
    assert np.max(local_truncation_error(p, solve(p, 0.1))) < 1e-12


def test_lte_bound_halving_on_decay():
    p = problems.linear_decay(0.9)
    peaks = [np.max(local_truncation_error(p, solve(p, h))) for h in (0.1, 0.05)]
    assert peaks[0] / peaks[1] == pytest.approx(2**0.8, rel=0.05)


def test_convergence_bound_zero_lipschitz_limit():
    assert convergence_bound(0.1, 0.5, 1.0, 0.0, 1.0) == pytest.approx(
        convergence_bound(0.1, 0.5, 1.0, 1e-9, 1.0), rel=1e-6
    )


def test_crisp_linear_order_one():
    ex = ProductFunction(singleton(1.0), CrispFunction(np.exp, np.exp))
    p = FFIVP(1.0, lambda t, y: y, singleton(1.0), (0.0, 1.0), exact=ex)
    rows = convergence_study(p, [0.1, 0.05, 0.025, 0.0125])
    orders = [math.log2(r.ratio) for r in rows[1:]]
    assert orders == pytest.approx([1.0] * 3, abs=0.1)
    assert all(r.within_bound for r in rows)


def test_lipschitz_estimate_for_linear_rhs():
    p = problems.linear_decay(0.6)
    est = estimate_lipschitz(p, solve(p, 0.1))
    assert est.upper == pytest.approx(1.2)
    assert est.lower == pytest.approx(1 / 1.2)


def test_global_error_starts_at_zero():
    p = problems.linear_decay(0.6)
    assert global_error(solve(p, 0.1), p.exact)[0] == 0.0


# }}}


# {{{ stability


def test_zero_perturbation():
    r = stability_experiment(problems.linear_decay(0.6), 0.1, singleton(0.0), 0.0)
    assert r.max_ratio == 0.0


def test_constant_forcing_perturbation_is_translated():
    delta0 = triangular(0.0, 0.01, 0.03)
    r = stability_experiment(problems.constant_forcing(0.6), 0.1, delta0)
    np.testing.assert_allclose(r.distances, 0.03, rtol=0, atol=1e-15)
    assert r.bound == 1.0 and r.holds


def test_decay_perturbation_contracts():
    alpha, h = 0.6, 0.02
    r = stability_experiment(problems.linear_decay(alpha), h, singleton(1e-3))
    c = euler_coefficient(h, alpha)
    np.testing.assert_allclose(r.distances, 1e-3 * (1 - c) ** np.arange(r.distances.size), rtol=1e-9)
    assert r.max_ratio <= 1.0 + 1e-12
    assert r.holds and r.contraction_holds


def test_memory_stability_shifts_history():
    r = stability_experiment(problems.cosine(0.8), 0.05, triangular(0.0, 0.05, 0.1), scheme="memory", plan="auto")
    assert r.contraction_holds is None
    assert r.max_ratio == pytest.approx(1.0)


# }}}
