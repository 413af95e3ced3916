"""The four built-in fuzzy fractional initial value problems.

1. constant forcing, ``D^a y = Gamma(a + 1) (0, 1, 1.5)``, ``y(0) = 0``,
   solution ``(0, 1, 1.5) t^a``;
2. linear decay, ``D^a y = -y``, ``y(0) = (0, 1, 2)``, solution
   ``(0, 1, 2) E_a(-t^a)``;
3. a cosine on ``[1, 2]`` with Caputo base point 0, solution
   ``(0, 1/2, 1) cos(a pi t)``, which switches case where the Caputo
   derivative of the cosine changes sign;
4. a nonlinear problem ``sqrt(eta) D^a y + y^2 = g(t) eta`` with
   ``eta = (1, 2, 3)`` and solution ``sqrt(eta) p(t)``,
   ``p(t) = t^5 - 3 t^4 + 2 t^3``.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from ffsolve.euler_solver import FFIVP
from ffsolve.frac_calc import (
    CrispFunction,
    QuadratureSpec,
    find_caputo_root,
    hyp_1f2,
    mittag_leffler,
)
from ffsolve.fuzzy_core import (
    FuzzyNumber,
    GhCase,
    apply_monotone,
    gh_difference,
    multiply,
    scalar_mul,
    singleton,
    triangular,
)
from ffsolve.fuzzy_frac import ConstantFunction, DiffPlan, ProductFunction

EXAMPLES = (1, 2, 3, 4)


# {{{ constant forcing


def constant_forcing(alpha: float, T: float = 1.0, levels: int = 11) -> FFIVP:
    u = triangular(0.0, 1.0, 1.5, levels)
    forcing = scalar_mul(math.gamma(alpha + 1), u)

    return FFIVP(
        alpha=alpha,
        rhs=lambda t, y: forcing,
        y0=singleton(0.0, levels),
        interval=(0.0, T),
        plan=DiffPlan.uniform(GhCase.I, 0.0, T),
        exact=ProductFunction(u, CrispFunction(lambda t: t**alpha)),
        exact_derivative=ConstantFunction(forcing),
        lipschitz=0.0,
        name="constant forcing",
    )


# }}}


# {{{ linear decay


def linear_decay(alpha: float, T: float = 1.0, levels: int = 11) -> FFIVP:
    u = triangular(0.0, 1.0, 2.0, levels)

    def ml(t: np.ndarray) -> np.ndarray:
        return mittag_leffler(alpha, -np.asarray(t) ** alpha, z_max=max(5.0, T**alpha))

    return FFIVP(
        alpha=alpha,
        rhs=lambda t, y: scalar_mul(-1.0, y),
        y0=u,
        interval=(0.0, T),
        plan=DiffPlan.uniform(GhCase.II, 0.0, T),
        exact=ProductFunction(u, CrispFunction(ml)),
        exact_derivative=ProductFunction(u, CrispFunction(lambda t: -ml(t))),
        name="linear decay",
    )


# }}}


# {{{ cosine


def cosine_forcing(alpha: float) -> CrispFunction:
    r"""Caputo derivative (base point 0) of :math:`\cos(\alpha \pi t)` in closed form."""
    if alpha == 1.0:
        return CrispFunction(lambda t: -math.pi * np.sin(math.pi * np.asarray(t)))

    a2 = alpha * alpha
    scale = -(math.pi**2) * a2 / ((2 - 3 * alpha + a2) * math.gamma(1 - alpha))
    b1, b2 = 1.5 - 0.5 * alpha, 2.0 - 0.5 * alpha

    def F(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return scale * t ** (2 - alpha) * hyp_1f2(b1, b2, -0.25 * math.pi**2 * a2 * t**2)

    return CrispFunction(F)


def cosine_switching_point(alpha: float, q: QuadratureSpec | None = None) -> float:
    """Zero of the Caputo derivative of the cosine on ``[1, 2]``."""
    g = CrispFunction(
        lambda t: np.cos(alpha * math.pi * t),
        lambda t: -alpha * math.pi * np.sin(alpha * math.pi * t),
    )
    return find_caputo_root(g, 0.0, alpha, (1.0, 2.0), q)


def cosine(alpha: float = 0.8, levels: int = 11, switching_point: float | None = None) -> FFIVP:
    """The cosine problem on ``[1, 2]``; its declared plan has one type I switch."""
    u = triangular(0.0, 0.5, 1.0, levels)
    F = cosine_forcing(alpha)

    if switching_point is None:
        switching_point = cosine_switching_point(alpha)

    @functools.lru_cache(maxsize=4096)
    def forcing(t: float) -> FuzzyNumber:
        return scalar_mul(float(F(np.array([t]))[0]), u)

    def rhs(t: float, y: FuzzyNumber) -> FuzzyNumber:
        return forcing(float(t))

    exact = ProductFunction(
        u,
        CrispFunction(
            lambda t: np.cos(alpha * math.pi * np.asarray(t)),
            lambda t: -alpha * math.pi * np.sin(alpha * math.pi * np.asarray(t)),
        ),
    )
    return FFIVP(
        alpha=alpha,
        rhs=rhs,
        y0=scalar_mul(math.cos(alpha * math.pi), u),
        interval=(1.0, 2.0),
        plan=DiffPlan.from_points(1.0, 2.0, GhCase.I, [switching_point]),
        exact=exact,
        exact_derivative=ProductFunction(u, F),
        base=0.0,
        history=exact,
        name="cosine",
    )


# }}}


# {{{ nonlinear


def poly(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return t**5 - 3 * t**4 + 2 * t**3


def dpoly(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=np.float64)
    return 5 * t**4 - 12 * t**3 + 6 * t**2


def caputo_poly(alpha: float) -> CrispFunction:
    """Caputo derivative of :func:`poly` by the power rule."""
    coeffs = ((5, 1.0), (4, -3.0), (3, 2.0))

    def D(t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return sum(
            c * math.gamma(p + 1) / math.gamma(p + 1 - alpha) * t ** (p - alpha)
            for p, c in coeffs
        )

    return CrispFunction(D)


def _solve_positive_factor(s: FuzzyNumber, w: FuzzyNumber) -> FuzzyNumber:
    # find D with s * D = w per level, for s > 0, from the sign pattern of w
    lower = np.where(w.lower >= 0, w.lower / s.lower, w.lower / s.upper)
    upper = np.where(w.upper >= 0, w.upper / s.upper, w.upper / s.lower)
    mixed = (w.lower < 0) & (w.upper > 0)
    lower = np.where(mixed, w.lower / s.upper, lower)
    upper = np.where(mixed, w.upper / s.upper, upper)
    return FuzzyNumber(s.levels, lower, upper)


def nonlinear(alpha: float, levels: int = 11, rhs: str = "endpoint") -> FFIVP:
    r"""The nonlinear problem :math:`\sqrt{\eta} D^\alpha y + y^2 = g(t) \eta`.

    :arg rhs: how the equation is solved for :math:`D^\alpha y`.
        ``"endpoint"`` treats each endpoint as its own crisp equation,
        :math:`D^\alpha y^\pm = (\eta^\pm q(t) - (y^\pm)^2) / \sqrt{\eta^\pm}`,
        so the increment may have crossed endpoints where :math:`q < 0`.
        ``"gh"`` forms :math:`g \ominus_{gH} y^2` and divides by the
        positive factor :math:`\sqrt{\eta}` interval-wise.
    """
    eta = triangular(1.0, 2.0, 3.0, levels)
    root_eta = apply_monotone(np.sqrt, eta, increasing=True)
    D = caputo_poly(alpha)

    def q(t: float) -> float:
        tt = np.array([t])
        return float(D(tt)[0] + poly(tt)[0] ** 2)

    def endpoint_rhs(t: float, y: FuzzyNumber) -> FuzzyNumber:
        qt = q(t)
        return FuzzyNumber(
            y.levels,
            (eta.lower * qt - y.lower**2) / root_eta.lower,
            (eta.upper * qt - y.upper**2) / root_eta.upper,
        )

    def gh_rhs(t: float, y: FuzzyNumber) -> FuzzyNumber:
        w, _ = gh_difference(scalar_mul(q(t), eta), multiply(y, y))
        return _solve_positive_factor(root_eta, w)

    if rhs not in ("endpoint", "gh"):
        raise ValueError(f"unknown right-hand side variant: {rhs!r}")

    return FFIVP(
        alpha=alpha,
        rhs=endpoint_rhs if rhs == "endpoint" else gh_rhs,
        y0=singleton(0.0, levels),
        interval=(0.0, 1.0),
        plan=DiffPlan.uniform(GhCase.I, 0.0, 1.0),
        exact=ProductFunction(root_eta, CrispFunction(poly, dpoly)),
        exact_derivative=ProductFunction(root_eta, D),
        name="nonlinear",
    )


def nonlinear_switching_point(alpha: float, q: QuadratureSpec | None = None) -> float:
    """Where the Caputo derivative of :func:`poly` turns negative on ``(0, 1)``."""
    return find_caputo_root(CrispFunction(poly, dpoly), 0.0, alpha, (0.5, 1.0), q)


# }}}


def example(n: int, alpha: float, levels: int = 11, **kwargs: object) -> FFIVP:
    """Built-in problem number *n* (1 to 4)."""
    if n == 1:
        return constant_forcing(alpha, levels=levels, **kwargs)  # type: ignore[arg-type]
    if n == 2:
        return linear_decay(alpha, levels=levels, **kwargs)  # type: ignore[arg-type]
    if n == 3:
        return cosine(alpha, levels=levels, **kwargs)  # type: ignore[arg-type]
    if n == 4:
        return nonlinear(alpha, levels=levels, **kwargs)  # type: ignore[arg-type]
    raise ValueError(f"no built-in example {n}, expected one of {EXAMPLES}")


__all__ = [
    "EXAMPLES",
    "caputo_poly",
    "constant_forcing",
    "cosine",
    "cosine_forcing",
    "cosine_switching_point",
    "dpoly",
    "example",
    "linear_decay",
    "nonlinear",
    "nonlinear_switching_point",
    "poly",
]
