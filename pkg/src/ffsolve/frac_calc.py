"""Crisp fractional integrals, Caputo derivatives and special functions.

Integrals use a product-trapezoid rule: the integrand is replaced by its
piecewise linear interpolant and integrated exactly against the weakly
singular kernel :math:`(t - s)^{\\beta - 1}`. Every fuzzy operator in the
package reduces to these routines, one endpoint function at a time.
"""

from __future__ import annotations

import math
import os
from collections.abc import Callable
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import gammaln

ArrayFn = Callable[[np.ndarray], np.ndarray]


class FracCalcError(ValueError):
    pass


class SeriesDivergenceError(ArithmeticError):
    """A power series did not reach its truncation tolerance."""


class NoRootError(FracCalcError):
    pass


# {{{ inputs


@dataclass(frozen=True)
class CrispFunction:
    """A real function of time with an optional analytic derivative.

    Both callables must accept and return :class:`numpy.ndarray`.
    """

    f: ArrayFn
    df: ArrayFn | None = None

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return np.asarray(self.f(np.asarray(t, dtype=np.float64)), dtype=np.float64)


def as_crisp(g: CrispFunction | ArrayFn) -> CrispFunction:
    return g if isinstance(g, CrispFunction) else CrispFunction(g)


def _default_nodes() -> int:
    value = os.environ.get("FFSOLVE_QUAD_NODES")
    if value is None:
        return 256

    nodes = int(value)
    if nodes < 2:
        raise FracCalcError(f"FFSOLVE_QUAD_NODES must be at least 2: {nodes}")
    return nodes


@dataclass(frozen=True)
class QuadratureSpec:
    """Parameters of the product-trapezoid rule.

    With ``adaptive`` set, the node count is doubled until two successive
    results agree to ``tol`` or ``max_nodes`` is reached.
    """

    #: nodes per unit length of the integration interval
    nodes: int = 256
    #: absolute tolerance for the doubling loop
    tol: float = 1.0e-8
    #: nodes are placed at ``a + (t - a) (j / n)^grading``
    grading: float = 1.0
    adaptive: bool = True
    min_nodes: int = 32
    max_nodes: int = 1 << 16

    def __post_init__(self) -> None:
        if self.nodes < 2 or self.min_nodes < 2:
            raise FracCalcError("quadrature needs at least two nodes")
        if self.tol <= 0:
            raise FracCalcError(f"tolerance must be positive: {self.tol}")
        if self.grading < 1:
            raise FracCalcError(f"grading exponent must be >= 1: {self.grading}")

    @classmethod
    def default(cls, **kwargs: object) -> QuadratureSpec:
        """The default rule, honouring ``FFSOLVE_QUAD_NODES``."""
        kwargs.setdefault("nodes", _default_nodes())
        return cls(**kwargs)  # type: ignore[arg-type]

    def with_grading(self, grading: float) -> QuadratureSpec:
        return replace(self, grading=grading)

    def node_count(self, length: float) -> int:
        return max(self.min_nodes, math.ceil(self.nodes * length))

    def grid(self, a: float, t: float, n: int | None = None) -> np.ndarray:
        if n is None:
            n = self.node_count(t - a)

        x = np.linspace(0.0, 1.0, n + 1)
        if self.grading != 1.0:
            x = x**self.grading

        s = a + (t - a) * x
        s[-1] = t
        return s


def _scalar_or_array(x: np.ndarray) -> float | np.ndarray:
    return float(x) if np.ndim(x) == 0 else np.asarray(x, dtype=np.float64)


def _check_order(alpha: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise FracCalcError(f"order must be in (0, 1]: {alpha}")


# }}}


# {{{ kernel moments


def _kernel_moments(s: np.ndarray, t: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    r"""Moments of :math:`(t - \sigma)^{\beta - 1}` over ``[s_j, s_{j+1}]``.

    :returns: ``(m0, m1)`` with :math:`m_0 = \int k` and
        :math:`m_1 = \int k \cdot (\sigma - s_j)`.
    """
    A = t - s[:-1]
    B = t - s[1:]
    d = s[1:] - s[:-1]

    # (A^beta - B^beta) / beta without cancellation for short intervals;
    # the last interval has B = 0 and log1p(-1) = -inf is intended
    with np.errstate(divide="ignore"):
        m0 = -(A**beta) * np.expm1(beta * np.log1p(-d / A)) / beta
    m1 = A * m0 - (A ** (beta + 1) - B ** (beta + 1)) / (beta + 1)

    return m0, m1


def product_trapezoid_weights(s: np.ndarray, t: float, beta: float) -> np.ndarray:
    r"""Weights :math:`w_j` with
    :math:`\frac{1}{\Gamma(\beta)} \int_{s_0}^{t} (t - \sigma)^{\beta - 1} g(\sigma)
    \,\mathrm{d}\sigma \approx \sum_j w_j g(s_j)`.

    The last node must be ``t``.
    """
    m0, m1 = _kernel_moments(s, t, beta)
    right = m1 / (s[1:] - s[:-1])

    w = np.zeros_like(s)
    w[:-1] += m0 - right
    w[1:] += right

    return w / math.gamma(beta)


def l1_weights(s: np.ndarray, t: float, alpha: float) -> np.ndarray:
    r"""Weights of the L1 rule for the Caputo derivative at ``t = s[-1]``.

    The derivative of the piecewise linear interpolant is
    :math:`\sum_j (g_{j+1} - g_j) c_j` with the returned :math:`c_j`.
    """
    beta = 1.0 - alpha
    m0, _ = _kernel_moments(s, t, beta)

    return m0 / (s[1:] - s[:-1]) / math.gamma(beta)


# }}}


# {{{ Riemann-Liouville integral


def _adaptive(
    estimate: Callable[[int], np.ndarray],
    n0: int,
    q: QuadratureSpec,
    order: float | None = None,
) -> float | np.ndarray:
    # with a known leading error order, successive grids are combined by
    # Richardson extrapolation and the extrapolated values are compared
    value = estimate(n0)
    if q.adaptive:
        n, coarse, prev = n0, value, None
        while 2 * n <= q.max_nodes:
            n *= 2
            fine = estimate(n)
            if order is None:
                value = fine
                converged = np.max(np.abs(fine - coarse)) <= q.tol
            else:
                value = fine + (fine - coarse) / (2.0**order - 1.0)
                converged = prev is not None and np.max(np.abs(value - prev)) <= q.tol
                prev = value
            coarse = fine
            if converged:
                break

    return float(value) if np.ndim(value) == 0 else value


def rl_integral(
    g: CrispFunction | ArrayFn,
    a: float,
    t: float,
    alpha: float,
    q: QuadratureSpec | None = None,
) -> float | np.ndarray:
    r"""Riemann-Liouville integral
    :math:`\frac{1}{\Gamma(\alpha)} \int_a^t (t - s)^{\alpha - 1} g(s) \,\mathrm{d}s`.

    If *g* returns arrays with trailing axes (one column per endpoint
    function, say), each column is integrated and an array is returned.
    """
    _check_order(alpha)
    if t < a:
        raise FracCalcError(f"upper limit {t} is below the base point {a}")
    if q is None:
        q = QuadratureSpec.default()
    g = as_crisp(g)

    if t == a:
        return 0.0 * _scalar_or_array(g(np.array([a]))[0])

    def estimate(n: int) -> np.ndarray:
        s = q.grid(a, t, n)
        return np.tensordot(product_trapezoid_weights(s, t, alpha), g(s), axes=(0, 0))

    return _adaptive(estimate, q.node_count(t - a), q)


def rl_integral_sampled(s: np.ndarray, values: np.ndarray, alpha: float) -> np.ndarray:
    """Riemann-Liouville integral of a sampled function at every node.

    :arg s: strictly increasing nodes, the first one is the base point.
    :arg values: samples at *s*; extra trailing axes are integrated independently.
    :returns: array shaped like *values*, zero at the first node.
    """
    _check_order(alpha)
    s = np.asarray(s, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)

    result = np.zeros_like(values)
    for i in range(1, s.size):
        w = product_trapezoid_weights(s[: i + 1], s[i], alpha)
        result[i] = np.tensordot(w, values[: i + 1], axes=(0, 0))

    return result


def nested_rl_integral(
    g: Callable[[np.ndarray], np.ndarray],
    a: float,
    t: float,
    orders: tuple[float, ...] | list[float],
    q: QuadratureSpec | None = None,
    *,
    extrapolate: bool = True,
) -> np.ndarray:
    """Apply Riemann-Liouville integrals of the given orders in sequence.

    Each layer is sampled on one shared grid over :math:`[a, t]` and fed to
    the next. With *extrapolate*, the grid is also halved and the two
    results are combined by Richardson extrapolation for a second-order
    error; this assumes the grid is graded enough for the integrand.

    :arg g: maps an array of nodes to samples, possibly with extra trailing axes.
    :returns: the innermost-first composition evaluated at *t*.
    """
    if not orders:
        raise FracCalcError("need at least one integration order")
    for alpha in orders:
        _check_order(alpha)
    if t < a:
        raise FracCalcError(f"upper limit {t} is below the base point {a}")

    if q is None:
        q = QuadratureSpec.default()

    def layered(n: int) -> np.ndarray:
        s = q.grid(a, t, n)
        values = np.asarray(g(s), dtype=np.float64)
        for alpha in orders[:-1]:
            values = rl_integral_sampled(s, values, alpha)

        w = product_trapezoid_weights(s, t, orders[-1])
        return np.tensordot(w, values, axes=(0, 0))

    if t == a:
        return np.zeros_like(np.asarray(g(np.array([a]))[0], dtype=np.float64))

    n = q.node_count(t - a)
    fine = layered(2 * n)
    if not extrapolate:
        return fine

    return fine + (fine - layered(n)) / 3.0


# }}}


# {{{ Caputo derivative


def _central_difference(g: CrispFunction, t: np.ndarray) -> np.ndarray:
    eps = np.finfo(np.float64).eps
    h = eps ** (1.0 / 3.0) * np.maximum(1.0, np.abs(t))
    return (g(t + h) - g(t - h)) / (2.0 * h)


def caputo_derivative(
    g: CrispFunction | ArrayFn,
    a: float,
    t: float,
    alpha: float,
    q: QuadratureSpec | None = None,
    *,
    method: str = "auto",
) -> float | np.ndarray:
    r"""Caputo derivative :math:`I^{1 - \alpha} g'(t)` with base point *a*.

    :arg method: ``"derivative"`` integrates the analytic derivative of *g*
        with the product-trapezoid rule. ``"l1"`` uses only samples of *g*
        (the L1 rule). ``"central"`` integrates central differences of *g*,
        which must then be defined slightly outside :math:`[a, t]`.
        ``"auto"`` picks ``"derivative"`` when available and ``"l1"``
        otherwise.
    """
    _check_order(alpha)
    if t <= a:
        raise FracCalcError(f"evaluation point {t} must exceed the base point {a}")

    if q is None:
        q = QuadratureSpec.default()
    g = as_crisp(g)

    if method == "auto":
        method = "derivative" if g.df is not None else "l1"

    if method == "derivative":
        if g.df is None:
            raise FracCalcError("no analytic derivative available")
        dg = CrispFunction(g.df)
    elif method == "central":
        dg = CrispFunction(lambda s: _central_difference(g, s))
    elif method == "l1":
        if alpha == 1.0:
            return _scalar_or_array(_central_difference(g, np.array([t]))[0])

        def estimate(n: int) -> np.ndarray:
            s = q.grid(a, t, n)
            return np.tensordot(l1_weights(s, t, alpha), np.diff(g(s), axis=0), axes=(0, 0))

        # the L1 rule is accurate to O(n^(alpha - 2)) for smooth g
        return _adaptive(estimate, q.node_count(t - a), q, order=2.0 - alpha)
    else:
        raise FracCalcError(f"unknown method: {method!r}")

    if alpha == 1.0:
        return _scalar_or_array(dg(np.array([t]))[0])

    return rl_integral(dg, a, t, 1.0 - alpha, q)


def caputo_derivative_sampled(s: np.ndarray, values: np.ndarray, alpha: float) -> np.ndarray:
    """L1 Caputo derivative of a sampled function at every node but the first.

    :returns: array shaped like *values*; the entry at the base point is
        ``nan`` since the derivative is only defined for ``t > a``.
    """
    _check_order(alpha)
    s = np.asarray(s, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    dv = np.diff(values, axis=0)

    result = np.full_like(values, np.nan)
    for i in range(1, s.size):
        if alpha == 1.0:
            result[i] = dv[i - 1] / (s[i] - s[i - 1])
        else:
            w = l1_weights(s[: i + 1], s[i], alpha)
            result[i] = np.tensordot(w, dv[:i], axes=(0, 0))

    return result


def find_caputo_root(
    g: CrispFunction | ArrayFn,
    a: float,
    alpha: float,
    bracket: tuple[float, float],
    q: QuadratureSpec | None = None,
    *,
    tol: float = 1.0e-6,
) -> float:
    """Locate a sign change of :math:`t \\mapsto D^\\alpha g(t)` by bisection."""
    lo, hi = map(float, bracket)
    if not a < lo < hi:
        raise FracCalcError(f"bracket {bracket} must lie to the right of {a}")

    def phi(t: float) -> float:
        return caputo_derivative(g, a, t, alpha, q)

    f_lo, f_hi = phi(lo), phi(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoRootError(
            f"derivative does not change sign on [{lo}, {hi}] "
            f"(values {f_lo:.3e} and {f_hi:.3e})"
        )

    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        f_mid = phi(mid)
        if f_mid == 0.0:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid

    return 0.5 * (lo + hi)


# }}}


# {{{ special functions

_SERIES_RTOL = 1.0e-15
_SERIES_MAX_TERMS = 1000


def mittag_leffler(
    alpha: float, z: float | np.ndarray, *, z_max: float = 5.0
) -> float | np.ndarray:
    r"""One-parameter Mittag-Leffler function
    :math:`E_\alpha(z) = \sum_k z^k / \Gamma(\alpha k + 1)` by direct summation.
    """
    _check_order(alpha)
    z_arr = np.asarray(z, dtype=np.float64)
    if np.any(np.abs(z_arr) > z_max):
        raise FracCalcError(f"|z| exceeds {z_max}; the series loses accuracy there")

    x = np.abs(z_arr)
    sign = np.sign(z_arr)
    with np.errstate(divide="ignore"):
        logx = np.log(x)

    total = np.ones_like(z_arr)
    prev = np.ones_like(z_arr)
    for k in range(1, _SERIES_MAX_TERMS):
        mag = np.where(x > 0, np.exp(k * logx - gammaln(alpha * k + 1.0)), 0.0)
        total = total + sign**k * mag

        if np.all((mag < _SERIES_RTOL * (1.0 + np.abs(total))) & (mag <= prev)):
            break
        prev = mag
    else:
        raise SeriesDivergenceError(
            f"Mittag-Leffler series did not converge in {_SERIES_MAX_TERMS} terms"
        )

    return float(total) if total.ndim == 0 else total


def hyp_1f2(
    b1: float, b2: float, z: float | np.ndarray, a1: float = 1.0
) -> float | np.ndarray:
    r"""Generalized hypergeometric function :math:`{}_1F_2(a_1; b_1, b_2; z)`."""
    for b in (b1, b2):
        if b <= 0 and float(b).is_integer():
            raise FracCalcError(f"lower parameter {b} is a pole")

    z_arr = np.asarray(z, dtype=np.float64)
    term = np.ones_like(z_arr)
    total = np.ones_like(z_arr)
    for k in range(_SERIES_MAX_TERMS):
        term = term * (a1 + k) / ((b1 + k) * (b2 + k) * (k + 1)) * z_arr
        total = total + term

        if np.all(np.abs(term) < _SERIES_RTOL * (1.0 + np.abs(total))):
            break
    else:
        raise SeriesDivergenceError(
            f"1F2 series did not converge in {_SERIES_MAX_TERMS} terms"
        )

    return float(total) if total.ndim == 0 else total


# }}}
