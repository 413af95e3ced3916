"""Fractional integrals and Caputo gH-derivatives of fuzzy-valued functions.

Every operator here acts on the endpoint functions :math:`f^\\pm(t; r)` of
a fuzzy-valued function, one membership level at a time, and delegates the
actual quadrature to :mod:`ffsolve.frac_calc`.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from ffsolve.frac_calc import (
    CrispFunction,
    QuadratureSpec,
    as_crisp,
    caputo_derivative,
    l1_weights,
    nested_rl_integral,
    rl_integral,
)
from ffsolve.fuzzy_core import (
    FuzzyError,
    FuzzyNumber,
    GhCase,
    hukuhara_sum,
    level_grid,
    resample,
    scalar_mul,
    validate,
)


class WrongCaseError(FuzzyError):
    """The requested differentiability case does not hold at this point."""


class ExpansionInvalidError(FuzzyError):
    """A crosswise attachment in a Taylor sum produced crossed endpoints."""


class ClassificationError(FuzzyError):
    pass


# {{{ fuzzy-valued functions


class FuzzyFunction:
    """Fuzzy-valued function of time described by its endpoint functions.

    Subclasses implement :meth:`endpoints` (vectorized over time) and may
    override :meth:`caputo_endpoints` with something better than
    quadrature of each endpoint.
    """

    levels: np.ndarray

    def endpoints(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Lower and upper endpoints, each of shape ``(t.size, levels.size)``."""
        raise NotImplementedError

    def __call__(self, t: float) -> FuzzyNumber:
        lower, upper = self.endpoints(np.array([t], dtype=np.float64))
        return FuzzyNumber(self.levels, lower[0], upper[0])

    def stacked(self, t: np.ndarray) -> np.ndarray:
        """Endpoints as one array of shape ``(t.size, 2, levels.size)``."""
        lower, upper = self.endpoints(np.asarray(t, dtype=np.float64))
        return np.stack([lower, upper], axis=1)

    def caputo_endpoints(
        self, a: float, t: float, alpha: float, q: QuadratureSpec | None = None
    ) -> tuple[np.ndarray, np.ndarray]:
        """Caputo derivatives of the lower and upper endpoint functions at *t*."""
        d = caputo_derivative(self.stacked, a, t, alpha, q)
        return d[0], d[1]


@dataclass(frozen=True, eq=False)
class ProductFunction(FuzzyFunction):
    r"""The function :math:`t \mapsto g(t) \odot u` for a real function *g*.

    Caputo derivatives follow :math:`D^\alpha (g \odot u) = D^\alpha g \odot u`,
    with the endpoints of *u* assigned by the sign of :math:`g(t)`. This is
    exact while *g* keeps its sign on :math:`[a, t]`.
    """

    u: FuzzyNumber
    g: CrispFunction

    def __post_init__(self) -> None:
        object.__setattr__(self, "g", as_crisp(self.g))

    @property
    def levels(self) -> np.ndarray:  # type: ignore[override]
        return self.u.levels

    def endpoints(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        gt = self.g(np.atleast_1d(t))[:, None]
        lo, hi = gt * self.u.lower, gt * self.u.upper
        positive = gt >= 0
        return np.where(positive, lo, hi), np.where(positive, hi, lo)

    def __call__(self, t: float) -> FuzzyNumber:
        return scalar_mul(float(self.g(np.array([t]))[0]), self.u)

    def caputo_endpoints(
        self, a: float, t: float, alpha: float, q: QuadratureSpec | None = None
    ) -> tuple[np.ndarray, np.ndarray]:
        d = caputo_derivative(self.g, a, t, alpha, q)
        lo, hi = d * self.u.lower, d * self.u.upper
        if self.g(np.array([t]))[0] >= 0:
            return lo, hi
        return hi, lo


@dataclass(frozen=True, eq=False)
class ConstantFunction(FuzzyFunction):
    u: FuzzyNumber

    @property
    def levels(self) -> np.ndarray:  # type: ignore[override]
        return self.u.levels

    def endpoints(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n = np.atleast_1d(t).size
        return np.tile(self.u.lower, (n, 1)), np.tile(self.u.upper, (n, 1))

    def __call__(self, t: float) -> FuzzyNumber:
        return self.u

    def caputo_endpoints(
        self, a: float, t: float, alpha: float, q: QuadratureSpec | None = None
    ) -> tuple[np.ndarray, np.ndarray]:
        zero = np.zeros_like(self.u.lower)
        return zero, zero


@dataclass(frozen=True, eq=False)
class EndpointFunction(FuzzyFunction):
    """Closed-form endpoint functions ``lower(t, r)`` and ``upper(t, r)``.

    The callables receive ``t`` of shape ``(n, 1)`` and ``r`` of shape
    ``(1, M)`` and must broadcast.
    """

    lower: Callable[[np.ndarray, np.ndarray], np.ndarray]
    upper: Callable[[np.ndarray, np.ndarray], np.ndarray]
    levels: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        levels = level_grid() if self.levels is None else np.asarray(self.levels, dtype=np.float64)
        object.__setattr__(self, "levels", levels)

    def endpoints(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        tt = np.atleast_1d(t)[:, None]
        r = self.levels[None, :]
        shape = (tt.shape[0], r.shape[1])
        return (
            np.broadcast_to(self.lower(tt, r), shape).astype(np.float64),
            np.broadcast_to(self.upper(tt, r), shape).astype(np.float64),
        )


@dataclass(frozen=True, eq=False)
class SampledFunction(FuzzyFunction):
    """Piecewise linear interpolation in time of fuzzy samples."""

    times: np.ndarray
    lower_samples: np.ndarray
    upper_samples: np.ndarray
    levels: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        if times.ndim != 1 or times.size < 2 or np.any(np.diff(times) <= 0):
            raise FuzzyError("sample times must increase strictly")

        lower = np.asarray(self.lower_samples, dtype=np.float64)
        upper = np.asarray(self.upper_samples, dtype=np.float64)
        levels = level_grid(lower.shape[1]) if self.levels is None else self.levels
        if lower.shape != (times.size, len(levels)) or upper.shape != lower.shape:
            raise FuzzyError("samples must have shape (times, levels)")

        object.__setattr__(self, "times", times)
        object.__setattr__(self, "lower_samples", lower)
        object.__setattr__(self, "upper_samples", upper)
        object.__setattr__(self, "levels", np.asarray(levels, dtype=np.float64))

    @classmethod
    def from_numbers(cls, times: Sequence[float], values: Sequence[FuzzyNumber]) -> SampledFunction:
        levels = values[0].levels
        values = [resample(v, levels) for v in values]
        return cls(
            np.asarray(times),
            np.array([v.lower for v in values]),
            np.array([v.upper for v in values]),
            levels,
        )

    def _interp(self, t: np.ndarray, samples: np.ndarray) -> np.ndarray:
        t = np.atleast_1d(t)
        if np.any(t < self.times[0] - 1e-12) or np.any(t > self.times[-1] + 1e-12):
            raise FuzzyError(
                f"evaluation outside the sampled range [{self.times[0]}, {self.times[-1]}]"
            )

        return np.stack(
            [np.interp(t, self.times, samples[:, i]) for i in range(samples.shape[1])],
            axis=-1,
        )

    def endpoints(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self._interp(t, self.lower_samples), self._interp(t, self.upper_samples)

    def caputo_endpoints(
        self, a: float, t: float, alpha: float, q: QuadratureSpec | None = None
    ) -> tuple[np.ndarray, np.ndarray]:
        # the interpolant is piecewise linear, so the L1 rule on its own
        # breakpoints is exact
        inner = self.times[(self.times > a) & (self.times < t)]
        s = np.concatenate([[a], inner, [t]])
        values = self.stacked(s)

        if alpha == 1.0:
            d = (values[-1] - values[-2]) / (s[-1] - s[-2])
        else:
            d = np.tensordot(l1_weights(s, t, alpha), np.diff(values, axis=0), axes=(0, 0))
        return d[0], d[1]


# }}}


# {{{ integrals and derivatives


def fuzzy_rl_integral(
    F: FuzzyFunction, a: float, t: float, alpha: float, q: QuadratureSpec | None = None
) -> FuzzyNumber:
    """Fuzzy Riemann-Liouville integral, computed endpoint by endpoint."""
    value = rl_integral(F.stacked, a, t, alpha, q)
    return FuzzyNumber(F.levels, value[0], value[1])


def fuzzy_caputo_gh(
    F: FuzzyFunction,
    a: float,
    t: float,
    alpha: float,
    case: GhCase,
    q: QuadratureSpec | None = None,
) -> FuzzyNumber:
    """Fuzzy Caputo gH-derivative of the requested case.

    :raises WrongCaseError: if the endpoint derivatives, ordered as *case*
        prescribes, do not form a fuzzy number.
    """
    lo, hi = F.caputo_endpoints(a, t, alpha, q)
    if case is GhCase.II:
        lo, hi = hi, lo

    result = FuzzyNumber(F.levels, lo, hi)
    report = validate(result, atol=1e-9)
    if not report:
        raise WrongCaseError(
            f"function is not {case.value} differentiable at t={t}: {report.reason} "
            f"(level r={report.level})"
        )

    return result


def caputo_endpoint_integrals(
    F: FuzzyFunction, a: float, t: float, alpha: float, q: QuadratureSpec | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Integrals :math:`I^\\alpha D^\\alpha f^\\pm(t)` of the endpoint derivatives.

    The derivative is sampled on a graded grid and integrated once more;
    Richardson extrapolation removes the leading error term.
    """
    if q is None:
        q = QuadratureSpec.default()

    def derivative_samples(s: np.ndarray) -> np.ndarray:
        out = np.zeros((s.size, 2, F.levels.size))
        for i in range(1, s.size):
            lo, hi = F.caputo_endpoints(a, s[i], alpha, q)
            out[i] = lo, hi

        # the derivative at the base point is taken from its right limit
        out[0] = out[1]
        return out

    value = nested_rl_integral(derivative_samples, a, t, [alpha], q)
    return value[0], value[1]


# }}}


# {{{ differentiability plans


class SwitchType(enum.Enum):
    #: case_i before the point, case_ii after it
    I = "type_I"  # noqa: E741
    II = "type_II"


@dataclass(frozen=True)
class Segment:
    start: float
    end: float
    case: GhCase


@dataclass(frozen=True)
class SwitchingPoint:
    t: float
    kind: SwitchType


@dataclass(frozen=True)
class DiffPlan:
    """Piecewise-constant assignment of a differentiability case in time."""

    segments: tuple[Segment, ...]

    def __post_init__(self) -> None:
        segments = tuple(self.segments)
        if not segments:
            raise ClassificationError("a plan needs at least one segment")

        for s in segments:
            if not s.start < s.end:
                raise ClassificationError(f"empty segment [{s.start}, {s.end}]")
        for prev, cur in zip(segments, segments[1:]):
            if not math.isclose(prev.end, cur.start, rel_tol=0, abs_tol=1e-12):
                raise ClassificationError("segments must tile the interval")
            if prev.case is cur.case:
                raise ClassificationError("adjacent segments must use different cases")

        object.__setattr__(self, "segments", segments)

    @classmethod
    def uniform(cls, case: GhCase, t0: float, T: float) -> DiffPlan:
        return cls((Segment(t0, T, case),))

    @classmethod
    def from_points(
        cls, t0: float, T: float, first: GhCase, points: Sequence[float]
    ) -> DiffPlan:
        """Alternate cases starting with *first*, switching at *points*."""
        edges = [t0, *sorted(points), T]
        segments = []
        case = first
        for start, end in zip(edges, edges[1:]):
            segments.append(Segment(start, end, case))
            case = case.other
        return cls(tuple(segments))

    @property
    def interval(self) -> tuple[float, float]:
        return self.segments[0].start, self.segments[-1].end

    @property
    def switching_points(self) -> tuple[SwitchingPoint, ...]:
        return tuple(
            SwitchingPoint(cur.start, SwitchType.I if prev.case is GhCase.I else SwitchType.II)
            for prev, cur in zip(self.segments, self.segments[1:])
        )

    def case_at(self, t: float) -> GhCase:
        """Case in force at *t*; a switching point belongs to the later segment."""
        for s in self.segments[1:][::-1]:
            if t >= s.start - 1e-12:
                return s.case
        return self.segments[0].case


def classify_differentiability(
    F: FuzzyFunction,
    a: float,
    interval: tuple[float, float],
    alpha: float,
    q: QuadratureSpec | None = None,
    *,
    samples: int = 200,
    tol: float = 1.0e-6,
    all_levels: bool = False,
) -> DiffPlan:
    """Detect where the Caputo gH-derivative of *F* changes case.

    The width derivative :math:`w(t) = D^\\alpha f^+(t; 0) - D^\\alpha f^-(t; 0)`
    is sampled on the interval; ``w >= 0`` selects case (i). Sign changes
    are refined by bisection.

    :arg all_levels: also require every level to agree with level zero at
        the sample points.
    """
    t0, T = map(float, interval)
    if not (a <= t0 < T):
        raise ClassificationError(f"bad interval {interval} for base point {a}")

    def width_rate(t: float) -> np.ndarray:
        lo, hi = F.caputo_endpoints(a, t, alpha, q)
        return hi - lo, max(np.max(np.abs(lo)), np.max(np.abs(hi)))

    ts = np.linspace(t0, T, samples + 1)
    if ts[0] <= a:
        ts[0] = a + 1e-6 * (T - a)

    rates = [width_rate(t) for t in ts]
    scale = max(m for _, m in rates)
    zero_tol = 1e-10 * (1.0 + scale)

    def case_of(w: np.ndarray) -> GhCase:
        return GhCase.I if w[0] >= -zero_tol else GhCase.II

    if all(np.all(np.abs(w) <= zero_tol) for w, _ in rates):
        return DiffPlan.uniform(GhCase.I, t0, T)

    if all_levels:
        for t, (w, _) in zip(ts, rates):
            cases = {GhCase.I if x >= -zero_tol else GhCase.II for x in w}
            if len(cases) > 1:
                raise ClassificationError(f"levels disagree on the case at t={t}")

    cases = [case_of(w) for w, _ in rates]
    points = []
    for i in range(samples):
        if cases[i] is cases[i + 1]:
            continue

        lo, hi = ts[i], ts[i + 1]
        while hi - lo >= tol:
            mid = 0.5 * (lo + hi)
            if case_of(width_rate(mid)[0]) is cases[i]:
                lo = mid
            else:
                hi = mid
        points.append(0.5 * (lo + hi))

    return DiffPlan.from_points(t0, T, cases[0], points)


# }}}


# {{{ Taylor expansion


def _attach_crosswise(case_seq: Sequence[GhCase], i: int) -> GhCase:
    # Nesting f(t) = f(a) + I^a(D^a f) one derivative at a time, each
    # case (ii) level swaps the endpoints of everything integrated below it.
    # Term i therefore attaches crosswise after an odd number of swaps.
    swaps = sum(c is GhCase.II for c in case_seq[:i])
    return GhCase.II if swaps % 2 else GhCase.I


def taylor_partial_sum(
    derivs_at_a: Sequence[FuzzyNumber],
    case_seq: Sequence[GhCase],
    a: float,
    t: float,
    alpha: float,
    remainder: FuzzyNumber | None = None,
) -> FuzzyNumber:
    r"""Generalized fuzzy Taylor sum
    :math:`\sum_i D^{i\alpha} f(a) (t - a)^{i\alpha} / \Gamma(i\alpha + 1)`.

    :arg derivs_at_a: ``f(a)``, ``D^α f(a)``, ``D^{2α} f(a)``, ...
    :arg case_seq: ``case_seq[i]`` is the differentiability case of
        :math:`D^{i\alpha} f`. A term is added with :math:`\oplus`, or
        crosswise as :math:`\ominus (-1)`, depending on whether an even or
        odd number of the derivatives below it are case (ii). All case (i)
        gives plain sums; all case (ii) alternates starting crosswise.
    :arg remainder: optional remainder term, attached after the last
        derivative; needs one more entry in *case_seq*.
    :raises ExpansionInvalidError: if a partial sum has crossed endpoints.
    """
    n = len(derivs_at_a)
    if n < 1:
        raise ValueError("need at least f(a)")
    needed = n if remainder is not None else n - 1
    if len(case_seq) < needed:
        raise ValueError(f"need {needed} differentiability cases, got {len(case_seq)}")
    if t < a:
        raise ValueError(f"expansion point {t} is below {a}")

    terms = [
        scalar_mul((t - a) ** (i * alpha) / math.gamma(i * alpha + 1), d)
        for i, d in enumerate(derivs_at_a)
    ]
    if remainder is not None:
        terms.append(remainder)

    total = terms[0]
    for i, term in enumerate(terms[1:], start=1):
        total = hukuhara_sum(total, term, _attach_crosswise(case_seq, i))
        report = validate(total, atol=1e-9)
        if not report:
            raise ExpansionInvalidError(
                f"partial sum after term {i} is not a fuzzy number: {report.reason}"
            )

    return total


def taylor_remainder(
    F: FuzzyFunction,
    a: float,
    t: float,
    alpha: float,
    n: int,
    q: QuadratureSpec | None = None,
) -> FuzzyNumber:
    """Remainder of the fuzzy Taylor sum: *n* nested integrals of *F*.

    *F* is the :math:`n\\alpha`-th Caputo derivative. Every layer is kept as
    samples on one grid, see :func:`~ffsolve.frac_calc.nested_rl_integral`.
    """
    if n < 1:
        raise ValueError(f"remainder order must be positive: {n}")

    value = nested_rl_integral(F.stacked, a, t, [alpha] * n, q)
    return FuzzyNumber(F.levels, value[0], value[1])


# }}}
