"""Generalized fuzzy Euler method for fuzzy fractional initial value problems.

Two discretizations of :math:`D^\\alpha y = f(t, y)` are provided:

* ``"euler"``, the one-step scheme
  :math:`y_{k+1} = y_k \\oplus c f(t_k, y_k)` (case (i)) or
  :math:`y_{k+1} = y_k \\ominus (-1) c f(t_k, y_k)` (case (ii)) with
  :math:`c = h^\\alpha / \\Gamma(\\alpha + 1)`.
* ``"memory"``, the fractional rectangle rule that keeps the whole history,
  :math:`y_n = y_0 + c \\sum_{j < n} b_{n - 1 - j} f(t_j, y_j)` with
  :math:`b_k = (k + 1)^\\alpha - k^\\alpha`.

Both reduce to the classical forward Euler method for :math:`\\alpha = 1`.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from ffsolve.frac_calc import QuadratureSpec
from ffsolve.fuzzy_core import (
    FuzzyError,
    FuzzyNumber,
    GhCase,
    add,
    hausdorff_distance,
    norm,
    resample,
    triangular,
    validate,
)
from ffsolve.fuzzy_frac import (
    DiffPlan,
    EndpointFunction,
    FuzzyFunction,
    SampledFunction,
    Segment,
    classify_differentiability,
)

RHS = Callable[[float, FuzzyNumber], FuzzyNumber]

SCHEMES = ("euler", "memory")


class StepInvalidError(FuzzyError):
    """An update produced crossed or non-nested level sets."""

    def __init__(self, t: float, level: float | None, reason: str) -> None:
        super().__init__(
            f"step from t={t:.6g} gives an invalid fuzzy number at level r={level}: "
            f"{reason}; the step size is too large or the case plan is wrong"
        )
        self.t = t
        self.level = level


class UnsupportedError(FuzzyError):
    pass


# {{{ problem and trajectory


@dataclass(frozen=True, eq=False)
class FFIVP:
    r"""Fuzzy fractional initial value problem :math:`D^\alpha y = f(t, y)`.

    :arg plan: a :class:`~ffsolve.fuzzy_frac.DiffPlan`, ``"auto"`` to pick
        the case at each node from the orientation of the right-hand side,
        or ``"classify"`` to classify the exact solution.
    :arg exact: exact solution, used for errors and truncation estimates.
    :arg exact_derivative: :math:`D^\alpha y` of the exact solution; saves one
        numerical derivative when bounding :math:`D^{2\alpha} y`.
    :arg base: base point of the Caputo derivative if it differs from the
        start of the interval.
    :arg history: the solution on ``[base, t0]``, needed by the memory
        scheme when the base point lies before the interval.
    """

    alpha: float
    rhs: RHS
    y0: FuzzyNumber
    interval: tuple[float, float]
    plan: DiffPlan | str = "auto"
    exact: FuzzyFunction | None = None
    exact_derivative: FuzzyFunction | None = None
    base: float | None = None
    history: FuzzyFunction | None = None
    lipschitz: float | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"order must be in (0, 1]: {self.alpha}")

        t0, T = map(float, self.interval)
        if not T > t0:
            raise ValueError(f"empty interval {self.interval}")
        object.__setattr__(self, "interval", (t0, T))

        self.y0.checked()
        if self.base is not None and self.base > t0:
            raise ValueError(f"base point {self.base} lies after the interval start {t0}")
        if isinstance(self.plan, str) and self.plan not in ("auto", "classify"):
            raise ValueError(f"unknown plan: {self.plan!r}")

    @property
    def t0(self) -> float:
        return self.interval[0]

    @property
    def T(self) -> float:
        return self.interval[1]

    @property
    def length(self) -> float:
        return self.interval[1] - self.interval[0]

    @property
    def caputo_base(self) -> float:
        return self.t0 if self.base is None else self.base


@dataclass(frozen=True, eq=False)
class FuzzyTrajectory:
    h: float
    times: np.ndarray
    values: tuple[FuzzyNumber, ...]
    #: case used by the step leaving each node (one fewer than nodes)
    cases: tuple[GhCase, ...]
    plan: DiffPlan
    scheme: str

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> FuzzyNumber:
        return self.values[k]

    @property
    def levels(self) -> np.ndarray:
        return self.values[0].levels

    @property
    def lower(self) -> np.ndarray:
        return np.array([y.lower for y in self.values])

    @property
    def upper(self) -> np.ndarray:
        return np.array([y.upper for y in self.values])

    def as_function(self) -> SampledFunction:
        return SampledFunction(self.times, self.lower, self.upper, self.levels)


def euler_coefficient(h: float, alpha: float) -> float:
    return h**alpha / math.gamma(alpha + 1.0)


def step_count(interval: tuple[float, float], h: float) -> int:
    t0, T = interval
    if h <= 0:
        raise ValueError(f"step size must be positive: {h}")

    n = round((T - t0) / h)
    if n < 1 or abs(n * h - (T - t0)) > 1e-12 * max(1.0, abs(T)):
        raise ValueError(f"step size {h} does not divide the interval [{t0}, {T}]")
    return n


# }}}


# {{{ solver


def _attach(lo: np.ndarray, hi: np.ndarray, case: GhCase) -> tuple[np.ndarray, np.ndarray]:
    # case (ii) adds the increment crosswise: y (-) (-1) c f
    return (lo, hi) if case is GhCase.I else (hi, lo)


def _orientation_case(f_core: float, y_core: float, scale: float) -> GhCase:
    # the increment widens the solution when it pushes the core away from
    # zero, which is case (i); pulling it back towards zero is case (ii)
    tiny = 1e-14 * scale
    if abs(f_core) <= tiny or abs(y_core) <= tiny:
        return GhCase.I
    return GhCase.I if f_core * y_core > 0 else GhCase.II


def _plan_from_cases(times: np.ndarray, cases: Sequence[GhCase], indicators: Sequence[float]) -> DiffPlan:
    segments = []
    start = float(times[0])
    for k in range(1, len(cases)):
        if cases[k] is cases[k - 1]:
            continue

        # place the switch where the orientation indicator crosses zero
        s0, s1 = indicators[k - 1], indicators[k]
        theta = 1.0 if s0 == s1 else min(max(s0 / (s0 - s1), 0.0), 1.0)
        xi = float(times[k - 1] + theta * (times[k] - times[k - 1]))
        xi = min(max(xi, start + 1e-12), float(times[k]))

        segments.append(Segment(start, xi, cases[k - 1]))
        start = xi

    segments.append(Segment(start, float(times[-1]), cases[-1]))
    return DiffPlan(tuple(segments))


def resolve_plan(p: FFIVP, q: QuadratureSpec | None = None) -> DiffPlan | None:
    """The declared plan, the classification of the exact solution, or ``None`` for auto."""
    if isinstance(p.plan, DiffPlan):
        return p.plan
    if p.plan == "classify":
        if p.exact is None:
            raise UnsupportedError("classification needs the exact solution")
        return classify_differentiability(p.exact, p.caputo_base, p.interval, p.alpha, q)
    return None


def solve(
    p: FFIVP,
    h: float,
    *,
    scheme: str = "euler",
    plan: DiffPlan | str | None = None,
    q: QuadratureSpec | None = None,
) -> FuzzyTrajectory:
    """Integrate *p* with step *h*.

    :arg plan: overrides ``p.plan``.
    :raises StepInvalidError: when an update yields an invalid fuzzy number.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}, expected one of {SCHEMES}")
    if plan is not None:
        p = FFIVP(**{**p.__dict__, "plan": plan})

    n_steps = step_count(p.interval, h)
    times = p.t0 + h * np.arange(n_steps + 1)
    times[-1] = p.T

    declared = resolve_plan(p, q)
    c = euler_coefficient(h, p.alpha)
    levels = p.y0.levels

    y = p.y0
    values = [y]
    cases: list[GhCase] = []
    indicators: list[float] = []

    # memory scheme: per node f^-, f^+ and the core of f, starting with the
    # known history between the base point and the interval
    m, origin = 0, p.y0
    if scheme == "memory" and p.caputo_base < p.t0:
        if p.history is None:
            raise UnsupportedError("the memory scheme needs the history before the interval")
        m = step_count((p.caputo_base, p.t0), h)
        origin = resample(p.history(p.caputo_base), levels)

    total = m + n_steps
    f_lo = np.zeros((total, levels.size))
    f_hi = np.zeros((total, levels.size))
    f_core = np.zeros(total)
    hist_cases: list[GhCase] = []
    for j in range(m):
        tj = p.caputo_base + j * h
        f = resample(p.rhs(tj, resample(p.history(tj), levels)), levels)
        f_lo[j], f_hi[j], f_core[j] = f.lower, f.upper, f.core
        if declared is not None:
            hist_cases.append(declared.case_at(max(tj, p.t0)))
    b = np.diff(np.arange(total + 1, dtype=np.float64) ** p.alpha)

    for k in range(n_steps):
        f = resample(p.rhs(float(times[k]), y), levels)
        i = m + k
        f_lo[i], f_hi[i], f_core[i] = f.lower, f.upper, f.core

        if scheme == "euler":
            next_core = y.core + c * f.core
        else:
            w = b[i::-1]
            next_core = origin.core + c * (w @ f_core[: i + 1])

        scale = 1.0 + abs(next_core) + abs(c * f.core)
        indicators.append(f.core * next_core / scale**2)
        if declared is None:
            case = _orientation_case(f.core, next_core, scale)
        else:
            case = declared.case_at(float(times[k]))
        cases.append(case)

        if scheme == "euler":
            lo, hi = _attach(f.lower, f.upper, case)
            lower, upper = y.lower + c * lo, y.upper + c * hi
        else:
            if declared is None:
                attach = [_orientation_case(f_core[j], next_core, scale) for j in range(i + 1)]
            else:
                attach = hist_cases + cases
            crosswise = np.array([a is GhCase.II for a in attach])[:, None]
            lo = np.where(crosswise, f_hi[: i + 1], f_lo[: i + 1])
            hi = np.where(crosswise, f_lo[: i + 1], f_hi[: i + 1])
            # the starting value flips too once the core has crossed zero
            o_lo, o_hi = _attach(origin.lower, origin.upper, _orientation_case(origin.core, next_core, scale))
            lower = o_lo + c * (w @ lo)
            upper = o_hi + c * (w @ hi)

        y = FuzzyNumber(levels, lower, upper)
        report = validate(y, atol=1e-10)
        if not report:
            raise StepInvalidError(float(times[k]), report.level, report.reason)
        values.append(y)

    resolved = declared if declared is not None else _plan_from_cases(times, cases, indicators)
    return FuzzyTrajectory(h, times, tuple(values), tuple(cases), resolved, scheme)


# }}}


# {{{ errors and truncation bounds


def global_error(traj: FuzzyTrajectory, exact: FuzzyFunction) -> np.ndarray:
    """Hausdorff distance between iterates and the exact solution at every node."""
    return np.array([hausdorff_distance(exact(float(t)), y) for t, y in zip(traj.times, traj.values)])


def second_derivative_norm(
    p: FFIVP, t: np.ndarray, q: QuadratureSpec | None = None
) -> np.ndarray:
    """:math:`H(D^{2\\alpha} y(t), 0)` of the exact solution at the points *t*.

    Uses ``p.exact_derivative`` when given (one numerical derivative),
    otherwise samples :math:`D^\\alpha y` on a graded grid and applies the
    L1 rule to the samples (two chained derivatives).
    """
    a = p.caputo_base
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(t <= a):
        raise ValueError("the derivative is only defined to the right of the base point")

    if p.exact_derivative is not None:
        dy = p.exact_derivative
    elif p.exact is not None:
        if q is None:
            q = QuadratureSpec.default()
        qq = q.with_grading(max(q.grading, 2.0))
        s = qq.grid(a, float(t.max()), qq.node_count(float(t.max()) - a))[1:]
        samples = [p.exact.caputo_endpoints(a, float(x), p.alpha, q) for x in s]
        lower = np.array([lo for lo, _ in samples])
        upper = np.array([hi for _, hi in samples])
        # extend to the base point with the first sample
        dy = SampledFunction(
            np.concatenate([[a], s]),
            np.vstack([lower[:1], lower]),
            np.vstack([upper[:1], upper]),
            p.exact.levels,
        )
    else:
        raise UnsupportedError("truncation error needs the exact solution or its derivative")

    out = np.empty(t.size)
    for i, x in enumerate(t):
        lo, hi = dy.caputo_endpoints(a, float(x), p.alpha, q)
        out[i] = max(np.max(np.abs(lo)), np.max(np.abs(hi)))
    return out


_LTE_SAMPLES = (0.0, 0.5, 1.0)


def local_truncation_error(
    p: FFIVP,
    traj: FuzzyTrajectory,
    q: QuadratureSpec | None = None,
    *,
    samples: Sequence[float] = _LTE_SAMPLES,
) -> np.ndarray:
    r"""Bounds :math:`\bar\tau_k = h^{2\alpha - 1} M_k / \Gamma(2\alpha + 1)`.

    :math:`M_k` is the largest :math:`H(D^{2\alpha} y, 0)` over the points
    ``t_k + theta h`` for ``theta`` in *samples*. Points at the base point
    are moved inside by ``1e-3 h``.
    """
    h, alpha = traj.h, p.alpha
    a = p.caputo_base

    starts = traj.times[:-1]
    pts = np.array([[t + th * h for th in samples] for t in starts])
    pts = np.where(pts <= a, a + 1e-3 * h, pts)

    m = second_derivative_norm(p, pts.ravel(), q).reshape(pts.shape).max(axis=1)
    return h ** (2 * alpha - 1) / math.gamma(2 * alpha + 1) * m


# }}}


# {{{ Lipschitz estimate


@dataclass(frozen=True)
class LipschitzEstimate:
    #: largest sampled difference quotient, inflated
    upper: float
    #: smallest sampled difference quotient, deflated
    lower: float


def estimate_lipschitz(
    p: FFIVP,
    traj: FuzzyTrajectory,
    *,
    pairs: int = 200,
    max_nodes: int = 50,
    inflate: float = 1.2,
    seed: int = 0,
) -> LipschitzEstimate:
    """Sample difference quotients :math:`H(f(t, y), f(t, z)) / H(y, z)`.

    Pairs are drawn around each iterate, within a radius of a tenth of its
    size, at up to *max_nodes* evenly spaced nodes.
    """
    if p.lipschitz is not None:
        return LipschitzEstimate(p.lipschitz, p.lipschitz)

    rng = np.random.default_rng(seed)
    nodes = np.unique(np.linspace(0, len(traj) - 1, min(max_nodes, len(traj))).astype(int))

    hi, lo = 0.0, math.inf
    for k in nodes:
        t, yk = float(traj.times[k]), traj.values[k]
        r = yk.levels
        radius = 0.1 * max(1.0, norm(yk))

        # random triangular offsets (a, b, c), two per pair
        abc = np.sort(rng.uniform(-radius, radius, size=(pairs, 2, 3)), axis=-1)
        lower = abc[..., :1] + (abc[..., 1:2] - abc[..., :1]) * r
        upper = abc[..., 2:] - (abc[..., 2:] - abc[..., 1:2]) * r

        for i in range(pairs):
            y = FuzzyNumber(r, yk.lower + lower[i, 0], yk.upper + upper[i, 0])
            z = FuzzyNumber(r, yk.lower + lower[i, 1], yk.upper + upper[i, 1])
            d = hausdorff_distance(y, z)
            if d < 1e-12:
                continue

            ratio = hausdorff_distance(p.rhs(t, y), p.rhs(t, z)) / d
            hi, lo = max(hi, ratio), min(lo, ratio)

    if lo is math.inf:
        lo = 0.0
    return LipschitzEstimate(inflate * hi, lo / inflate)


# }}}


# {{{ convergence and stability


def convergence_bound(
    h: float, alpha: float, length: float, lipschitz: float, m2: float
) -> float:
    """Global error bound in terms of :math:`\\max_t H(D^{2\\alpha} y, 0)`."""
    g1 = math.gamma(alpha + 1)
    if lipschitz * length < 1e-12:
        # limit of (e^{l x} - 1) / l as l -> 0
        factor = length / g1
    else:
        factor = math.expm1(lipschitz * length / g1) / lipschitz

    return h**alpha * g1 / math.gamma(2 * alpha + 1) * factor * m2


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    error: float
    ratio: float | None
    bound: float

    @property
    def within_bound(self) -> bool:
        return self.error <= self.bound * (1 + 1e-9) + 1e-13


def convergence_study(
    p: FFIVP,
    h_list: Sequence[float],
    *,
    scheme: str = "euler",
    plan: DiffPlan | str | None = None,
    q: QuadratureSpec | None = None,
    seed: int = 0,
    bound_samples: int = 50,
) -> list[ConvergenceRow]:
    """Maximum node error for each step size, successive ratios and the bound."""
    if p.exact is None:
        raise UnsupportedError("convergence study needs the exact solution")

    a = p.caputo_base
    ts = np.linspace(p.t0, p.T, bound_samples + 1)
    ts = np.where(ts <= a, a + 1e-6 * p.length, ts)
    m2 = float(np.max(second_derivative_norm(p, ts, q)))

    trajectories = [solve(p, h, scheme=scheme, plan=plan, q=q) for h in h_list]
    # the Lipschitz constant belongs to the problem; sample it along the finest run
    finest = min(trajectories, key=lambda tr: tr.h)
    ell = estimate_lipschitz(p, finest, seed=seed).upper

    rows: list[ConvergenceRow] = []
    for h, traj in zip(h_list, trajectories):
        error = float(np.max(global_error(traj, p.exact)))
        ratio = rows[-1].error / error if rows and error > 0 else None
        rows.append(ConvergenceRow(h, error, ratio, convergence_bound(h, p.alpha, p.length, ell, m2)))

    return rows


@dataclass(frozen=True)
class StabilityResult:
    #: max_k H(z_k, y_k) / H(delta0, 0)
    max_ratio: float
    #: exp(l T / Gamma(alpha + 1))
    bound: float
    #: per-node distances H(z_k, y_k)
    distances: np.ndarray
    #: per-node bound of the one-step scheme, shrinking by exp(-c l_min)
    #: along case (ii) steps; ``None`` for the memory scheme
    contraction_bound: np.ndarray | None = field(default=None, repr=False)

    @property
    def holds(self) -> bool:
        return self.max_ratio <= self.bound * (1 + 1e-9)

    @property
    def contraction_holds(self) -> bool | None:
        if self.contraction_bound is None:
            return None
        return bool(np.all(self.distances <= self.contraction_bound * (1 + 1e-9) + 1e-15))


def _shifted(F: FuzzyFunction, delta0: FuzzyNumber) -> FuzzyFunction:
    d = resample(delta0, F.levels)

    def lower(t: np.ndarray, r: np.ndarray) -> np.ndarray:
        return F.endpoints(t[:, 0])[0] + d.lower

    def upper(t: np.ndarray, r: np.ndarray) -> np.ndarray:
        return F.endpoints(t[:, 0])[1] + d.upper

    return EndpointFunction(lower, upper, F.levels)


def stability_experiment(
    p: FFIVP,
    h: float,
    delta0: FuzzyNumber,
    delta: float | None = None,
    *,
    scheme: str = "euler",
    plan: DiffPlan | str | None = None,
    q: QuadratureSpec | None = None,
    seed: int = 0,
) -> StabilityResult:
    r"""Solve with ``y0`` and ``y0 + delta0`` and compare the trajectories.

    Both runs follow the plan of the unperturbed run. A known history before
    the interval is shifted by ``delta0`` as well. For the one-step scheme
    the distance also has to contract like :math:`e^{-c \ell k}` along
    case (ii) steps, with :math:`\ell` the smallest sampled quotient.
    """
    size = norm(delta0)
    if delta is None:
        delta = size
    if size > delta * (1 + 1e-12):
        raise ValueError(f"perturbation size {size} exceeds delta={delta}")

    base = solve(p, h, scheme=scheme, plan=plan, q=q)
    # the memory scheme attaches its history by the same rule in both runs
    same_plan = base.plan if scheme == "euler" else (plan if plan is not None else p.plan)
    changes: dict[str, object] = {"y0": add(p.y0, delta0), "plan": same_plan}
    if p.history is not None:
        changes["history"] = _shifted(p.history, delta0)
    perturbed = solve(FFIVP(**{**p.__dict__, **changes}), h, scheme=scheme, q=q)

    distances = np.array([hausdorff_distance(z, y) for z, y in zip(perturbed.values, base.values)])
    ell = estimate_lipschitz(p, base, seed=seed)
    bound = math.exp(ell.upper * p.length / math.gamma(p.alpha + 1))

    contraction = None
    if scheme == "euler":
        c = euler_coefficient(h, p.alpha)
        exponent = np.concatenate([[0.0], np.cumsum([
            -c * ell.lower if case is GhCase.II else c * ell.upper for case in base.cases
        ])])
        contraction = size * np.exp(exponent)

    ratio = float(np.max(distances) / delta) if delta > 0 else 0.0
    return StabilityResult(ratio, bound, distances, contraction)


# }}}


# {{{ report


@dataclass(frozen=True)
class SolveReport:
    trajectory: FuzzyTrajectory
    errors: np.ndarray | None
    truncation: np.ndarray | None
    convergence: list[ConvergenceRow] | None
    stability_constant: float


def analyze(
    p: FFIVP,
    h: float,
    *,
    h_list: Sequence[float] | None = None,
    scheme: str = "euler",
    q: QuadratureSpec | None = None,
    seed: int = 0,
) -> SolveReport:
    """Solve once and collect the error, truncation and stability figures."""
    traj = solve(p, h, scheme=scheme, q=q)

    errors = truncation = None
    if p.exact is not None:
        errors = global_error(traj, p.exact)
    if p.exact is not None or p.exact_derivative is not None:
        truncation = local_truncation_error(p, traj, q)

    rows = None
    if h_list is not None:
        rows = convergence_study(p, h_list, scheme=scheme, q=q, seed=seed)

    ell = estimate_lipschitz(p, traj, seed=seed).upper
    return SolveReport(
        traj, errors, truncation, rows, math.exp(ell * p.length / math.gamma(p.alpha + 1))
    )


# }}}
