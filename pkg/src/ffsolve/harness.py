"""Experiment runner for the built-in problems and the check suites.

Every run writes plain CSV files with a two-line header, a comment echoing
the configuration and the column names, so outputs can be diffed against
stored golden files.
"""

from __future__ import annotations

import itertools
import math
import time
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ffsolve import golden, problems
from ffsolve.euler_solver import (
    SCHEMES,
    FFIVP,
    FuzzyTrajectory,
    StepInvalidError,
    convergence_study,
    global_error,
    local_truncation_error,
    solve,
    stability_experiment,
)
from ffsolve.frac_calc import (
    CrispFunction,
    QuadratureSpec,
    caputo_derivative,
    nested_rl_integral,
    rl_integral,
)
from ffsolve.fuzzy_core import (
    FuzzyNumber,
    hausdorff_distance,
    triangular,
)
from ffsolve.fuzzy_frac import DiffPlan

PLANS = ("declared", "auto", "classify")
SUITES = ("properties", "golden", "convergence", "stability")


# {{{ configuration


@dataclass(frozen=True)
class ExperimentConfig:
    example: int
    alphas: tuple[float, ...]
    hs: tuple[float, ...]
    levels: int = 11
    out: Path = Path("out")
    #: ``None`` picks the default scheme of the example
    scheme: str | None = None
    plan: str = "declared"
    seed: int = 0
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.example not in problems.EXAMPLES:
            raise ValueError(f"unknown example {self.example}, expected one of {problems.EXAMPLES}")
        if not self.alphas or any(not 0.0 < a <= 1.0 for a in self.alphas):
            raise ValueError(f"orders must lie in (0, 1]: {self.alphas}")
        if not self.hs or any(h <= 0 for h in self.hs):
            raise ValueError(f"step sizes must be positive: {self.hs}")
        if self.levels < 2:
            raise ValueError(f"need at least two levels: {self.levels}")
        if self.scheme is not None and self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.plan not in PLANS:
            raise ValueError(f"unknown plan {self.plan!r}, expected one of {PLANS}")
        object.__setattr__(self, "out", Path(self.out))

    @property
    def resolved_scheme(self) -> str:
        # the nonlinear example is tabulated with the memory scheme
        if self.scheme is not None:
            return self.scheme
        return "memory" if self.example == 4 else "euler"

    def header(self, alpha: float | None = None, h: float | None = None) -> str:
        parts = [f"example={self.example}"]
        if alpha is not None:
            parts.append(f"alpha={alpha:g}")
        if h is not None:
            parts.append(f"h={h:g}")
        parts += [f"levels={self.levels}", f"scheme={self.resolved_scheme}", f"plan={self.plan}"]
        return "# " + " ".join(parts)


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _write(path: Path, header: str, columns: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    lines = [header, ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


# }}}


# {{{ running the examples


def build_problem(example: int, alpha: float, h: float, levels: int = 11) -> FFIVP:
    """The problem as tabulated: the first two examples run ten steps."""
    if example in (1, 2):
        return problems.example(example, alpha, levels, T=10 * h)
    return problems.example(example, alpha, levels)


def _plan_arg(cfg: ExperimentConfig) -> str | None:
    return None if cfg.plan == "declared" else cfg.plan


def print_order(y: FuzzyNumber) -> tuple[float, float, float]:
    """``(lower0, mid, upper0)`` with the endpoints swapped when the core is negative.

    Negative multiples of a template triangle are listed in template order,
    so the endpoint coming from the template's left foot is printed first.
    """
    lo, hi = float(y.lower[0]), float(y.upper[0])
    if y.core < 0:
        lo, hi = hi, lo
    return lo, float(y.core), hi


def unscramble(triple: Sequence[float]) -> FuzzyNumber:
    """Inverse of :func:`print_order` for a triangular triple."""
    a, b, c = triple
    if a > c:
        a, c = c, a
    return triangular(a, b, c)


def table_rows(example: int, traj: FuzzyTrajectory) -> list[tuple[int, float, FuzzyNumber]]:
    """Rows ``(k, t_label, value)`` for ten printed iterates.

    The first two examples are labelled ``0.1 k`` while iterate ``k`` sits
    at ``k h``. The cosine example is listed at ``t = 1.1, ..., 2.0``;
    labels between nodes are interpolated linearly.
    """
    if example in (1, 2):
        return [(k, round(0.1 * k, 1), traj[k]) for k in range(1, min(11, len(traj)))]

    f = traj.as_function()
    rows = []
    for k, t in enumerate(golden.EXAMPLE3_TIMES, start=1):
        if t <= traj.times[-1] + 1e-12:
            rows.append((k, t, f(min(t, float(traj.times[-1])))))
    return rows


@dataclass
class RunResult:
    alpha: float
    h: float
    files: list[Path] = field(default_factory=list)
    error: str | None = None
    max_error: float | None = None
    trajectory: FuzzyTrajectory | None = None


def _run_one(cfg: ExperimentConfig, alpha: float, h: float) -> RunResult:
    p = build_problem(cfg.example, alpha, h, cfg.levels)
    stem = f"ex{cfg.example}_a{alpha:g}_h{h:g}"
    result = RunResult(alpha, h)

    try:
        traj = solve(p, h, scheme=cfg.resolved_scheme, plan=_plan_arg(cfg))
    except StepInvalidError as exc:
        result.error = str(exc)
        path = cfg.out / f"{stem}.csv"
        path.write_text(cfg.header(alpha, h) + f" status=step-invalid t={exc.t:.6g}\n")
        result.files.append(path)
        return result

    result.trajectory = traj
    if p.exact is not None:
        result.max_error = float(np.max(global_error(traj, p.exact)))

    if cfg.example != 4:
        path = cfg.out / f"{stem}.csv"
        _write(
            path,
            cfg.header(alpha, h),
            ("k", "t_label", "lower0", "mid", "upper0"),
            ((k, t, *print_order(y)) for k, t, y in table_rows(cfg.example, traj)),
        )
        result.files.append(path)

    path = cfg.out / f"{stem}_plot.csv"
    _write(
        path,
        cfg.header(alpha, h),
        ("t", "r", "lower", "upper"),
        (
            (float(t), float(r), float(lo), float(hi))
            for t, y in zip(traj.times, traj.values)
            for r, lo, hi in zip(y.levels, y.lower, y.upper)
        ),
    )
    result.files.append(path)
    return result


def _example4_error(traj: FuzzyTrajectory, p: FFIVP, level: float = 0.1) -> float:
    # error of the lower endpoint at t = 1 on level r, as tabulated
    y, exact = traj[-1], p.exact(float(traj.times[-1]))
    lo = np.interp(level, y.levels, y.lower)
    return float(abs(lo - np.interp(level, exact.levels, exact.lower)))


@dataclass
class RunSummary:
    results: list[RunResult]
    files: list[Path]

    @property
    def ok(self) -> bool:
        return all(r.error is None for r in self.results)


def run_example(cfg: ExperimentConfig) -> RunSummary:
    """Solve every ``(alpha, h)`` pair of *cfg* and write the output files."""
    cfg.out.mkdir(parents=True, exist_ok=True)
    grid = list(itertools.product(cfg.alphas, cfg.hs))

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(lambda ah: _run_one(cfg, *ah), grid))
    else:
        results = [_run_one(cfg, a, h) for a, h in grid]

    files = [f for r in results for f in r.files]

    if cfg.example == 4:
        path = cfg.out / "ex4_errors.csv"
        rows = []
        for alpha in cfg.alphas:
            prev = None
            for r in (r for r in results if r.alpha == alpha):
                if r.trajectory is None:
                    rows.append((f"{alpha:g}", f"{r.h:g}", "nan", "nan"))
                    continue
                err = _example4_error(r.trajectory, build_problem(4, alpha, r.h, cfg.levels))
                ratio = "" if prev is None else _fmt(prev / err)
                rows.append((f"{alpha:g}", f"{r.h:g}", f"{err:.6e}", ratio))
                prev = err
        _write(path, cfg.header(), ("alpha", "h", "error", "ratio"), rows)
        files.append(path)

    if cfg.example in (3, 4):
        files.append(write_switching_points(cfg.example, cfg.alphas, cfg.out, cfg.header()))

    return RunSummary(results, files)


def switching_points(example: int, alphas: Sequence[float]) -> list[tuple[float, float]]:
    if example == 3:
        return [(a, problems.cosine_switching_point(a)) for a in alphas]
    if example == 4:
        return [(a, problems.nonlinear_switching_point(a)) for a in alphas]
    raise ValueError(f"example {example} has no switching point")


def write_switching_points(example: int, alphas: Sequence[float], out: Path, header: str) -> Path:
    path = Path(out) / f"ex{example}_switching.csv"
    _write(path, header, ("alpha", "t_switch"), ((f"{a:g}", t) for a, t in switching_points(example, alphas)))
    return path


# }}}


# {{{ check suites


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    bound: float
    passed: bool

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{self.name} {self.measured:.6g} {self.bound:.6g} {verdict}"


def _below(name: str, measured: float, bound: float) -> Check:
    return Check(name, measured, bound, bool(measured <= bound))


def _power(k: int) -> Callable[[np.ndarray], np.ndarray]:
    return lambda s: np.asarray(s, dtype=np.float64) ** k


def _exact_rl_power(k: int, alpha: float, t: float) -> float:
    return math.gamma(k + 1) / math.gamma(k + 1 + alpha) * t ** (k + alpha)


SEMIGROUP_ORDERS = ((0.3, 0.5), (0.2, 0.7), (0.5, 0.5), (0.1, 0.1))


def check_semigroup(t: float = 1.0) -> Check:
    """Residual of ``I^a I^b s^k`` against the closed form of ``I^(a+b) s^k``."""
    q = QuadratureSpec(nodes=512, grading=2.0, adaptive=False)
    worst = 0.0
    for (a, b), k in itertools.product(SEMIGROUP_ORDERS, range(4)):
        lhs = float(nested_rl_integral(_power(k), 0.0, t, (b, a), q))
        worst = max(worst, abs(lhs - _exact_rl_power(k, a + b, t)))
    return _below("semigroup", worst, 1e-6)


def check_newton_leibniz(t: float = 1.0) -> Check:
    """``I^a D^a g = g - g(0)`` for the power functions."""
    q = QuadratureSpec(nodes=512, grading=2.0, adaptive=False)
    worst = 0.0
    for alpha, k in itertools.product((0.3, 0.5, 0.8), (1, 2, 3)):
        g = CrispFunction(_power(k), lambda s, k=k: k * np.asarray(s, dtype=np.float64) ** (k - 1))

        def d(s: np.ndarray, g: CrispFunction = g, alpha: float = alpha) -> np.ndarray:
            return np.array([caputo_derivative(g, 0.0, float(x), alpha) if x > 0 else 0.0 for x in s])

        value = float(nested_rl_integral(d, 0.0, t, (alpha,), q))
        worst = max(worst, abs(value - t**k))
    return _below("newton_leibniz", worst, 1e-6)


def check_metric_axioms(count: int = 1000, seed: int = 0) -> Check:
    """Identity, symmetry and triangle inequality of the Hausdorff distance.

    Identity and symmetry are checked exactly.
    """
    rng = np.random.default_rng(seed)

    def draw() -> FuzzyNumber:
        return triangular(*np.sort(rng.uniform(-5, 5, size=3)))

    violations = 0
    for _ in range(count):
        u, v, w = draw(), draw(), draw()
        duv = hausdorff_distance(u, v)
        violations += hausdorff_distance(u, u) != 0.0
        violations += duv != hausdorff_distance(v, u)
        via = hausdorff_distance(u, w) + hausdorff_distance(w, v)
        # the sum on the right is rounded, allow a few units in the last place
        violations += duv > via + 4 * np.finfo(float).eps * via
        violations += (duv == 0.0) != bool(np.array_equal(u.lower, v.lower) and np.array_equal(u.upper, v.upper))
    return Check("metric_axioms", float(violations), 0.0, violations == 0)


def check_reversal(alpha: float = 0.6, a: float = 0.2, t: float = 0.9) -> Check:
    """Reversed-limit integral of a case (i) function against the case (ii) form.

    Integrates the endpoint derivatives of the exact solutions of the first
    two examples by quadrature from *t* down to *a* and compares with the
    endpoint differences and with ``(-1)`` times the crossed integral.
    """
    q = QuadratureSpec(nodes=2048, adaptive=False)
    worst = 0.0
    for p in (problems.constant_forcing(alpha), problems.linear_decay(alpha)):
        F = p.exact
        assert F is not None

        def dF(s: np.ndarray, F=F) -> np.ndarray:
            eps = 1e-6
            return (F.stacked(s + eps) - F.stacked(s - eps)) / (2 * eps)

        forward = rl_integral(dF, a, t, 1.0, q)
        reversed_i = -forward
        crossed_ii = forward[::-1]
        start, end = F(a), F(t)
        worst = max(
            worst,
            float(np.max(np.abs(reversed_i[0] - (start.lower - end.lower)))),
            float(np.max(np.abs(reversed_i[1] - (start.upper - end.upper)))),
            float(np.max(np.abs(reversed_i - (-crossed_ii)[::-1]))),
        )
    return _below("reversal", worst, 1e-6)


LTE_ALPHAS = (0.6, 0.8, 0.9)
LTE_STEPS = (0.1, 0.05, 0.025, 0.0125)


def lte_slope(alpha: float, hs: Sequence[float] = LTE_STEPS) -> float:
    """Log-log slope of the largest truncation bound against the step size."""
    p = problems.linear_decay(alpha)
    q = QuadratureSpec(nodes=256, adaptive=False)
    peaks = [float(np.max(local_truncation_error(p, solve(p, h), q))) for h in hs]
    return float(np.polyfit(np.log(hs), np.log(peaks), 1)[0])


def check_lte_slopes() -> list[Check]:
    checks = []
    for alpha in LTE_ALPHAS:
        slope, expected = lte_slope(alpha), 2 * alpha - 1
        deviation = abs(slope - expected) / expected
        checks.append(_below(f"lte_slope_a{alpha:g}", deviation, 0.1))
    return checks


CONVERGENCE_CASES = ((1, 0.6), (1, 0.9), (2, 0.6), (2, 0.9), (3, 0.8))
CONVERGENCE_STEPS = (0.2, 0.1, 0.05, 0.02)


def _convergence_problem(n: int, alpha: float) -> FFIVP:
    return problems.example(n, alpha)


def check_convergence_bounds(scheme: str = "euler") -> list[Check]:
    """Largest error over the step sizes against the global error bound.

    The one-step scheme runs its declared plan; the memory scheme attaches
    each history term by orientation.
    """
    plan = None if scheme == "euler" else "auto"
    checks = []
    for n, alpha in CONVERGENCE_CASES:
        p = _convergence_problem(n, alpha)
        try:
            rows = convergence_study(p, CONVERGENCE_STEPS, scheme=scheme, plan=plan)
        except StepInvalidError:
            checks.append(Check(f"convergence_bound_{scheme}_ex{n}_a{alpha:g}", math.inf, 0.0, False))
            continue
        # report the worst row as error minus bound
        excess = max(r.error - r.bound for r in rows)
        checks.append(_below(f"convergence_bound_{scheme}_ex{n}_a{alpha:g}", excess, 1e-13))
    return checks


STABILITY_CASES = ((1, 0.6, 0.1), (2, 0.6, 0.02), (2, 0.9, 0.02), (3, 0.8, 0.02))


def check_stability(scheme: str = "euler") -> list[Check]:
    plan = None if scheme == "euler" else "auto"
    delta0 = triangular(0.0, 0.05, 0.1)
    checks = []
    for n, alpha, h in STABILITY_CASES:
        p = problems.example(n, alpha)
        r = stability_experiment(p, h, delta0, scheme=scheme, plan=plan)
        name = f"stability_{scheme}_ex{n}_a{alpha:g}"
        checks.append(_below(name, r.max_ratio, r.bound * (1 + 1e-9)))
        if r.contraction_holds is not None:
            excess = float(np.max(r.distances - r.contraction_bound))  # type: ignore[operator]
            checks.append(_below(f"{name}_contraction", excess, 1e-15))
    return checks


def check_golden_iterates() -> list[Check]:
    checks = []
    for n, table in ((1, golden.EXAMPLE1_ITERATES), (2, golden.EXAMPLE2_ITERATES)):
        for (alpha, h), rows in table.items():
            traj = solve(build_problem(n, alpha, h), h)
            worst = max(
                abs(x - y)
                for (k, _, value), row in zip(table_rows(n, traj), rows)
                for x, y in zip(print_order(value), row)
            )
            checks.append(_below(f"golden_ex{n}_a{alpha:g}_h{h:g}", worst, 1e-4))
    return checks


def example3_rows(
    h: float, plan: DiffPlan | str | None = None, scheme: str = "euler"
) -> list[tuple[float, float, float]]:
    p = problems.cosine(0.8)
    traj = solve(p, h, scheme=scheme, plan=plan)
    return [print_order(y) for _, _, y in table_rows(3, traj)]


def check_golden_example3() -> list[Check]:
    checks = []
    for h, rows in golden.EXAMPLE3_ROWS.items():
        name = f"golden_ex3_h{h:g}"
        try:
            computed = example3_rows(h)
        except StepInvalidError:
            checks.append(Check(name, math.inf, 5e-4, False))
            continue
        worst = max(abs(x - y) for c, r in zip(computed, rows) for x, y in zip(c, r))
        checks.append(_below(name, worst, 5e-4))

    t_switch = problems.cosine_switching_point(0.8)
    checks.append(_below("switching_ex3", abs(t_switch - golden.EXAMPLE3_SWITCHING_POINT), 1e-3))
    return checks


def check_golden_switching() -> list[Check]:
    return [
        _below(f"switching_ex4_a{a:g}", abs(t - golden.EXAMPLE4_SWITCHING_POINTS[a]), 5e-4)
        for a, t in switching_points(4, tuple(golden.EXAMPLE4_SWITCHING_POINTS))
    ]


def example4_errors(alpha: float, hs: Sequence[float]) -> list[float]:
    out = []
    for h in hs:
        p = problems.nonlinear(alpha)
        out.append(_example4_error(solve(p, h, scheme="memory"), p))
    return out


def check_example4() -> list[Check]:
    checks = []
    alphas = sorted({a for a, _ in golden.EXAMPLE4_ERRORS})
    hs = sorted({h for _, h in golden.EXAMPLE4_ERRORS}, reverse=True)
    for alpha in alphas:
        errors = example4_errors(alpha, hs)
        for h, err in zip(hs, errors):
            if (alpha, h) == golden.EXAMPLE4_SUSPECT_CELL:
                continue
            ref = golden.EXAMPLE4_ERRORS[alpha, h]
            checks.append(_below(f"ex4_error_a{alpha:g}_N{round(1 / h)}", abs(err - ref) / ref, 0.15))
        for (h0, e0), (h1, e1) in itertools.pairwise(zip(hs, errors)):
            ratio = e0 / e1
            name = f"ex4_ratio_a{alpha:g}_N{round(1 / h1)}"
            checks.append(Check(name, ratio, 2.3, bool(1.6 <= ratio <= 2.3)))
    return checks


def run_suite(which: str) -> list[Check]:
    """Run one check suite; failures are entries, never exceptions."""
    if which == "properties":
        checks = [check_semigroup(), check_newton_leibniz(), check_metric_axioms(), check_reversal()]
        checks += check_lte_slopes()
        checks += check_convergence_bounds("euler")
        checks += check_convergence_bounds("memory")
        return checks
    if which == "golden":
        return check_golden_iterates() + check_golden_example3() + check_golden_switching()
    if which == "convergence":
        return check_example4()
    if which == "stability":
        return check_stability("euler") + check_stability("memory")
    raise ValueError(f"unknown suite {which!r}, expected one of {SUITES}")


def report(checks: Sequence[Check]) -> str:
    return "\n".join(c.line() for c in checks)


# }}}


def timed(fn: Callable[[], object]) -> tuple[object, float]:
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


__all__ = [
    "PLANS",
    "SUITES",
    "Check",
    "ExperimentConfig",
    "RunResult",
    "RunSummary",
    "build_problem",
    "print_order",
    "report",
    "run_example",
    "run_suite",
    "switching_points",
    "table_rows",
    "unscramble",
]
