"""Fuzzy numbers represented by their r-level intervals.

A fuzzy number is stored as two arrays of endpoints sampled on a grid of
membership levels ``0 = r_0 < ... < r_{M-1} = 1``. Triangular numbers
remember their ``(a, b, c)`` triple so that resampling stays exact.
"""

from __future__ import annotations

import enum
from collections.abc import Callable
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEFAULT_LEVELS = 11

# slack for rounding when checking ordering and nestedness
_ORDER_TOL = 1.0e-12


class FuzzyError(ValueError):
    """Base class for errors raised by the fuzzy arithmetic layer."""


class InvalidFuzzyNumberError(FuzzyError):
    pass


class GhDifferenceError(FuzzyError):
    """Neither branch of the generalized Hukuhara difference exists."""


class GhCase(enum.Enum):
    """Branch selector of the generalized Hukuhara difference."""

    I = "case_i"  # noqa: E741
    II = "case_ii"

    @property
    def other(self) -> GhCase:
        return GhCase.II if self is GhCase.I else GhCase.I


def level_grid(m: int = DEFAULT_LEVELS) -> np.ndarray:
    """Uniform grid of *m* membership levels on :math:`[0, 1]`."""
    if m < 2:
        raise ValueError(f"need at least two levels: {m}")
    return np.linspace(0.0, 1.0, m)


def _readonly(x: np.ndarray) -> np.ndarray:
    x = np.array(x, dtype=np.float64)
    x.flags.writeable = False
    return x


class ValidationReport(NamedTuple):
    ok: bool
    level: float | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class FuzzyNumber:
    """A fuzzy number sampled on a grid of membership levels.

    Construction does not validate; use :func:`validate` or
    :meth:`checked` when the endpoints come from untrusted arithmetic.
    """

    levels: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    #: closed-form ``(a, b, c)`` when the number is triangular
    tri: tuple[float, float, float] | None = None

    def __post_init__(self) -> None:
        levels = _readonly(self.levels)
        lower = _readonly(self.lower)
        upper = _readonly(self.upper)

        if levels.ndim != 1 or levels.size < 2:
            raise InvalidFuzzyNumberError("level grid must have at least two entries")
        if levels[0] != 0.0 or levels[-1] != 1.0 or np.any(np.diff(levels) <= 0):
            raise InvalidFuzzyNumberError(
                "level grid must increase strictly from 0 to 1"
            )
        if lower.shape != levels.shape or upper.shape != levels.shape:
            raise InvalidFuzzyNumberError(
                f"endpoint shapes {lower.shape}, {upper.shape} do not match "
                f"level grid {levels.shape}"
            )
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidFuzzyNumberError("endpoints must be finite")

        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    # {{{ views

    @property
    def size(self) -> int:
        return self.levels.size

    @property
    def core(self) -> float:
        """Midpoint of the level-1 interval."""
        return 0.5 * float(self.lower[-1] + self.upper[-1])

    @property
    def support(self) -> tuple[float, float]:
        return float(self.lower[0]), float(self.upper[0])

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def is_crisp(self, atol: float = _ORDER_TOL) -> bool:
        return bool(np.all(np.abs(self.upper - self.lower) <= atol))

    def checked(self) -> FuzzyNumber:
        report = validate(self)
        if not report:
            raise InvalidFuzzyNumberError(
                f"invalid fuzzy number at level r={report.level}: {report.reason}"
            )
        return self

    # }}}

    # {{{ operators

    def __add__(self, other: FuzzyNumber) -> FuzzyNumber:
        return add(self, other)

    def __rmul__(self, k: float) -> FuzzyNumber:
        return scalar_mul(k, self)

    def __neg__(self) -> FuzzyNumber:
        return scalar_mul(-1.0, self)

    def __repr__(self) -> str:
        if self.tri is not None:
            a, b, c = self.tri
            return f"FuzzyNumber.triangular({a!r}, {b!r}, {c!r})"
        return (
            f"FuzzyNumber(support=[{self.lower[0]:.6g}, {self.upper[0]:.6g}], "
            f"core=[{self.lower[-1]:.6g}, {self.upper[-1]:.6g}], M={self.size})"
        )

    # }}}


# {{{ construction


def triangular(
    a: float, b: float, c: float, levels: np.ndarray | int | None = None
) -> FuzzyNumber:
    """Triangular fuzzy number :math:`(a, b, c)` with :math:`a \\le b \\le c`."""
    if not (a <= b <= c):
        raise InvalidFuzzyNumberError(f"triangular number needs a <= b <= c: {(a, b, c)}")

    r = _as_levels(levels)
    return FuzzyNumber(
        levels=r,
        lower=a + (b - a) * r,
        upper=c - (c - b) * r,
        tri=(float(a), float(b), float(c)),
    )


def singleton(k: float, levels: np.ndarray | int | None = None) -> FuzzyNumber:
    return triangular(k, k, k, levels)


def from_endpoints(
    levels: np.ndarray, lower: np.ndarray, upper: np.ndarray
) -> FuzzyNumber:
    """Build a sampled number and check that it is a valid fuzzy number."""
    return FuzzyNumber(levels, lower, upper).checked()


def _as_levels(levels: np.ndarray | int | None) -> np.ndarray:
    if levels is None:
        return level_grid()
    if isinstance(levels, (int, np.integer)):
        return level_grid(int(levels))
    return np.asarray(levels, dtype=np.float64)


# }}}


# {{{ validation


def validate(u: FuzzyNumber, atol: float = _ORDER_TOL) -> ValidationReport:
    """Check endpoint ordering and nestedness of the level sets.

    The report names the first offending level.
    """
    scale = atol * (1.0 + max(np.max(np.abs(u.lower)), np.max(np.abs(u.upper))))

    crossed = np.nonzero(u.lower - u.upper > scale)[0]
    if crossed.size:
        i = crossed[0]
        return ValidationReport(
            False,
            float(u.levels[i]),
            f"lower endpoint {u.lower[i]:.6g} exceeds upper endpoint {u.upper[i]:.6g}",
        )

    lo = np.nonzero(np.diff(u.lower) < -scale)[0]
    hi = np.nonzero(np.diff(u.upper) > scale)[0]
    if lo.size or hi.size:
        i = min(lo[0] if lo.size else u.size, hi[0] if hi.size else u.size) + 1
        return ValidationReport(False, float(u.levels[i]), "level sets are not nested")

    return ValidationReport(True)


# }}}


# {{{ level grids


def resample(u: FuzzyNumber, levels: np.ndarray) -> FuzzyNumber:
    """Move *u* onto another level grid.

    Triangular numbers are resampled exactly, others by linear interpolation.
    """
    levels = np.asarray(levels, dtype=np.float64)
    if levels.shape == u.levels.shape and np.array_equal(levels, u.levels):
        return u
    if u.tri is not None:
        return triangular(*u.tri, levels=levels)

    return FuzzyNumber(
        levels,
        np.interp(levels, u.levels, u.lower),
        np.interp(levels, u.levels, u.upper),
    )


def align(u: FuzzyNumber, v: FuzzyNumber) -> tuple[FuzzyNumber, FuzzyNumber]:
    """Bring both operands onto the union of their level grids."""
    if u.levels.shape == v.levels.shape and np.array_equal(u.levels, v.levels):
        return u, v

    levels = np.union1d(u.levels, v.levels)
    return resample(u, levels), resample(v, levels)


# }}}


# {{{ arithmetic


def add(u: FuzzyNumber, v: FuzzyNumber) -> FuzzyNumber:
    u, v = align(u, v)
    tri = None
    if u.tri is not None and v.tri is not None:
        tri = (u.tri[0] + v.tri[0], u.tri[1] + v.tri[1], u.tri[2] + v.tri[2])

    return FuzzyNumber(u.levels, u.lower + v.lower, u.upper + v.upper, tri)


def scalar_mul(k: float, u: FuzzyNumber) -> FuzzyNumber:
    k = float(k)
    if k >= 0.0:
        lower, upper = k * u.lower, k * u.upper
    else:
        lower, upper = k * u.upper, k * u.lower

    tri = None
    if u.tri is not None:
        a, b, c = (k * x for x in u.tri)
        tri = (a, b, c) if k >= 0.0 else (c, b, a)

    return FuzzyNumber(u.levels, lower, upper, tri)


def gh_difference(u: FuzzyNumber, v: FuzzyNumber) -> tuple[FuzzyNumber, GhCase]:
    """Generalized Hukuhara difference :math:`u \\ominus_{gH} v`.

    :returns: the difference and the branch that produced it. The first
        branch wins when both exist.
    :raises GhDifferenceError: if neither branch gives a fuzzy number.
    """
    u, v = align(u, v)

    w = FuzzyNumber(u.levels, u.lower - v.lower, u.upper - v.upper, _tri_sub(u, v))
    if validate(w):
        return w, GhCase.I

    w = FuzzyNumber(u.levels, u.upper - v.upper, u.lower - v.lower, _tri_sub(u, v, swap=True))
    if validate(w):
        return w, GhCase.II

    raise GhDifferenceError("gH-difference does not exist for these operands")


def _tri_sub(
    u: FuzzyNumber, v: FuzzyNumber, *, swap: bool = False
) -> tuple[float, float, float] | None:
    if u.tri is None or v.tri is None:
        return None

    a, b, c = (x - y for x, y in zip(u.tri, v.tri))
    if swap:
        a, c = c, a

    return (a, b, c) if a <= b <= c else None


def hukuhara_sum(u: FuzzyNumber, v: FuzzyNumber, case: GhCase) -> FuzzyNumber:
    """Attach *v* to *u* according to *case*.

    ``case_i`` is the ordinary sum :math:`u \\oplus v`. ``case_ii`` is
    :math:`u \\ominus (-1) v`, which adds the endpoints of *v* crosswise.
    The result is not validated.
    """
    u, v = align(u, v)
    if case is GhCase.I:
        return add(u, v)

    return FuzzyNumber(u.levels, u.lower + v.upper, u.upper + v.lower)


def multiply(u: FuzzyNumber, v: FuzzyNumber, levels: np.ndarray | None = None) -> FuzzyNumber:
    """Interval product per level (smallest and largest of the four products).

    Products of triangular numbers are not linear in ``r``, so a finer
    *levels* grid can be requested.
    """
    if levels is not None:
        u, v = resample(u, levels), resample(v, levels)
    u, v = align(u, v)

    p = np.stack([
        u.lower * v.lower,
        u.lower * v.upper,
        u.upper * v.lower,
        u.upper * v.upper,
    ])
    return FuzzyNumber(u.levels, p.min(axis=0), p.max(axis=0))


def apply_monotone(
    f: Callable[[np.ndarray], np.ndarray],
    u: FuzzyNumber,
    *,
    increasing: bool | None = None,
) -> FuzzyNumber:
    """Map a monotone function over the level sets of *u*.

    :arg increasing: direction of *f* on the support of *u*. If not given
        it is inferred from the images of the support endpoints.
    """
    lo = np.asarray(f(u.lower), dtype=np.float64)
    hi = np.asarray(f(u.upper), dtype=np.float64)

    if increasing is None:
        increasing = bool(hi[0] >= lo[0])

    if increasing:
        return FuzzyNumber(u.levels, lo, hi)
    return FuzzyNumber(u.levels, hi, lo)


# }}}


# {{{ metric


def hausdorff_distance(u: FuzzyNumber, v: FuzzyNumber) -> float:
    u, v = align(u, v)
    return float(
        max(np.max(np.abs(u.lower - v.lower)), np.max(np.abs(u.upper - v.upper)))
    )


def norm(u: FuzzyNumber) -> float:
    """Distance to the crisp zero."""
    return float(max(np.max(np.abs(u.lower)), np.max(np.abs(u.upper))))


# }}}


# {{{ serialization


def to_csv(u: FuzzyNumber) -> str:
    rows = ["r,lower,upper"]
    rows.extend(
        f"{r:.6f},{lo:.6f},{hi:.6f}" for r, lo, hi in zip(u.levels, u.lower, u.upper)
    )
    return "\n".join(rows) + "\n"


def from_csv(text: str) -> FuzzyNumber:
    lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not lines or lines[0].replace(" ", "") != "r,lower,upper":
        raise FuzzyError("expected a header 'r,lower,upper'")

    data = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    if data.ndim != 2 or data.shape[1] != 3:
        raise FuzzyError("expected rows with three columns")

    return from_endpoints(data[:, 0], data[:, 1], data[:, 2])


# }}}
