"""Parameter-scan engine over reversal experiments.

A sweep evaluates ``run_experiment`` on a 1- or 2-axis grid.  Grid points
are independent pure functions of their parameters, so they may be
evaluated with any degree of thread parallelism; results are always
gathered back into row-major axis order, making the output (and any file
written from it) identical for serial and parallel execution.  Points that
violate the feasibility bound ``h * t_f >= pi`` are flagged, not fatal.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import product

import numpy as np

from .errors import FeasibilityError, ValidationError
from .protocol import ExperimentSpec, run_experiment

AXIS_NAMES = ("h", "d", "alpha", "N")

#: Default number of grid points on a continuous axis.
DEFAULT_AXIS_POINTS = 101
#: Default largest pulse count for an N axis.
DEFAULT_N_MAX = 21


@dataclass(frozen=True)
class Axis:
    """One sweep axis.

    For the continuous parameters (h, d, alpha) the grid is ``count``
    evenly spaced values on [start, stop].  For N the grid is every odd
    integer from start to stop and ``count`` must be omitted.
    """

    name: str
    start: float
    stop: float
    count: int | None = None

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValidationError(f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValidationError(f"axis {self.name}: bounds must be finite")
        if self.start > self.stop:
            raise ValidationError(f"axis {self.name}: start {self.start} > stop {self.stop}")
        if self.name == "N":
            lo, hi = self.start, self.stop
            if lo != int(lo) or hi != int(hi) or int(lo) % 2 == 0 or int(hi) % 2 == 0:
                raise ValidationError("axis N: bounds must be odd integers")
            if int(lo) < 1:
                raise ValidationError("axis N: bounds must be >= 1")
            if self.count is not None:
                raise ValidationError("axis N: count is implied by the odd-integer grid")
            if int(hi) - int(lo) < 2:
                raise ValidationError("axis N: need at least two odd values")
        else:
            if not isinstance(self.count, (int, np.integer)) or self.count < 2:
                raise ValidationError(f"axis {self.name}: count must be an integer >= 2")
            if self.name == "h" and self.start <= 0:
                raise ValidationError("axis h: values must be positive")
            if self.name in ("d", "alpha") and self.start < 0:
                raise ValidationError(f"axis {self.name}: values must be non-negative")

    def values(self) -> np.ndarray:
        if self.name == "N":
            return np.arange(int(self.start), int(self.stop) + 1, 2, dtype=np.int64)
        return np.linspace(float(self.start), float(self.stop), int(self.count))

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "start": self.start,
            "stop": self.stop,
            "count": None if self.count is None else int(self.count),
        }


@dataclass(frozen=True)
class SweepSpec:
    """Axes plus the fixed parameters shared by every grid point."""

    axes: tuple[Axis, ...]
    base: ExperimentSpec

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValidationError(f"sweeps support 1 or 2 axes, got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate sweep axis: {names}")
        if self.base.record_trajectory:
            raise ValidationError("sweeps do not record trajectories")

    def to_json_dict(self) -> dict:
        return {
            "axes": [a.to_json_dict() for a in self.axes],
            "fixed": self.base.to_json_dict(),
            "integrator": self.base.integrator.to_json_dict(),
        }


@dataclass(frozen=True)
class SweepResult:
    """Grid coordinates, probabilities, and per-point status markers.

    Rows are in row-major axis order (first axis outermost).  ``P`` is NaN
    at flagged points; ``status`` is ``"ok"`` or ``"infeasible"``.
    """

    spec: SweepSpec
    axis_values: tuple[np.ndarray, ...]
    coords: tuple[tuple[float, ...], ...]
    P: np.ndarray
    status: tuple[str, ...]

    def rows(self):
        """Yield (coords, P, status) per grid point, in output order."""
        for point, p, st in zip(self.coords, self.P, self.status):
            yield point, float(p), st


def _apply(base: ExperimentSpec, name: str, value) -> ExperimentSpec:
    if name == "N":
        return replace(base, N=int(value))
    return replace(base, params=replace(base.params, **{name: float(value)}))


def _evaluate(spec: ExperimentSpec) -> tuple[float, str]:
    try:
        result = run_experiment(spec)
    except FeasibilityError:
        return math.nan, "infeasible"
    return result.P_final, "ok"


def sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate the grid; ``workers > 1`` parallelizes over grid points."""
    if not isinstance(workers, (int, np.integer)) or workers < 1:
        raise ValidationError(f"workers must be an integer >= 1, got {workers!r}")
    axis_values = tuple(a.values() for a in spec.axes)
    names = [a.name for a in spec.axes]
    points = list(product(*axis_values))
    specs = []
    for point in points:
        one = spec.base
        for name, value in zip(names, point):
            one = _apply(one, name, value)
        specs.append(one)
    if workers == 1:
        outcomes = [_evaluate(s) for s in specs]
    else:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            outcomes = list(pool.map(_evaluate, specs))
    return SweepResult(
        spec=spec,
        axis_values=axis_values,
        coords=tuple(tuple(float(v) for v in point) for point in points),
        P=np.array([p for p, _ in outcomes]),
        status=tuple(st for _, st in outcomes),
    )


def compare_N(spec: SweepSpec, n_list, workers: int = 1) -> list[tuple[int, SweepResult]]:
    """One sweep per pulse count over the shared axis, aligned for output."""
    if len(spec.axes) != 1:
        raise ValidationError("compare_N requires a single shared axis")
    if spec.axes[0].name == "N":
        raise ValidationError("compare_N varies N itself; the shared axis must differ")
    n_list = list(n_list)
    if not n_list:
        raise ValidationError("n_list must not be empty")
    for n in n_list:
        if not isinstance(n, (int, np.integer)) or n < 1 or n % 2 == 0:
            raise ValidationError(f"pulse counts must be positive odd integers, got {n!r}")
    out = []
    for n in n_list:
        one = replace(spec, base=replace(spec.base, N=int(n)))
        out.append((int(n), sweep(one, workers=workers)))
    return out
