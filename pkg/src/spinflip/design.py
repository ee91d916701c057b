"""Inverse design of a single reversal pulse.

The polar angle is prescribed as the unique quintic theta(t) satisfying

    theta(0) = pi        theta(t_f) = 0
    theta'(0) = -h       theta'(t_f) = -h        (gamma = 1)
    theta''(0) = 0       theta''(t_f) = 0

and the drive frequency that realizes it with a constant transverse
amplitude h is

    omega(t) = -theta'' / (h sqrt(1 - (theta'/h)^2))
               + h cot(theta) sqrt(1 - (theta'/h)^2),

with the transverse phase on the principal branch
phi(t) = arcsin(theta'(t)/h), cos(phi) >= 0.  The design is feasible exactly
when the pulse area c = h * t_f is at least pi; c = pi degenerates to the
constant resonant pulse with omega identically 0.

Both omega terms are indeterminate at the pulse edges; evaluation is
delegated to a reorganized closed form (see ``_kernels``) that is finite and
stable on the whole closed interval, including the endpoints.  Note that for
pulse areas beyond c ~ 19.02 the prescribed angle overshoots the poles in the
interior and omega develops genuine interior poles; the designs exercised
here stay well below that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import FeasibilityError, ValidationError

#: Number of grid points used for the feasibility check of a solved design.
_FEASIBILITY_GRID = 2001


@dataclass(frozen=True)
class ThetaTrajectory:
    """Quintic polar-angle trajectory of one pulse.

    ``coefficients`` are the polynomial coefficients a_0..a_5 of theta(t) in
    ascending powers of t (t in units of t_0); ``h`` and ``t_f`` are the
    drive amplitude and duration the trajectory was designed for.
    """

    coefficients: tuple[float, ...]
    h: float
    t_f: float

    @property
    def c(self) -> float:
        """Pulse area h * t_f (gamma = 1)."""
        return self.h * self.t_f


def solve_theta(h: float, t_f: float) -> ThetaTrajectory:
    """Solve the six boundary conditions for the quintic trajectory.

    Raises ``FeasibilityError`` when ``h * t_f < pi`` (the minimum duration
    for a full reversal at amplitude h); the boundary case is accepted.
    """
    if not (isinstance(h, (int, float)) and math.isfinite(h) and h > 0):
        raise ValidationError(f"h must be a finite positive number, got {h!r}")
    if not (isinstance(t_f, (int, float)) and math.isfinite(t_f) and t_f > 0):
        raise ValidationError(f"t_f must be a finite positive number, got {t_f!r}")
    c = h * t_f
    if c < math.pi:
        min_tf = math.pi / h
        raise FeasibilityError(
            f"infeasible pulse: h*t_f = {c:.6g} < pi; "
            f"t_f must be >= {min_tf:.3f} t_0 at h = {h:.6g}",
            h=h,
            t_f=t_f,
            min_tf=min_tf,
        )
    # Solve in normalized time s = t/t_f, where the system is well
    # conditioned, then rescale the coefficients to t.
    lhs = np.array(
        [
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 2, 0, 0, 0],
            [1, 1, 1, 1, 1, 1],
            [0, 1, 2, 3, 4, 5],
            [0, 0, 2, 6, 12, 20],
        ],
        dtype=float,
    )
    rhs = np.array([math.pi, -c, 0.0, 0.0, -c, 0.0])
    b = np.linalg.solve(lhs, rhs)
    coeffs = tuple(float(b[j]) / t_f**j for j in range(6))
    traj = ThetaTrajectory(coefficients=coeffs, h=h, t_f=t_f)
    _check_rate_bound(traj)
    return traj


def _check_rate_bound(traj: ThetaTrajectory) -> None:
    """Dense-grid check that |theta'(t)| never exceeds the drive amplitude."""
    t = np.linspace(0.0, traj.t_f, _FEASIBILITY_GRID)
    _, d1, _ = theta_derivatives(traj, t)
    worst = float(np.max(np.abs(d1)))
    if worst > traj.h * (1.0 + 1e-9):
        raise FeasibilityError(
            f"design violates |theta'| <= h: max |theta'| = {worst:.6g} > h = {traj.h:.6g}",
            h=traj.h,
            t_f=traj.t_f,
            min_tf=math.pi / traj.h,
        )


def _check_time_range(t: np.ndarray, t_f: float) -> None:
    if t.size and (float(np.min(t)) < 0.0 or float(np.max(t)) > t_f):
        raise ValidationError(f"time outside [0, {t_f}]")


def theta_derivatives(traj: ThetaTrajectory, t):
    """Evaluate (theta, theta', theta'') at time(s) ``t`` by Horner's rule."""
    t_arr = np.asarray(t, dtype=float)
    _check_time_range(t_arr, traj.t_f)
    a = traj.coefficients
    val = a[5]
    d1 = 0.0
    d2 = 0.0
    for coef in (a[4], a[3], a[2], a[1], a[0]):
        d2 = d2 * t_arr + 2.0 * d1
        d1 = d1 * t_arr + val
        val = val * t_arr + coef
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(val), float(d1), float(d2)
    return val, d1, d2


def phi_of_t(traj: ThetaTrajectory, t):
    """Transverse drive phase phi = arcsin(theta'/h), principal branch."""
    _, d1, _ = theta_derivatives(traj, t)
    ratio = np.asarray(d1, dtype=float) / traj.h
    if float(np.max(np.abs(ratio))) > 1.0 + 1e-9:
        raise FeasibilityError(
            "design violated: |theta'| > h, no transverse phase exists",
            h=traj.h,
            t_f=traj.t_f,
            min_tf=math.pi / traj.h,
        )
    out = np.arcsin(np.clip(ratio, -1.0, 1.0))
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(out)
    return out


def _omega_eval(c: float, t_f: float, ff: float, t):
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    _check_time_range(t_arr, t_f)
    out = np.empty(t_arr.shape, dtype=float)
    _kernels.chirp_fill(c, t_f, ff, np.ascontiguousarray(t_arr.ravel()), out.ravel())
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(out[0])
    return out


def chirp_frequency(traj: ThetaTrajectory, t):
    """Designed drive frequency omega(t), finite on the closed interval."""
    return _omega_eval(traj.c, traj.t_f, 0.0, t)


@dataclass(frozen=True)
class PulseDesign:
    """One microwave pulse: trajectory plus its synthesized chirp.

    ``feedforward`` adds ``feedforward * cos(theta_ref(t))`` to the designed
    frequency (see ``dynamics.feedforward_chirp``).  The analytic endpoint
    values of the total frequency are stored on construction.
    """

    trajectory: ThetaTrajectory
    feedforward: float = 0.0
    omega_start: float = field(init=False)
    omega_end: float = field(init=False)

    def __post_init__(self):
        if not math.isfinite(self.feedforward):
            raise ValidationError(
                f"feedforward coefficient must be finite, got {self.feedforward!r}"
            )
        traj = self.trajectory
        object.__setattr__(
            self, "omega_start", _omega_eval(traj.c, traj.t_f, self.feedforward, 0.0)
        )
        object.__setattr__(
            self, "omega_end", _omega_eval(traj.c, traj.t_f, self.feedforward, traj.t_f)
        )

    @property
    def h(self) -> float:
        return self.trajectory.h

    @property
    def t_f(self) -> float:
        return self.trajectory.t_f

    def omega(self, t):
        """Total drive frequency (designed chirp plus feed-forward term)."""
        return _omega_eval(self.trajectory.c, self.t_f, self.feedforward, t)

    def with_feedforward(self, coefficient: float) -> "PulseDesign":
        return PulseDesign(trajectory=self.trajectory, feedforward=coefficient)

    def to_json_dict(self) -> dict:
        return {
            "h": self.h,
            "t_f": self.t_f,
            "coefficients": list(self.trajectory.coefficients),
            "feedforward": self.feedforward,
            "omega_start": self.omega_start,
            "omega_end": self.omega_end,
        }


def design_pulse(h: float, t_f: float, feedforward: float = 0.0) -> PulseDesign:
    """Solve the trajectory for (h, t_f) and wrap it as a pulse."""
    return PulseDesign(trajectory=solve_theta(h, t_f), feedforward=feedforward)


def sample_chirp(design: PulseDesign, n_samples: int) -> np.ndarray:
    """Uniform samples of (t, omega(t)) including both endpoints.

    Returns an array of shape (n_samples, 2).
    """
    if not isinstance(n_samples, (int, np.integer)) or n_samples < 2:
        raise ValidationError(f"n_samples must be an integer >= 2, got {n_samples!r}")
    t = np.linspace(0.0, design.t_f, int(n_samples))
    return np.column_stack([t, design.omega(t)])
