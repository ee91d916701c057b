"""Rotating-frame LLG dynamics of the driven macrospin.

The unit magnetization s obeys

    ds/dt = s x H - alpha * s x (s x H),        (gamma = 1)

with the rotating-frame effective field

    H = 2 d s_z e_z + h (cos(phi_k) e_x - sin(phi_k) e_y) + omega(t) e_z.

A carrier phase advance ``phi_k`` of the drive appears in this co-rotating
frame with conjugate sense, hence the ``-sin(phi_k)`` component; this is the
orientation for which the composite sequences actually suppress the
anisotropy error (flipping it degrades them).  The damping torque acts on
the full effective field above, including the kinematic ``omega e_z`` term.

The primary integrator is a fixed-step classical RK4 in Cartesian
components, renormalizing ``|s|`` on a configurable cadence; it has no
coordinate singularities.  The reduced spherical form

    theta' = h sin(phi + phi_k) - alpha d sin(2 theta)
    phi'   = -2 d cos(theta) - omega(t) + h cos(phi + phi_k) cot(theta)

keeps damping only in its anisotropy term and is therefore an exact
cross-check of the Cartesian system at alpha = 0 only; it is integrated
here with an adaptive high-order scheme as an independent verification
route (``integrate_spherical``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import _kernels
from .composite import CompositeSequence
from .design import PulseDesign, ThetaTrajectory, theta_derivatives
from .errors import IntegrationError, ValidationError

_POLE_GUARD = 1e-8


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings for one pulse.

    ``step_count`` is the number of RK4 steps per pulse (at least 1000 for
    the accuracy floor), ``renormalize_every`` the renormalization cadence
    in steps, and ``max_samples_per_pulse`` caps trajectory recording.
    """

    step_count: int = 20000
    renormalize_every: int = 1
    scheme: str = "rk4"
    max_samples_per_pulse: int = 2000

    def __post_init__(self):
        if not isinstance(self.step_count, (int, np.integer)) or self.step_count < 1000:
            raise ValidationError(
                f"step_count must be an integer >= 1000, got {self.step_count!r}"
            )
        if (
            not isinstance(self.renormalize_every, (int, np.integer))
            or self.renormalize_every < 1
        ):
            raise ValidationError(
                f"renormalize_every must be an integer >= 1, got {self.renormalize_every!r}"
            )
        if self.scheme != "rk4":
            raise ValidationError(f"unsupported scheme {self.scheme!r}; only 'rk4'")
        if (
            not isinstance(self.max_samples_per_pulse, (int, np.integer))
            or self.max_samples_per_pulse < 2
        ):
            raise ValidationError(
                "max_samples_per_pulse must be an integer >= 2, "
                f"got {self.max_samples_per_pulse!r}"
            )

    def to_json_dict(self) -> dict:
        return {
            "step_count": int(self.step_count),
            "renormalize_every": int(self.renormalize_every),
            "scheme": self.scheme,
            "max_samples_per_pulse": int(self.max_samples_per_pulse),
        }


@dataclass(frozen=True)
class Trajectory:
    """Recorded states of a protocol run.

    ``times`` are global (units t_0, strictly increasing, starting at 0 and
    ending at the total duration), ``states`` the matching unit spins, and
    ``pulse_index`` the one-based pulse each sample belongs to.
    ``max_norm_drift`` is the largest pre-renormalization ``|1 - |s||``
    observed anywhere in the run.
    """

    times: np.ndarray
    states: np.ndarray
    pulse_index: np.ndarray
    max_norm_drift: float

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValidationError("trajectory times must be strictly increasing")
        for arr in (self.times, self.states, self.pulse_index):
            arr.setflags(write=False)

    def spherical(self) -> tuple[np.ndarray, np.ndarray]:
        """Polar/azimuthal echo of the recorded states."""
        theta = np.arccos(np.clip(self.states[:, 2], -1.0, 1.0))
        phi = np.arctan2(self.states[:, 1], self.states[:, 0])
        return theta, phi


def effective_field(s, t_local: float, pulse: PulseDesign, phi_k: float = 0.0, d: float = 0.0):
    """Rotating-frame field sample at local pulse time ``t_local``."""
    s = np.asarray(s, dtype=float)
    omega = pulse.omega(t_local)
    h = pulse.h
    return np.array(
        [h * math.cos(phi_k), -h * math.sin(phi_k), 2.0 * d * float(s[2]) + omega]
    )


def llg_rhs(s, H, alpha: float = 0.0):
    """Time derivative of the unit spin for a given field sample."""
    s = np.asarray(s, dtype=float)
    H = np.asarray(H, dtype=float)
    torque = np.cross(s, H)
    if alpha != 0.0:
        torque = torque - alpha * np.cross(s, torque)
    return torque


def _as_unit_spin(s0) -> np.ndarray:
    s = np.array(s0, dtype=float).reshape(3)
    norm = float(np.linalg.norm(s))
    if not math.isfinite(norm) or abs(norm - 1.0) > 1e-6:
        raise ValidationError(f"initial spin must be a unit vector, |s| = {norm!r}")
    return s / norm


def _record_steps(n_steps: int, max_samples: int) -> np.ndarray:
    """Step indices 0..n_steps to record, capped at max_samples entries."""
    stride = max(1, math.ceil(n_steps / (max_samples - 1)))
    steps = list(range(0, n_steps, stride))
    steps.append(n_steps)
    return np.asarray(steps, dtype=np.int64)


def _run_pulses(
    s0,
    pulse: PulseDesign,
    phases,
    d: float,
    alpha: float,
    config: IntegratorConfig | None,
    record: bool,
    h_override: float | None = None,
    omega_override: float | None = None,
):
    """Chain the RK4 kernel over the given phases.

    Returns ``(s_final, trajectory_or_None, max_norm_drift)``.  The
    overrides replace the drive amplitude and freeze the frequency; they
    exist for diagnostics (zero-drive and constant-field checks) and are not
    used by the protocol layer.
    """
    if config is None:
        config = IntegratorConfig()
    if not (isinstance(d, (int, float)) and math.isfinite(d) and d >= 0.0):
        raise ValidationError(f"d must be a finite non-negative number, got {d!r}")
    if not (isinstance(alpha, (int, float)) and math.isfinite(alpha) and alpha >= 0.0):
        raise ValidationError(f"alpha must be a finite non-negative number, got {alpha!r}")
    s = _as_unit_spin(s0)
    n_steps = int(config.step_count)
    t_f = pulse.t_f
    dt = t_f / n_steps
    h_drive = pulse.h if h_override is None else float(h_override)
    use_const = omega_override is not None
    const_omega = float(omega_override) if use_const else 0.0
    c = pulse.trajectory.c
    ff = pulse.feedforward

    rec_steps = _record_steps(n_steps, int(config.max_samples_per_pulse))
    empty_steps = np.empty(0, dtype=np.int64)
    empty_out = np.empty((0, 3), dtype=float)

    times_chunks = []
    state_chunks = []
    index_chunks = []
    max_drift = 0.0
    for k, phi_k in enumerate(phases, start=1):
        hx = h_drive * math.cos(phi_k)
        hy = -h_drive * math.sin(phi_k)
        if record:
            steps = rec_steps if k == 1 else rec_steps[1:]
            out = np.empty((steps.shape[0], 3), dtype=float)
        else:
            steps, out = empty_steps, empty_out
        status, bad_step, drift = _kernels.rk4_pulse(
            s,
            t_f,
            n_steps,
            int(config.renormalize_every),
            hx,
            hy,
            float(d),
            float(alpha),
            c,
            ff,
            use_const,
            const_omega,
            steps,
            out,
        )
        if status != 0:
            raise IntegrationError(
                f"non-finite state in pulse {k} after step {bad_step} "
                f"(t = {(k - 1) * t_f + bad_step * dt:.6g} t_0)",
                step_index=int(bad_step),
                pulse_number=k,
            )
        max_drift = max(max_drift, float(drift))
        if record:
            times_chunks.append((k - 1) * t_f + steps * dt)
            state_chunks.append(out)
            index_chunks.append(np.full(steps.shape[0], k, dtype=np.int64))

    trajectory = None
    if record:
        trajectory = Trajectory(
            times=np.concatenate(times_chunks),
            states=np.concatenate(state_chunks),
            pulse_index=np.concatenate(index_chunks),
            max_norm_drift=max_drift,
        )
    return s, trajectory, max_drift


def integrate_pulse(
    s0,
    pulse: PulseDesign,
    phi_k: float = 0.0,
    d: float = 0.0,
    alpha: float = 0.0,
    config: IntegratorConfig | None = None,
    record: bool = False,
    *,
    h_override: float | None = None,
    omega_override: float | None = None,
):
    """Integrate one pulse from ``s0``; returns (final state, trajectory)."""
    s, traj, _ = _run_pulses(
        s0, pulse, [phi_k], d, alpha, config, record, h_override, omega_override
    )
    return s, traj


def integrate_sequence(
    s0,
    sequence: CompositeSequence,
    d: float = 0.0,
    alpha: float = 0.0,
    config: IntegratorConfig | None = None,
    record: bool = False,
):
    """Integrate a composite protocol, chaining the final state of each
    pulse into the next; trajectory times are global across the sequence."""
    s, traj, _ = _run_pulses(s0, sequence.pulse, sequence.phases, d, alpha, config, record)
    return s, traj


def spherical_rhs(
    state,
    t_local: float,
    pulse: PulseDesign,
    phi_k: float = 0.0,
    d: float = 0.0,
    alpha: float = 0.0,
):
    """Reduced (theta, phi) derivatives; exact vs. the Cartesian system at
    alpha = 0.  Raises near the poles, where cot(theta) is singular."""
    theta, phi = float(state[0]), float(state[1])
    if not (_POLE_GUARD < theta < math.pi - _POLE_GUARD):
        raise ValidationError(
            f"theta = {theta!r} is within {_POLE_GUARD} of a pole; "
            "the spherical form is singular there"
        )
    h = pulse.h
    omega = pulse.omega(t_local)
    rel = phi + phi_k
    d_theta = h * math.sin(rel) - alpha * d * math.sin(2.0 * theta)
    d_phi = -2.0 * d * math.cos(theta) - omega + h * math.cos(rel) / math.tan(theta)
    return d_theta, d_phi


def integrate_spherical(
    state0,
    pulse: PulseDesign,
    phi_k: float = 0.0,
    d: float = 0.0,
    alpha: float = 0.0,
    t_eval=None,
    rtol: float = 1e-11,
    atol: float = 1e-13,
):
    """Adaptive integration of the reduced form over one pulse.

    Returns ``(times, theta, phi)``.  This is the independent cross-check
    route; production runs use the Cartesian RK4.
    """
    if t_eval is None:
        t_eval = np.linspace(0.0, pulse.t_f, 201)

    def rhs(t, y):
        return spherical_rhs(y, t, pulse, phi_k=phi_k, d=d, alpha=alpha)

    sol = solve_ivp(
        rhs,
        (0.0, pulse.t_f),
        [float(state0[0]), float(state0[1])],
        t_eval=np.asarray(t_eval, dtype=float),
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise IntegrationError(f"spherical integration failed: {sol.message}")
    return sol.t, sol.y[0], sol.y[1]


def feedforward_chirp(
    trajectory: ThetaTrajectory, d: float, coefficient: float | None = None
) -> PulseDesign:
    """Pulse whose frequency adds a term cancelling the axial anisotropy.

    The total frequency becomes ``omega(t) + coefficient * cos(theta_ref(t))``
    with ``coefficient = -2 d`` by default, which removes the anisotropy
    term from the azimuthal equation along the reference trajectory (the
    cancellation is exact there: with it, the reversal is again perfect at
    alpha = 0 for any d).  The coefficient is exposed because other
    conventions for the cancelling drive are in circulation.
    """
    if coefficient is None:
        coefficient = -2.0 * float(d)
    return PulseDesign(trajectory=trajectory, feedforward=float(coefficient))


def reference_theta(trajectory: ThetaTrajectory, t):
    """Designed polar angle theta_ref(t) (convenience wrapper)."""
    theta, _, _ = theta_derivatives(trajectory, t)
    return theta
