"""Material parameters, nondimensionalization, and Bloch-sphere coordinates.

Everything downstream of this module computes in dimensionless units: fields
are measured in units of the anisotropy field scale ``h_0``, times in units of
``t_0 = 1/(gamma * h_0)``, and the gyromagnetic ratio is normalized to 1.
Physical (SI) quantities appear only at the conversion boundary provided here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ValidationError

#: Vacuum permeability, T m / A (SI defined value at the precision used here).
MU_0 = 4.0e-7 * math.pi


def _require_positive(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be a finite positive number, got {value!r}")


def _require_nonnegative(name: str, value: float) -> None:
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
        raise ValidationError(f"{name} must be a finite non-negative number, got {value!r}")


@dataclass(frozen=True)
class MaterialParams:
    """Physical constants of a single-domain uniaxial nanomagnet.

    Parameters
    ----------
    gamma : float
        Gyromagnetic ratio, 1/(T s).
    K : float
        Uniaxial anisotropy constant, J/m^3.
    V : float
        Particle volume, m^3.
    Ms : float
        Saturation magnetization, A/m.
    mu_s : float
        Magnetic moment at saturation, J/T.
    h0_override : float or None
        Optional pinned value (in T) for the field scale.  When set, it
        replaces the ``2K/(mu_0 Ms)`` formula value in all derived scales.
        Literature values for nominally identical particles vary with the
        unit convention used for the anisotropy field, so the scale can be
        pinned explicitly.
    """

    gamma: float
    K: float
    V: float
    Ms: float
    mu_s: float
    h0_override: float | None = None

    def __post_init__(self):
        _require_positive("gamma", self.gamma)
        _require_positive("K", self.K)
        _require_positive("V", self.V)
        _require_positive("Ms", self.Ms)
        _require_positive("mu_s", self.mu_s)
        if self.h0_override is not None:
            _require_positive("h0_override", self.h0_override)


def cobalt_nanoparticle(h0_override: float | None = None) -> MaterialParams:
    """Typical parameters for a 3-nm-diameter cobalt nanoparticle."""
    return MaterialParams(
        gamma=1.76e11,
        K=2.2e5,
        V=14.1e-27,
        Ms=1.44e6,
        mu_s=2.36e-20,
        h0_override=h0_override,
    )


def derive_scales(material: MaterialParams) -> tuple[float, float]:
    """Field and time scales (h_0, t_0) for the given material.

    ``h_0 = 2K/(mu_0 Ms)`` unless the material pins ``h0_override``; the time
    scale is ``t_0 = 1/(gamma h_0)`` in seconds.
    """
    if material.h0_override is not None:
        h0 = material.h0_override
    else:
        h0 = 2.0 * material.K / (MU_0 * material.Ms)
    return h0, 1.0 / (material.gamma * h0)


@dataclass(frozen=True)
class DimensionlessParams:
    """Reduced parameter set consumed by the dynamics modules.

    ``h`` is the drive amplitude in units of h_0, ``d`` the anisotropy field
    in units of h_0, ``alpha`` the dimensionless damping, and ``t_f`` the
    single-pulse duration in units of t_0.  In these units gamma = 1.
    """

    h: float
    d: float = 0.0
    alpha: float = 0.0
    t_f: float = 100.0

    def __post_init__(self):
        _require_positive("h", self.h)
        _require_nonnegative("d", self.d)
        _require_nonnegative("alpha", self.alpha)
        _require_positive("t_f", self.t_f)

    @classmethod
    def from_physical(
        cls,
        material: MaterialParams,
        h_tesla: float,
        t_f_seconds: float,
        d: float = 0.0,
        alpha: float = 0.0,
    ) -> "DimensionlessParams":
        """Convert a physical drive amplitude (T) and duration (s)."""
        h0, t0 = derive_scales(material)
        return cls(h=h_tesla / h0, d=d, alpha=alpha, t_f=t_f_seconds / t0)

    def to_physical(self, material: MaterialParams) -> tuple[float, float]:
        """Return (drive amplitude in T, pulse duration in s)."""
        h0, t0 = derive_scales(material)
        return self.h * h0, self.t_f * t0


class SphericalState(NamedTuple):
    """Polar/azimuthal angles (radians) of a point on the unit sphere."""

    theta: float
    phi: float


def to_cartesian(theta, phi) -> np.ndarray:
    """Unit vector(s) for polar angle(s) ``theta`` and azimuth(s) ``phi``.

    Scalars give a shape-(3,) vector; arrays broadcast to shape (..., 3).
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack(
        np.broadcast_arrays(st * np.cos(phi), st * np.sin(phi), np.cos(theta)),
        axis=-1,
    )


def to_spherical(s, tol: float = 1e-6) -> SphericalState:
    """Polar and azimuthal angles of a unit spin vector.

    Raises ``ValidationError`` if ``|s|`` deviates from 1 by more than
    ``tol``.  At the poles (s_x = s_y = 0) the azimuth is reported as 0.
    """
    s = np.asarray(s, dtype=float)
    if s.shape != (3,):
        raise ValidationError(f"spin state must be a 3-vector, got shape {s.shape}")
    norm = float(np.linalg.norm(s))
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"spin state must be a unit vector, |s| = {norm!r}")
    theta = math.acos(min(1.0, max(-1.0, float(s[2]))))
    phi = math.atan2(float(s[1]), float(s[0]))
    return SphericalState(theta=theta, phi=phi)
