"""Composite-pulse phase sequences.

A protocol is an odd number N = 2n + 1 of identical reversal pulses, the
k-th carrying the transverse-drive phase

    phi_k = (N + 1 - 2*floor((k+1)/2)) * floor(k/2) * pi / N,   k = 1..N,

reduced to [0, 2pi).  The sequence is a palindrome, phi_k = phi_{N+1-k},
with phi_1 = phi_N = 0.  The phases are computed in exact integer
arithmetic (phi_k = m_k * pi / N with integer m_k), so the symmetry and the
endpoint zeros hold exactly in floating point as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import PulseDesign
from .errors import ValidationError


def composite_phases(n_pulses: int) -> np.ndarray:
    """Phases phi_1..phi_N (radians, in [0, 2pi)) for an odd pulse count."""
    if not isinstance(n_pulses, (int, np.integer)) or n_pulses < 1:
        raise ValidationError(f"pulse count must be a positive integer, got {n_pulses!r}")
    n = int(n_pulses)
    if n % 2 == 0:
        raise ValidationError(f"pulse count must be odd, got {n}")
    steps = [(n + 1 - 2 * ((k + 1) // 2)) * (k // 2) % (2 * n) for k in range(1, n + 1)]
    return np.array([m * math.pi / n for m in steps], dtype=float)


@dataclass(frozen=True)
class CompositeSequence:
    """An N-pulse protocol sharing one pulse design across all slots.

    Pulse k occupies the window [(k-1) t_f, k t_f] with the chirp restarted
    from its own local time origin and the transverse drive rotated by
    phases[k-1] in the x-y plane.
    """

    pulse: PulseDesign
    phases: tuple[float, ...]

    @property
    def N(self) -> int:
        return len(self.phases)

    @property
    def total_duration(self) -> float:
        return self.N * self.pulse.t_f

    def to_json_dict(self) -> dict:
        return {
            "N": self.N,
            "phases_rad": list(self.phases),
            "tf_per_pulse": self.pulse.t_f,
            "h": self.pulse.h,
        }


def build_sequence(pulse: PulseDesign, n_pulses: int) -> CompositeSequence:
    """Assemble the N-pulse protocol for a single pulse design."""
    phases = composite_phases(n_pulses)
    return CompositeSequence(pulse=pulse, phases=tuple(float(p) for p in phases))
