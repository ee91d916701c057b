"""spinflip: macrospin magnetization reversal by chirped composite pulses.

The toolkit inversely engineers a constant-amplitude, frequency-chirped
drive that reverses a single-domain magnetic moment in a prescribed time,
wraps it into composite phase sequences that suppress the distortion caused
by uniaxial anisotropy, integrates the resulting rotating-frame LLG
dynamics, and scans the reversal probability over drive amplitude,
anisotropy, pulse count, and damping.
"""

from .composite import CompositeSequence, build_sequence, composite_phases
from .design import (
    PulseDesign,
    ThetaTrajectory,
    chirp_frequency,
    design_pulse,
    phi_of_t,
    sample_chirp,
    solve_theta,
    theta_derivatives,
)
from .dynamics import (
    IntegratorConfig,
    Trajectory,
    effective_field,
    feedforward_chirp,
    integrate_pulse,
    integrate_sequence,
    integrate_spherical,
    llg_rhs,
    reference_theta,
    spherical_rhs,
)
from .errors import FeasibilityError, IntegrationError, ValidationError
from .model import (
    MU_0,
    DimensionlessParams,
    MaterialParams,
    SphericalState,
    cobalt_nanoparticle,
    derive_scales,
    to_cartesian,
    to_spherical,
)
from .protocol import ExperimentSpec, SimulationResult, run_experiment, spin_up_probability
from .sweeps import Axis, SweepResult, SweepSpec, compare_N, sweep

__version__ = "0.1.0"

__all__ = [
    "MU_0",
    "Axis",
    "CompositeSequence",
    "DimensionlessParams",
    "ExperimentSpec",
    "FeasibilityError",
    "IntegrationError",
    "IntegratorConfig",
    "MaterialParams",
    "PulseDesign",
    "SimulationResult",
    "SphericalState",
    "SweepResult",
    "SweepSpec",
    "ThetaTrajectory",
    "Trajectory",
    "ValidationError",
    "build_sequence",
    "chirp_frequency",
    "cobalt_nanoparticle",
    "compare_N",
    "composite_phases",
    "derive_scales",
    "design_pulse",
    "effective_field",
    "feedforward_chirp",
    "integrate_pulse",
    "integrate_sequence",
    "integrate_spherical",
    "llg_rhs",
    "phi_of_t",
    "reference_theta",
    "run_experiment",
    "sample_chirp",
    "solve_theta",
    "spherical_rhs",
    "spin_up_probability",
    "sweep",
    "theta_derivatives",
    "to_cartesian",
    "to_spherical",
]
