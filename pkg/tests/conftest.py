import numpy as np
import pytest

from spinflip import DimensionlessParams, ExperimentSpec, IntegratorConfig, design_pulse, run_experiment


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile (or load from cache) the jitted kernels once, so timing
    assertions elsewhere measure the integrator and not the JIT."""
    spec = ExperimentSpec(
        params=DimensionlessParams(h=0.5, d=0.01, alpha=0.001, t_f=10.0),
        N=1,
        integrator=IntegratorConfig(step_count=1000),
    )
    run_experiment(spec)


@pytest.fixture(scope="session")
def fig_pulse():
    """The running example design: h = 0.08, t_f = 100."""
    return design_pulse(0.08, 100.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
