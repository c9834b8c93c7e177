"""Shared fixtures: symbols and the expensive reference solver runs."""

import numpy as np
import pytest

from whithamlab.dispersion import Symbol
from whithamlab.fields import GridSpec
from whithamlab.solver import SolverConfig, run, log_dense_sample_times


@pytest.fixture(scope="session")
def whitham():
    return Symbol.whitham()


# Long small-data run shared by the bootstrap-monitor and scattering
# criteria: mildly nonlinear so the weighted-norm growth is measurable.
REFERENCE_CONFIG = dict(
    n=2 ** 14, period_over_pi=1024.0, dt=0.1, t_end=500.0,
    eps=0.22, ic_width=1.0, dtf_bands=(0, 1, 2, 3),
)


def make_reference_config() -> SolverConfig:
    grid = GridSpec(REFERENCE_CONFIG["n"], REFERENCE_CONFIG["period_over_pi"] * np.pi)
    return SolverConfig(grid=grid, dt=REFERENCE_CONFIG["dt"],
                        t_end=REFERENCE_CONFIG["t_end"], eps=REFERENCE_CONFIG["eps"],
                        ic_width=REFERENCE_CONFIG["ic_width"],
                        dtf_bands=REFERENCE_CONFIG["dtf_bands"])


@pytest.fixture(scope="session")
def reference_run():
    cfg = make_reference_config()
    samples = [0.0] + list(log_dense_sample_times(cfg.dt, 2.0, cfg.t_end))
    return run(cfg, samples)
