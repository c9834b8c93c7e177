"""Numerical laboratory for the modified Whitham equation.

The model is  u_t - sqrt(tanh D / D) u_x = (u^3)_x  on a large periodic
domain standing in for the line.  The package provides

* ``dispersion``  -- the dispersion symbol, its derivatives and inverse
  group velocity, singularity-safe near frequency zero;
* ``lp``          -- smooth dyadic bump functions, Littlewood-Paley
  projections and a dyadic partition of a time interval;
* ``fields``      -- periodic grids and complex spectral fields;
* ``resonance``   -- the three-wave phase function, resonance
  inequalities and the multiplier decomposition of its xi-gradient;
* ``oscillatory`` -- the linear propagator, stationary-phase
  classification, dispersive-decay scans and interaction suprema;
* ``multiplier``  -- computable multiplier norms and dense trilinear
  operator application;
* ``solver``      -- integrating-factor pseudospectral time stepping
  with conservation and bootstrap-norm diagnostics;
* ``scattering``  -- accumulation of the long-time phase correction and
  Cauchy-convergence reports for the corrected profile;
* ``cli``         -- reproducible command-line experiments.
"""

from whithamlab.dispersion import Symbol, eval_symbol, invert_group_velocity
from whithamlab.fields import GridSpec, SpectralField
from whithamlab.lp import BumpFamily, TimePartition, build_time_partition, project
from whithamlab.resonance import ResonancePoint, phi, phi_gradient, phixi_decomposition
from whithamlab.oscillatory import propagate, stationary_profile, interaction_sup, decay_scan
from whithamlab.solver import SolverConfig, DiagnosticsRecord, run, step
from whithamlab.scattering import ScatteringState, accumulate_phase, convergence_report
from whithamlab.multiplier import s_norm, apply_trilinear

__version__ = "0.1.0"

__all__ = [
    "Symbol", "eval_symbol", "invert_group_velocity",
    "GridSpec", "SpectralField",
    "BumpFamily", "TimePartition", "build_time_partition", "project",
    "ResonancePoint", "phi", "phi_gradient", "phixi_decomposition",
    "propagate", "stationary_profile", "interaction_sup", "decay_scan",
    "SolverConfig", "DiagnosticsRecord", "run", "step",
    "ScatteringState", "accumulate_phase", "convergence_report",
    "s_norm", "apply_trilinear",
    "__version__",
]
