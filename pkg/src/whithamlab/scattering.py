"""Long-time phase correction and convergence of the corrected profile.

The profile spectrum f^hat(xi, t) of a small solution does not settle:
it keeps rotating by a logarithmically growing phase.  The correction

    H(xi, t) = -(6 pi xi / |L''(xi)|) * integral_0^t |f^hat(xi, s)|^2 / s
               * cutoff(|xi| s^(1/3)) ds

(with |f^hat|^2 in the line-transform normalization; stored unitary
coefficients carry an extra 1/(2 pi)) removes that rotation, and
g = exp(i H) f^hat becomes Cauchy in time on bands |xi| >= t^(-1/3+alpha).
The cutoff is the high-pass 1 - phi(z/2) built from the dyadic bump
family, so contributions vanish until |xi| s^(1/3) reaches its support
edge.  Near xi = 0 the prefactor uses the series limit
xi / |L''(xi)| -> sign(xi) (L'' ~ -xi).

H is accumulated online by the trapezoid rule in log time at the
solver's sample points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from whithamlab.dispersion import Symbol, eval_symbol
from whithamlab.errors import DomainError, NonMonotoneTimeError, StepControlError
from whithamlab.fields import GridSpec
from whithamlab.lp import BUMPS, BumpFamily

__all__ = [
    "ScatteringState", "new_state", "accumulate_phase",
    "phase_prefactor", "DyadReport", "convergence_report",
]

DEFAULT_ALPHA = 0.1  # desk-scale band exponent; the theorem allows (0, 1e-3]


@dataclass
class ScatteringState:
    """Accumulated phase H, current profile spectrum and its correction."""

    grid: GridSpec
    H: np.ndarray
    f_hat: np.ndarray
    g: np.ndarray
    last_t: float
    w_inf_estimate: np.ndarray

    def copy(self) -> "ScatteringState":
        return ScatteringState(self.grid, self.H.copy(), self.f_hat.copy(),
                               self.g.copy(), self.last_t, self.w_inf_estimate.copy())


def phase_prefactor(sym: Symbol, grid: GridSpec) -> np.ndarray:
    """-6 pi xi / |L''(xi)| / (2 pi) on the lattice, with the xi -> 0 limit.

    The 1/(2 pi) converts the stored unitary coefficients to the
    line-transform normalization the phase formula is written in.
    """
    xi = grid.xi
    lam2 = eval_symbol(sym, xi, 2)
    out = np.empty_like(xi)
    nz = xi != 0.0
    small = np.abs(lam2) < 1e-14
    if np.any(small & nz):
        raise DomainError("|L''| vanished away from xi = 0 on the lattice")
    out[nz] = -3.0 * xi[nz] / np.abs(lam2[nz])
    out[~nz] = 0.0  # cutoff kills xi = 0 anyway; limit of xi/|L''| is sign(xi)
    return out


def new_state(grid: GridSpec, sym: Symbol, f_hat: np.ndarray, t: float) -> ScatteringState:
    f_hat = np.asarray(f_hat, dtype=complex)
    return ScatteringState(grid=grid, H=np.zeros(grid.n), f_hat=f_hat.copy(),
                           g=f_hat.copy(), last_t=float(t),
                           w_inf_estimate=f_hat.copy())


def _integrand(state_f: np.ndarray, t: float, xi: np.ndarray,
               bumps: BumpFamily) -> np.ndarray:
    """|f^hat|^2 * cutoff(|xi| t^(1/3)); the 1/s is absorbed by d(log s)."""
    cutoff = bumps.phi_gt(1, np.abs(xi) * t ** (1.0 / 3.0))
    return np.abs(state_f) ** 2 * cutoff


def accumulate_phase(state: ScatteringState, f_hat_new, t_new: float,
                     sym: Symbol, bumps: BumpFamily = BUMPS,
                     max_log_step: float = 0.05,
                     enforce_step_control: bool = True) -> ScatteringState:
    """Trapezoid step of H in log time from state.last_t to t_new.

    Requires t_new > last_t; steps coarser than max_log_step in log s
    violate the quadrature tolerance and raise StepControlError (pass
    enforce_step_control=False for coarse smoke runs).
    """
    f_hat_new = np.asarray(f_hat_new, dtype=complex)
    t0, t1 = state.last_t, float(t_new)
    if t1 <= t0:
        raise NonMonotoneTimeError(f"phase accumulation needs t_new > {t0}, got {t1}")
    if t0 <= 0.0:
        raise DomainError("phase accumulation starts from a positive time")
    dlog = np.log(t1 / t0)
    if enforce_step_control and dlog > max_log_step + 1e-12:
        raise StepControlError(
            f"log-time step {dlog:.4f} exceeds quadrature control {max_log_step}"
        )
    xi = state.grid.xi
    pref = phase_prefactor(sym, state.grid)
    inc = 0.5 * dlog * (_integrand(state.f_hat, t0, xi, bumps)
                        + _integrand(f_hat_new, t1, xi, bumps))
    H = state.H + pref * inc
    g = np.exp(1j * H) * f_hat_new
    return ScatteringState(grid=state.grid, H=H, f_hat=f_hat_new.copy(), g=g,
                           last_t=t1, w_inf_estimate=g.copy())


def accumulate_series(grid: GridSpec, sym: Symbol, times, f_hats,
                      bumps: BumpFamily = BUMPS,
                      enforce_step_control: bool = True) -> list:
    """Fold accumulate_phase over a whole run; returns the state at each time."""
    times = list(times)
    if not times:
        raise DomainError("empty time series")
    state = new_state(grid, sym, f_hats[0], times[0])
    out = [state.copy()]
    for t, fh in zip(times[1:], f_hats[1:]):
        state = accumulate_phase(state, fh, t, sym, bumps,
                                 enforce_step_control=enforce_step_control)
        out.append(state.copy())
    return out


# ---------------------------------------------------------------------------
# Convergence reports
# ---------------------------------------------------------------------------

@dataclass
class DyadReport:
    """Weighted sup increments over one dyadic time pair."""

    t1: float
    t2: float
    sup_corrected: float
    sup_uncorrected: float

    @property
    def ratio(self) -> float:
        if self.sup_uncorrected == 0.0:
            return 0.0
        return self.sup_corrected / self.sup_uncorrected


@dataclass
class ConvergenceReport:
    band: tuple[float, float]
    weight_exp: int
    alpha: float
    dyads: list
    kappa: float | None

    @property
    def final_ratio(self) -> float:
        return self.dyads[-1].ratio


def _band_sup(grid: GridSpec, arr: np.ndarray, band, weight_exp: int) -> float:
    xi = np.abs(grid.xi)
    sel = (xi >= band[0]) & (xi <= band[1])
    if not np.any(sel):
        raise DomainError(f"band {band} contains no lattice frequencies")
    w = 1.0 + xi[sel] ** weight_exp
    return float(np.max(w * np.abs(arr[sel])))


def convergence_report(states, band: tuple[float, float], weight_exp: int = 4,
                       alpha: float = DEFAULT_ALPHA) -> ConvergenceReport:
    """Dyadic Cauchy increments of the corrected and raw profile spectra.

    ``states`` is the ScatteringState chain at dyadic times t, 2t, 4t, ...
    The band must sit above the self-similar region of its earliest
    time: band[0] >= t1^(-1/3+alpha).
    """
    states = list(states)
    if len(states) < 2:
        raise DomainError("need at least two states for an increment")
    threshold = states[0].last_t ** (-1.0 / 3.0 + alpha)
    if band[0] < threshold:
        raise DomainError(
            f"band floor {band[0]:.6g} below threshold t1^(-1/3+alpha) = {threshold:.6g}"
        )
    dyads = []
    for s1, s2 in zip(states[:-1], states[1:]):
        dyads.append(DyadReport(
            t1=s1.last_t, t2=s2.last_t,
            sup_corrected=_band_sup(s1.grid, s2.g - s1.g, band, weight_exp),
            sup_uncorrected=_band_sup(s1.grid, s2.f_hat - s1.f_hat, band, weight_exp),
        ))
    kappa = None
    incs = np.array([d.sup_corrected for d in dyads])
    t1s = np.array([d.t1 for d in dyads])
    if len(dyads) >= 2 and np.all(incs > 0.0):
        kappa = -float(np.polyfit(np.log(t1s), np.log(incs), 1)[0])
    return ConvergenceReport(band=band, weight_exp=weight_exp, alpha=alpha,
                             dyads=dyads, kappa=kappa)
