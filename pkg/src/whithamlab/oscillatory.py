"""Linear propagator and empirical stationary-phase decay measurements.

The propagator E(t) multiplies each coefficient by exp(i t L(xi)); it is
exactly unitary and forms a group in t.  The phase of the oscillatory
integral behind E is  Phi(xi; x, t) = x xi / t + L(xi), whose stationary
points (when -x/t lies in the range of L') control pointwise decay:
sup-norm decay ~ t^(-1/3) for low-frequency content (degenerate
stationary point at the wave front x ~ -t) and ~ t^(-1/2) for content
in a fixed band away from frequency zero.

decay_scan measures sup_x ||d|^beta E f| against the envelope

    t^(-1/3-beta/3) * <(x+t)/t^(1/3)>^(-1/4+beta/2) * (Z + t^(-1/6) W)

where Z is the weighted spectral sup of the profile and W = ||x f||_2,
and fits the sup-norm decay exponent on log-log axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d

from whithamlab.dispersion import Symbol, eval_symbol, invert_group_velocity
from whithamlab.errors import DomainError, WraparoundError
from whithamlab.fields import SpectralField

__all__ = [
    "propagate", "StationaryInfo", "stationary_profile",
    "interaction_sup", "DecayReport", "decay_scan",
]


def propagate(sym: Symbol, f: SpectralField, t: float) -> SpectralField:
    """Apply E(t) = exp(i t L(D)); exactly unitary on L^2."""
    if not np.isfinite(t):
        raise DomainError(f"propagation time {t} must be finite")
    lam = eval_symbol(sym, f.grid.xi, 0)
    return f.apply_multiplier(np.exp(1j * t * lam))


@dataclass(frozen=True)
class StationaryInfo:
    """Classification of the phase x xi / t + L(xi).

    For -x/t inside the range of L' there are two stationary points
    +-xi0; amplitude_scale is the local stationary-phase contribution
    size t^(-1/2) |L''(xi0)|^(-1/2).
    """

    has_stationary_point: bool
    xi0: float | None = None
    lambda2: float | None = None
    amplitude_scale: float | None = None


def stationary_profile(sym: Symbol, x: float, t: float) -> StationaryInfo:
    """Classify the stationary points of Phi(xi; x, t) = x xi / t + L(xi)."""
    if t <= 0.0:
        raise DomainError(f"stationary-phase classification requires t > 0, got {t}")
    c = -x / t
    # d/dxi Phi = x/t + L'(xi) with L' in (0, 1): a root needs c in (0, 1)
    if not (0.0 < c < 1.0):
        return StationaryInfo(False)
    xi0 = invert_group_velocity(sym, c)
    lam2 = eval_symbol(sym, xi0, 2)
    scale = t ** -0.5 * abs(lam2) ** -0.5 if lam2 != 0.0 else np.inf
    return StationaryInfo(True, xi0=xi0, lambda2=lam2, amplitude_scale=scale)


def interaction_sup(u1: SpectralField, u2: SpectralField, lam: float) -> float:
    """sup of |u1(y1) u2(y2)| over grid pairs within circle distance lam.

    Exact over the discrete grid, computed with a sliding-window maximum
    (O(n)); distances are measured along the shorter arc of the torus.
    """
    u1.grid.checked_same(u2.grid)
    if lam < 0.0:
        raise DomainError(f"interaction distance {lam} must be nonnegative")
    a = np.abs(u1.real_values)
    b = np.abs(u2.real_values)
    r = int(np.floor(lam / u1.grid.dx))
    if 2 * r + 1 >= u1.grid.n:
        return float(np.max(a) * np.max(b))
    win = maximum_filter1d(b, size=2 * r + 1, mode="wrap")
    return float(np.max(a * win))


@dataclass
class DecayReport:
    """Per-time decay measurements and the fitted sup-norm exponent."""

    beta: float
    times: np.ndarray
    sup_norms: np.ndarray
    envelope_ratios: np.ndarray
    l6_norms: np.ndarray
    fitted_exponent: float
    fit_window: tuple[float, float]

    def max_envelope_ratio(self) -> float:
        return float(np.max(self.envelope_ratios))


def _bracket(z: np.ndarray) -> np.ndarray:
    return np.sqrt(1.0 + z * z)


def decay_scan(sym: Symbol, f: SpectralField, times, beta: float = 0.0,
               weight_exp: int = 4, pad: int = 4,
               content_speed: float | None = None) -> DecayReport:
    """Measure sup_x ||d|^beta E(t) f| against the dispersive envelope.

    ``content_speed`` bounds the group velocity of the field's spectral
    content for the wraparound guard; by default the global bound 1 is
    used.  Raises WraparoundError when a requested time exceeds the
    guard time.  The exponent is fitted by least squares on log-log data
    over the latter (geometric) half of the time window.
    """
    times = np.asarray(sorted(float(t) for t in times))
    if times.size < 2 or times[0] < 1.0:
        raise DomainError("decay scan needs at least two times, all >= 1")
    if not (0.0 <= beta <= 1.0):
        raise DomainError(f"beta {beta} outside [0, 1]")
    speed = 1.0 if content_speed is None else float(content_speed)
    guard = f.grid.guard_time(speed)
    if times[-1] > guard:
        raise WraparoundError(
            f"time {times[-1]:.6g} exceeds guard time {guard:.6g} "
            f"(period {f.grid.period:.6g}, content speed {speed:.3g})"
        )

    z = f.z_norm(weight_exp)
    w = f.x_weighted_l2()
    mult = np.abs(f.grid.xi) ** beta if beta > 0.0 else None

    sups = np.empty(times.size)
    ratios = np.empty(times.size)
    l6 = np.empty(times.size)
    for i, t in enumerate(times):
        g = propagate(sym, f, t)
        if mult is not None:
            g = g.apply_multiplier(mult)
        x, u = g.padded_values(pad)
        au = np.abs(u)
        sups[i] = np.max(au)
        l6[i] = (np.sum(au ** 6) * (f.grid.dx / pad)) ** (1.0 / 6.0)
        env = (t ** (-1.0 / 3.0 - beta / 3.0)
               * _bracket((x + t) / t ** (1.0 / 3.0)) ** (-0.25 + 0.5 * beta)
               * (z + t ** (-1.0 / 6.0) * w))
        ratios[i] = np.max(au / env)

    t_split = float(np.sqrt(times[0] * times[-1]))
    sel = times >= t_split
    slope = float(np.polyfit(np.log(times[sel]), np.log(sups[sel]), 1)[0])
    return DecayReport(beta=beta, times=times, sup_norms=sups,
                       envelope_ratios=ratios, l6_norms=l6,
                       fitted_exponent=slope,
                       fit_window=(t_split, float(times[-1])))
