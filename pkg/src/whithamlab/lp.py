"""Dyadic bump functions, Littlewood-Paley projections, time partitions.

The base cutoff phi is a smooth even function equal to 1 on
[-plateau, plateau] and vanishing outside [-support, support]
(defaults 5/4 and 3/2).  Everything else is built from it:

    psi(xi)    = phi(xi) - phi(2 xi)          annulus bump
    phi_l(xi)  = phi(xi / 2^l)                low-pass at scale 2^l
    psi_k(xi)  = psi(xi / 2^k)                band at scale 2^k
    phi_k^l    = psi_k if k > l else phi_l    mixed family
    phi_{>l}   = 1 - phi_l                    high-pass

The annulus bumps telescope, so sum_{k>l} psi_k + phi_l = 1 holds to
machine precision pointwise.  The smooth transition is a ratio of two
copies of the mollifier exp(1 - 1/(1 - s^2)), which is exactly
evaluable and C-infinity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from whithamlab.errors import BandOutOfLatticeError, DomainError
from whithamlab.fields import SpectralField


def _mollifier(s: np.ndarray) -> np.ndarray:
    """exp(1 - 1/(1 - s^2)) on (-1, 1), zero outside."""
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - si * si))
    return out


def smooth_step(x) -> np.ndarray:
    """C-infinity monotone step: 0 for x <= 0, 1 for x >= 1."""
    x = np.asarray(x, dtype=float)
    lo = _mollifier(1.0 - np.clip(x, 0.0, 1.0))
    hi = _mollifier(np.clip(x, 0.0, 1.0))
    return lo / (lo + hi)


@dataclass(frozen=True)
class BumpFamily:
    """The dyadic bump toolkit derived from one even plateau cutoff."""

    plateau: float = 1.25
    support: float = 1.5

    def __post_init__(self):
        if not (0.0 < self.plateau < self.support):
            raise DomainError("need 0 < plateau < support")

    def phi(self, xi) -> np.ndarray:
        """Even cutoff: 1 on [-plateau, plateau], 0 outside [-support, support]."""
        a = np.abs(np.asarray(xi, dtype=float))
        return smooth_step((self.support - a) / (self.support - self.plateau))

    def psi(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return self.phi(xi) - self.phi(2.0 * xi)

    def phi_l(self, l: int, xi) -> np.ndarray:
        return self.phi(np.asarray(xi, dtype=float) / 2.0 ** l)

    def psi_l(self, l: int, xi) -> np.ndarray:
        return self.psi(np.asarray(xi, dtype=float) / 2.0 ** l)

    def phi_kl(self, k: int, l: int, xi) -> np.ndarray:
        """psi_k for k > l, phi_l for k = l."""
        if k > l:
            return self.psi_l(k, xi)
        if k == l:
            return self.phi_l(l, xi)
        raise DomainError(f"phi_k^l requires k >= l, got k={k} l={l}")

    def phi_gt(self, l: float, xi) -> np.ndarray:
        """High-pass 1 - phi(xi / 2^l); l may be fractional for cutoff scans."""
        return 1.0 - self.phi(np.asarray(xi, dtype=float) / 2.0 ** l)


BUMPS = BumpFamily()


def band_limits(k: int, bumps: BumpFamily = BUMPS) -> tuple[float, float]:
    """Support of psi_k: the annulus 2^k*plateau/2 <= |xi| <= 2^k*support."""
    return (2.0 ** k * bumps.plateau / 2.0, 2.0 ** k * bumps.support)


def resolvable_bands(grid, bumps: BumpFamily = BUMPS) -> range:
    """Dyadic indices whose annulus meets the grid's frequency lattice."""
    k_max = int(np.floor(np.log2(grid.nyquist / (bumps.plateau / 2.0))))
    k_min = int(np.ceil(np.log2(grid.dxi / bumps.support)))
    return range(k_min, k_max + 1)


def project(field: SpectralField, band: tuple[str, int],
            bumps: BumpFamily = BUMPS, on_empty: str = "raise") -> SpectralField:
    """Frequency projection of a field.

    band is ("dyadic", k), ("below", l) or ("above", l).  A dyadic band
    lying entirely above the Nyquist frequency raises
    BandOutOfLatticeError, or returns the zero field with a warning when
    on_empty="zero" (for sweeps).
    """
    kind, idx = band
    xi = field.grid.xi
    if kind == "dyadic":
        if 2.0 ** (idx - 1) > field.grid.nyquist:
            if on_empty == "zero":
                warnings.warn(f"dyadic band k={idx} above Nyquist; returning zero field")
                return SpectralField(field.grid, np.zeros_like(field.coefficients))
            raise BandOutOfLatticeError(
                f"dyadic band k={idx} lies above Nyquist frequency {field.grid.nyquist:.6g}"
            )
        mult = bumps.psi_l(idx, xi)
    elif kind == "below":
        mult = bumps.phi_l(idx, xi)
    elif kind == "above":
        mult = bumps.phi_gt(idx, xi)
    else:
        raise DomainError(f"unknown band kind {kind!r}")
    return field.apply_multiplier(mult)


def decompose(field: SpectralField, l_low: int,
              bumps: BumpFamily = BUMPS) -> tuple[SpectralField, dict[int, SpectralField]]:
    """Low block phi_{l_low}(D) f plus all resolvable dyadic pieces above it."""
    low = project(field, ("below", l_low), bumps)
    ks = [k for k in resolvable_bands(field.grid, bumps) if k > l_low]
    pieces = {k: project(field, ("dyadic", k), bumps, on_empty="zero") for k in ks}
    return low, pieces


# ---------------------------------------------------------------------------
# Dyadic partition of the time interval [0, t]
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimePartition:
    """Weights q_0 ... q_{L+1} summing to the indicator of [0, t].

    Built from a ladder of L+1 smooth steps S_0 <= ... <= S_L with
    disjoint ascending transition windows:

        q_0     = (1 - S_0) * 1_[0,t]
        q_m     = (S_{m-1} - S_m) * 1_[0,t]     for 1 <= m <= L
        q_{L+1} = S_L * 1_[0,t]

    Middle pieces are C^1 with support in [2^(m-1), 2^(m+1)]; q_0 is
    supported in [0, 2] and q_{L+1} in [t-2, t].  For t < 4 all steps
    coincide, so only q_0 and q_{L+1} are active.
    """

    t: float
    L: int
    windows: tuple

    @property
    def n_pieces(self) -> int:
        return self.L + 2

    def _step(self, i: int, s: np.ndarray) -> np.ndarray:
        a, b = self.windows[i]
        if a == b:  # degenerate window (t = 0)
            return np.where(s >= a, 1.0, 0.0)
        return smooth_step((s - a) / (b - a))

    def piece(self, m: int, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if not 0 <= m <= self.L + 1:
            raise DomainError(f"piece index {m} outside 0..{self.L + 1}")
        inside = (s >= 0.0) & (s <= self.t)
        if m == 0:
            val = 1.0 - self._step(0, s)
        elif m == self.L + 1:
            val = self._step(self.L, s)
        else:
            val = self._step(m - 1, s) - self._step(m, s)
        return np.where(inside, val, 0.0)

    def evaluate_all(self, s) -> np.ndarray:
        """Array of shape (L+2, len(s)) with all weights."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.stack([self.piece(m, s) for m in range(self.L + 2)])


def build_time_partition(t: float) -> TimePartition:
    """Dyadic partition of [0, t] with |L - log2(2+t)| <= 2."""
    t = float(t)
    if t < 0.0:
        raise DomainError(f"partition endpoint t={t} must be nonnegative")
    if t < 4.0:
        # single crossover window inside both [0, 2] and [t-2, t]
        w = min(t, 4.0 - t) / 4.0
        win = (t / 2.0 - w, t / 2.0 + w)
        return TimePartition(t=t, L=1, windows=(win, win))
    # 2^L <= t-2 keeps the final window after the last dyadic one, and
    # t-1 <= 2^(L+1) keeps supp q_L inside [2^(L-1), 2^(L+1)]
    L = int(np.floor(np.log2(t - 2.0)))
    windows = [(2.0 ** m, 2.0 ** (m + 1)) for m in range(L)]
    windows.append((t - 2.0, t - 1.0))
    return TimePartition(t=t, L=L, windows=tuple(windows))
