"""Pseudospectral time integration of u_t - L u_x = s (u^3)_x.

In Fourier variables the equation is

    d/dt c(xi) = i Lam(xi) c(xi) + s * i xi * F[u^3](xi),

with Lam the dispersion symbol and s = +1 (defocusing) or -1.  The
linear part is applied exactly through the integrating factor
exp(i Lam dt); the default scheme is classical RK4 in the
integrating-factor variable (IFRK4), with ETDRK4 available for
cross-validation.  The cubic term is formed in real space from the
2/3-dealiased state and the product is masked again, and the Nyquist
mode is dropped from the odd derivative.

Diagnostics per sample time: L^2 norm, Hamiltonian
integral(u L u / 2 + s u^4 / 4), padded sup norm, a desk-scale Sobolev
norm, the weighted spectral sup (Z), the weighted norms ||x f||_2 and
||d_x (x f)||_2 of the profile f = exp(-i t Lam(D)) u, and per-band
L^2 norms of d/dt of the profile spectrum.
"""

from __future__ import annotations

import math as _math
import time as _time
from dataclasses import dataclass, field, replace

import numpy as np

from whithamlab.dispersion import Symbol, eval_symbol
from whithamlab.errors import BlowupError, DomainError
from whithamlab.fields import GridSpec, SpectralField, gaussian_profile
from whithamlab.lp import BUMPS, BumpFamily

__all__ = [
    "SolverConfig", "DiagnosticsRecord", "Snapshot", "RunResult",
    "step", "run", "dtf_band_norm", "hamiltonian", "tune_dt",
]

_SCHEMES = ("ifrk4", "etdrk4")
_DEALIAS = ("two_thirds", "none")


@dataclass(frozen=True)
class SolverConfig:
    """Everything a run needs; value type, hashable content."""

    grid: GridSpec
    dt: float
    t_end: float
    scheme: str = "ifrk4"
    dealias: str = "two_thirds"
    eps: float = 0.01
    ic_kind: str = "gaussian"
    ic_width: float = 4.0
    ic_center: float = 0.0
    nonlin_sign: float = 1.0
    n_desk: int = 4
    z_weight: int = 4
    blowup_factor: float = 100.0
    dtf_bands: tuple = (-2, -1, 0, 1)
    symbol: Symbol = field(default_factory=Symbol.whitham)

    def __post_init__(self):
        if self.scheme not in _SCHEMES:
            raise DomainError(f"scheme {self.scheme!r} not one of {_SCHEMES}")
        if self.dealias not in _DEALIAS:
            raise DomainError(f"dealias {self.dealias!r} not one of {_DEALIAS}")
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise DomainError(f"dt {self.dt} must be positive")
        if not (np.isfinite(self.t_end) and self.t_end > 0.0):
            raise DomainError(f"t_end {self.t_end} must be positive")
        if self.nonlin_sign not in (-1.0, 1.0):
            raise DomainError("nonlin_sign must be +-1")
        if self.ic_kind not in ("gaussian", "spectrum"):
            raise DomainError(f"unknown initial-condition kind {self.ic_kind!r}")

    def initial_field(self, spectrum: np.ndarray | None = None) -> SpectralField:
        if self.ic_kind == "gaussian":
            return gaussian_profile(self.grid, self.eps, self.ic_width, self.ic_center)
        if spectrum is None:
            raise DomainError("spectrum initial condition requires coefficient data")
        return SpectralField(self.grid, spectrum)

    def stability_record(self) -> dict:
        """Heuristic time-step sanity, recorded with every run."""
        lam_max = float(np.max(np.abs(eval_symbol(self.symbol, self.grid.xi, 0))))
        cubic_freq = float(self.grid.nyquist * 3.0 * self.eps ** 2)
        return {
            "dt_lambda_max": self.dt * lam_max,
            "dt_cubic_freq": self.dt * cubic_freq,
            "budget": 2.0 * np.pi,
        }


@dataclass
class DiagnosticsRecord:
    """One time slice of all monitored norms."""

    t: float
    l2_norm: float
    hamiltonian: float
    sup_norm: float
    sobolev_norm: float
    z_norm: float
    weight1: float
    weight2: float
    dtf_band_norms: dict

    FIELD_ORDER = ("t", "l2_norm", "hamiltonian", "sup_norm", "sobolev_norm",
                   "z_norm", "weight1", "weight2", "dtf_band_norms")


@dataclass
class Snapshot:
    t: float
    uhat: SpectralField
    fhat: SpectralField


@dataclass
class RunResult:
    config: SolverConfig
    times: np.ndarray
    snapshots: list
    diagnostics: list
    n_steps: int
    wall_seconds: float


class _Stepper:
    """Precomputed multipliers for one (grid, symbol, dt) combination."""

    def __init__(self, cfg: SolverConfig, dt: float | None = None,
                 ceiling: float | None = None):
        self.cfg = cfg
        self.dt = cfg.dt if dt is None else float(dt)
        grid = cfg.grid
        xi = grid.xi
        self.lam = eval_symbol(cfg.symbol, xi, 0)
        h = self.dt
        self.e_full = np.exp(1j * h * self.lam)
        self.e_half = np.exp(0.5j * h * self.lam)
        ixi = 1j * xi.copy()
        ixi[grid.n // 2] = 0.0  # Nyquist dropped from the odd derivative
        if cfg.dealias == "two_thirds":
            keep = np.abs(np.fft.fftfreq(grid.n, d=1.0 / grid.n)) <= grid.n / 3.0
        else:
            keep = np.ones(grid.n, dtype=bool)
        keep = keep.copy()
        keep[grid.n // 2] = False
        self.mask = keep
        self.dmult = cfg.nonlin_sign * ixi * keep
        self.scale_fwd = grid.dx / np.sqrt(2.0 * np.pi)
        self.scale_inv = np.sqrt(2.0 * np.pi) / grid.dx
        base = cfg.blowup_factor * cfg.eps
        self.ceiling = base if ceiling is None else max(base, ceiling)
        if cfg.scheme == "etdrk4":
            self._etdrk4_tables()

    # -- right-hand side ----------------------------------------------------

    def nonlinear(self, chat: np.ndarray) -> np.ndarray:
        """s * i xi * F[u^3] with 2/3 masking of input and product."""
        u = (np.fft.ifft(np.where(self.mask, chat, 0.0)) * self.scale_inv).real
        m = np.max(np.abs(u))
        if not np.isfinite(m) or m > self.ceiling:
            raise BlowupError(
                f"sup |u| = {m:.6g} exceeded ceiling {self.ceiling:.6g}"
            )
        w = np.fft.fft(u * u * u) * self.scale_fwd
        return self.dmult * w

    # -- IFRK4 ----------------------------------------------------------------

    def step_ifrk4(self, chat: np.ndarray) -> np.ndarray:
        h, e, e2 = self.dt, self.e_full, self.e_half
        n1 = self.nonlinear(chat)
        n2 = self.nonlinear(e2 * (chat + 0.5 * h * n1))
        n3 = self.nonlinear(e2 * chat + 0.5 * h * n2)
        n4 = self.nonlinear(e * chat + h * e2 * n3)
        return e * chat + (h / 6.0) * (e * n1 + 2.0 * e2 * (n2 + n3) + n4)

    # -- ETDRK4 ---------------------------------------------------------------

    def _etdrk4_tables(self):
        # Cox-Matthews coefficient functions of z = i Lam h, evaluated by
        # Taylor series below |z| = 1 (cancellation region) and directly above.
        h = self.dt
        z = 1j * self.lam * h

        def hybrid(direct, coeffs):
            small = np.abs(z) < 1.0
            out = np.empty_like(z)
            zb = z[~small]
            out[~small] = direct(zb)
            zs = z[small]
            acc = np.zeros_like(zs)
            for c in reversed(coeffs):
                acc = acc * zs + c
            out[small] = acc
            return out

        js = np.arange(18)
        fact3 = np.array([float(_math.factorial(int(j) + 3)) for j in js])
        self.q = h * hybrid(
            lambda zz: (np.exp(zz / 2.0) - 1.0) / zz,
            0.5 / (2.0 ** js * np.array([float(_math.factorial(int(j) + 1)) for j in js])))
        self.f1 = h * hybrid(
            lambda zz: (-4.0 - zz + np.exp(zz) * (4.0 - 3.0 * zz + zz ** 2)) / zz ** 3,
            (js + 1.0) ** 2 / fact3)
        self.f2 = h * hybrid(
            lambda zz: (2.0 + zz + np.exp(zz) * (zz - 2.0)) / zz ** 3,
            (js + 1.0) / fact3)
        self.f3 = h * hybrid(
            lambda zz: (-4.0 - 3.0 * zz - zz ** 2 + np.exp(zz) * (4.0 - zz)) / zz ** 3,
            (1.0 - js) / fact3)

    def step_etdrk4(self, chat: np.ndarray) -> np.ndarray:
        e, e2 = self.e_full, self.e_half
        nv = self.nonlinear(chat)
        a = e2 * chat + self.q * nv
        na = self.nonlinear(a)
        b = e2 * chat + self.q * na
        nb = self.nonlinear(b)
        c = e2 * a + self.q * (2.0 * nb - nv)
        nc = self.nonlinear(c)
        return e * chat + self.f1 * nv + 2.0 * self.f2 * (na + nb) + self.f3 * nc

    def advance(self, chat: np.ndarray) -> np.ndarray:
        if self.cfg.scheme == "etdrk4":
            return self.step_etdrk4(chat)
        return self.step_ifrk4(chat)


def step(state: SpectralField, cfg: SolverConfig) -> SpectralField:
    """Advance the spectrum of u by one dt with the configured scheme."""
    stepper = _Stepper(cfg, ceiling=_amplitude_ceiling(cfg, state))
    return SpectralField(cfg.grid, stepper.advance(state.coefficients))


def advance_steps(cfg: SolverConfig, state: SpectralField, n_steps: int,
                  dt: float | None = None) -> SpectralField:
    """March n_steps of size dt (default cfg.dt; negative dt integrates
    backward, which with the sign symmetry of the equation realizes the
    time-reversal t -> -t)."""
    stepper = _Stepper(cfg, dt=dt, ceiling=_amplitude_ceiling(cfg, state))
    chat = state.coefficients.copy()
    for _ in range(n_steps):
        chat = stepper.advance(chat)
    return SpectralField(cfg.grid, chat)


def _amplitude_ceiling(cfg: SolverConfig, state: SpectralField) -> float:
    return cfg.blowup_factor * max(cfg.eps, state.sup_norm(pad=1))


def hamiltonian(u: SpectralField, sym: Symbol, nonlin_sign: float = 1.0) -> float:
    """integral of u L u / 2 + s u^4 / 4 (conserved by the flow)."""
    xi = u.grid.xi
    lam = eval_symbol(sym, xi, 0)
    with np.errstate(invalid="ignore"):
        mult = np.where(xi == 0.0, 1.0, lam / np.where(xi == 0.0, 1.0, xi))
    quad = 0.5 * float(np.sum(mult * np.abs(u.coefficients) ** 2) * u.grid.dxi)
    vals = u.real_values
    quart = 0.25 * nonlin_sign * float(np.sum(vals ** 4) * u.grid.dx)
    return quad + quart


def _band_multipliers(grid: GridSpec, bands, bumps: BumpFamily) -> dict:
    return {int(k): bumps.psi_l(int(k), grid.xi) for k in bands}


def _diagnostics(t: float, uhat: SpectralField, fhat: SpectralField,
                 cfg: SolverConfig, stepper: _Stepper, band_mults: dict) -> DiagnosticsRecord:
    rhs = stepper.nonlinear(uhat.coefficients)
    dtf = {k: float(np.sqrt(np.sum(np.abs(m * rhs) ** 2) * cfg.grid.dxi))
           for k, m in band_mults.items()}
    return DiagnosticsRecord(
        t=t,
        l2_norm=uhat.l2_norm(),
        hamiltonian=hamiltonian(uhat, cfg.symbol, cfg.nonlin_sign),
        sup_norm=uhat.sup_norm(),
        sobolev_norm=fhat.hs_norm(cfg.n_desk),
        z_norm=fhat.z_norm(cfg.z_weight),
        weight1=fhat.x_weighted_l2(),
        weight2=fhat.dx_x_weighted_l2(),
        dtf_band_norms=dtf,
    )


def run(cfg: SolverConfig, sample_times, initial: SpectralField | None = None,
        keep_snapshots: bool = True, bumps: BumpFamily = BUMPS) -> RunResult:
    """Integrate to t_end, recording snapshots and diagnostics.

    Sample times are snapped to the nearest step multiple of dt (t_end
    must be a near-integer multiple of dt).  Serial and deterministic:
    identical configs reproduce identical bytes downstream.
    """
    t0 = _time.perf_counter()
    n_steps = int(round(cfg.t_end / cfg.dt))
    if abs(n_steps * cfg.dt - cfg.t_end) > 1e-9 * max(1.0, cfg.t_end):
        raise DomainError(
            f"t_end {cfg.t_end} is not an integer multiple of dt {cfg.dt}"
        )
    wanted = sorted({min(max(0, int(round(float(t) / cfg.dt))), n_steps)
                     for t in sample_times})
    guard = cfg.grid.guard_time(1.0)
    if cfg.t_end > guard:
        raise DomainError(
            f"t_end {cfg.t_end} exceeds wraparound guard {guard:.6g} of the grid"
        )

    u0 = initial if initial is not None else cfg.initial_field()
    stepper = _Stepper(cfg, ceiling=_amplitude_ceiling(cfg, u0))
    band_mults = _band_multipliers(cfg.grid, cfg.dtf_bands, bumps)
    chat = u0.coefficients.copy()

    times, snaps, diags = [], [], []
    for istep in range(n_steps + 1):
        if wanted and istep == wanted[0]:
            wanted.pop(0)
            t = istep * cfg.dt
            uhat = SpectralField(cfg.grid, chat.copy())
            fhat = uhat.apply_multiplier(np.exp(-1j * t * stepper.lam))
            times.append(t)
            if keep_snapshots:
                snaps.append(Snapshot(t=t, uhat=uhat, fhat=fhat))
            diags.append(_diagnostics(t, uhat, fhat, cfg, stepper, band_mults))
        if istep < n_steps:
            chat = stepper.advance(chat)
            if not np.all(np.isfinite(chat)):
                raise BlowupError(f"non-finite spectrum after step {istep + 1}")

    return RunResult(config=cfg, times=np.asarray(times), snapshots=snaps,
                     diagnostics=diags, n_steps=n_steps,
                     wall_seconds=_time.perf_counter() - t0)


def dtf_band_norm(snapshots, k: int, cfg: SolverConfig,
                  bumps: BumpFamily = BUMPS) -> tuple[np.ndarray, np.ndarray]:
    """||P_k d/dt f^hat||_2 at the snapshot times, from the exact cubic
    expression ||psi_k(xi) xi F[u^3](xi)||_2 (the profile phase drops out)."""
    stepper = _Stepper(cfg, ceiling=np.inf)
    mult = bumps.psi_l(int(k), cfg.grid.xi)
    times, vals = [], []
    for snap in snapshots:
        rhs = stepper.nonlinear(snap.uhat.coefficients)
        times.append(snap.t)
        vals.append(float(np.sqrt(np.sum(np.abs(mult * rhs) ** 2) * cfg.grid.dxi)))
    return np.asarray(times), np.asarray(vals)


def log_dense_sample_times(dt: float, t_start: float, t_end: float,
                           max_log_step: float = 0.05) -> np.ndarray:
    """Sample times on the step grid k*dt with log spacing <= max_log_step.

    Works in step indices with a floor rule, so the control survives the
    snapping run() performs.  Needs t_start large enough that consecutive
    grid points already satisfy the control (k_start >= 1/(e^s - 1))."""
    k_min = int(np.ceil(1.0 / np.expm1(max_log_step)))
    k = max(int(np.ceil(t_start / dt)), k_min)
    k_end = int(round(t_end / dt))
    if k >= k_end:
        raise DomainError(f"t_start {t_start} too close to t_end {t_end}")
    ks = [k]
    while ks[-1] < k_end:
        nxt = min(int(np.floor(ks[-1] * np.exp(max_log_step))), k_end)
        ks.append(max(nxt, ks[-1] + 1))
    return dt * np.asarray(ks, dtype=float)


def tune_dt(cfg: SolverConfig, target_drift: float = 3e-10,
            probe_t: float = 10.0) -> SolverConfig:
    """Scale dt so the predicted full-run L^2 drift sits near target_drift.

    Uses one short probe run and the scheme's fourth-order drift scaling
    drift ~ dt^4 * t; the result is clamped to [dt/8, dt] and rounded so
    t_end stays an integer multiple.
    """
    probe_t = min(probe_t, cfg.t_end)
    n_probe = max(4, int(round(probe_t / cfg.dt)))
    probe_cfg = replace(cfg, t_end=n_probe * cfg.dt)
    res = run(probe_cfg, [0.0, probe_cfg.t_end], keep_snapshots=False)
    l2 = [d.l2_norm for d in res.diagnostics]
    drift = abs(l2[-1] / l2[0] - 1.0)
    predicted = drift * (cfg.t_end / probe_cfg.t_end)
    if predicted <= 0.0:
        return cfg
    factor = (target_drift / predicted) ** 0.25
    factor = min(8.0, max(0.125, factor))
    n_new = max(4, int(np.ceil(cfg.t_end / (cfg.dt * factor))))
    return replace(cfg, dt=cfg.t_end / n_new)
