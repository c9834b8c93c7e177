"""Three-wave phase function, resonance inequalities, gradient splitting.

The phase is  Phi(xi, eta, sigma) = L(xi) - L(xi-eta-sigma) - L(eta) - L(sigma).
Its lower bounds (positivity of L(a)+L(b)-L(a+b) at the right rate, the
three-wave analogue, and the four-wave zero-sum bound) are verified by
stratified box scans reporting min/max sample ratios against the
comparand a^(1/2) (a^1/2 wedge 1) (b wedge 1)^2.

For sign channels (i1, i2, i3) with i1+i2+i3 = 1 and xi > 0, the
xi-gradient splits exactly as

    Phi_xi = m1 Phi + m2 Phi_eta + m3 Phi_sigma

with the quotient multipliers below; evaluation is guarded against
near-vanishing denominators and the residual of the identity is
returned for verification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from whithamlab.dispersion import Symbol, eval_symbol
from whithamlab.errors import (
    DegenerateBoxError,
    DomainError,
    InfeasibleSampleError,
    NearSingularDenominatorError,
)

__all__ = [
    "ResonancePoint", "phi", "phi_gradient", "BoundReport",
    "check_two_wave_bound", "check_three_wave_bound", "check_four_wave_bound",
    "phixi_decomposition", "sample_multiplier_bounds",
]


@dataclass(frozen=True)
class ResonancePoint:
    """One interaction point (xi, eta, sigma) with the sign channel of
    each input profile (the sign of its frequency half-line)."""

    xi: float
    eta: float
    sigma: float
    signs: tuple[int, int, int] = (1, 1, 1)

    def __post_init__(self):
        vals = (self.xi, self.eta, self.sigma, self.xi - self.eta - self.sigma)
        if not all(np.isfinite(v) for v in vals):
            raise DomainError("resonance point has non-finite frequencies")
        if any(s not in (-1, 1) for s in self.signs):
            raise DomainError(f"signs must be +-1, got {self.signs}")

    @property
    def derived(self) -> float:
        return self.xi - self.eta - self.sigma

    @classmethod
    def with_inferred_signs(cls, xi: float, eta: float, sigma: float) -> "ResonancePoint":
        """Signs read off the actual frequency half-lines."""
        d = xi - eta - sigma
        sgn = lambda v: 1 if v >= 0.0 else -1
        return cls(xi, eta, sigma, (sgn(d), sgn(eta), sgn(sigma)))


def phi(sym: Symbol, p: ResonancePoint) -> float:
    """Phi = L(xi) - L(xi-eta-sigma) - L(eta) - L(sigma)."""
    L = lambda v: eval_symbol(sym, v, 0)
    return L(p.xi) - L(p.derived) - L(p.eta) - L(p.sigma)


def phi_gradient(sym: Symbol, p: ResonancePoint) -> tuple[float, float, float]:
    """(Phi_xi, Phi_eta, Phi_sigma) by the same pattern with L'."""
    Lp = lambda v: eval_symbol(sym, v, 1)
    b = Lp(p.derived)
    return (Lp(p.xi) - b, b - Lp(p.eta), b - Lp(p.sigma))


# ---------------------------------------------------------------------------
# Box scans for the resonance inequalities
# ---------------------------------------------------------------------------

@dataclass
class BoundReport:
    """Min/max of a ratio scan with the witnessing sample points."""

    name: str
    samples: int
    min_ratio: float
    max_ratio: float
    argmin: tuple
    argmax: tuple
    params: dict = field(default_factory=dict)

    @property
    def positive(self) -> bool:
        return self.min_ratio > 0.0 and np.isfinite(self.max_ratio)


def _stratified_unit(rng: np.random.Generator, dims: int, n: int) -> np.ndarray:
    """~n stratified samples in the unit cube, one per grid cell."""
    m = max(1, int(round(n ** (1.0 / dims))))
    axes = np.meshgrid(*[np.arange(m)] * dims, indexing="ij")
    base = np.stack([a.ravel() for a in axes], axis=1).astype(float)
    u = rng.random(base.shape)
    return (base + np.maximum(u, 1e-12)) / m


def _two_wave_comparand(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sqrt(a) * np.sqrt(np.minimum(a, 1.0)) * np.minimum(b, 1.0) ** 2


def _ratio_report(name, a, b, lhs, params) -> BoundReport:
    ratio = lhs / _two_wave_comparand(a, b)
    i_min = int(np.argmin(ratio))
    i_max = int(np.argmax(ratio))
    return BoundReport(name=name, samples=ratio.size,
                       min_ratio=float(ratio[i_min]), max_ratio=float(ratio[i_max]),
                       argmin=(float(a[i_min]), float(b[i_min])),
                       argmax=(float(a[i_max]), float(b[i_max])),
                       params=params)


def _diagonal_family(box: float, depth: int = 20) -> np.ndarray:
    """Deterministic corner family box * 2^-j; the ratio extremes of both
    scans live at the origin corner, which random strata approach only
    slowly, so these points pin the sampled extremes across refinements.
    Depth stops while the cubic term still dominates double-precision
    roundoff of the symbol differences (s^2/6 >> 1e-16)."""
    return box * 2.0 ** -np.arange(1, depth + 1)


def check_two_wave_bound(sym: Symbol, box: float, samples: int,
                         seed: int = 0) -> BoundReport:
    """Scan of [L(a)+L(b)-L(a+b)] / [a^(1/2)(a^1/2^1)(b^1)^2] over 0<=a<=b<=box."""
    if box <= 0.0:
        raise DegenerateBoxError(f"box size {box} must be positive")
    if samples < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(seed)
    pts = np.sort(_stratified_unit(rng, 2, samples) * box, axis=1)
    d = _diagonal_family(box)
    a = np.concatenate([pts[:, 0], d])
    b = np.concatenate([pts[:, 1], d])
    L = lambda v: eval_symbol(sym, v, 0)
    lhs = L(a) + L(b) - L(a + b)
    return _ratio_report("two_wave", a, b, lhs, {"box": box, "seed": seed})


def check_three_wave_bound(sym: Symbol, box: float, samples: int,
                           seed: int = 0) -> BoundReport:
    """Same comparand with L(a)+L(b)+L(c)-L(a+b+c) over 0<=c<=a<=b<=box.

    The c = 0 face (where the scan reduces exactly to the two-wave one)
    is sampled explicitly: the ratio minimum is attained there and
    interior strata approach it only at the O(samples^(-1/3)) rate.
    """
    if box <= 0.0:
        raise DegenerateBoxError(f"box size {box} must be positive")
    if samples < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(seed)
    n_face = max(1, samples // 10)
    pts = np.sort(_stratified_unit(rng, 3, samples) * box, axis=1)
    face = np.sort(_stratified_unit(rng, 2, n_face) * box, axis=1)
    d = _diagonal_family(box)
    c = np.concatenate([pts[:, 0], np.zeros(face.shape[0]), d])
    a = np.concatenate([pts[:, 1], face[:, 0], d])
    b = np.concatenate([pts[:, 2], face[:, 1], d])
    L = lambda v: eval_symbol(sym, v, 0)
    lhs = L(a) + L(b) + L(c) - L(a + b + c)
    rep = _ratio_report("three_wave", a, b, lhs, {"box": box, "seed": seed})
    rep.params["c_at_argmin"] = float(c[int(np.argmin(lhs / _two_wave_comparand(a, b)))])
    return rep


def check_four_wave_bound(sym: Symbol, k: int, samples: int, seed: int = 0,
                          regime_threshold: int = 100,
                          comparand: str = "auto") -> BoundReport:
    """Zero-sum quadruples with |xi_i| ~ 2^k for i<=3 and |xi_4| <= 2^(k-5).

    Reports min/max of |sum L(xi_i)| / 2^(3k) below the regime threshold
    and / 2^(k/2) at or above it; ``comparand`` may force "low" (2^(3k))
    or "high" (2^(k/2)) for crossover scans.
    """
    if samples < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(seed)
    scale = 2.0 ** k
    n_draw = 4 * samples
    mag = rng.uniform(0.5 * scale, 2.0 * scale, size=(n_draw, 2))
    sgn = rng.choice([-1.0, 1.0], size=(n_draw, 2))
    xi12 = mag * sgn
    xi4 = rng.uniform(-scale / 32.0, scale / 32.0, size=n_draw)
    xi3 = -(xi12[:, 0] + xi12[:, 1] + xi4)
    keep = (np.abs(xi3) >= 0.5 * scale) & (np.abs(xi3) <= 2.0 * scale)
    if not np.any(keep):
        raise InfeasibleSampleError(
            f"zero-sum constraint leaves band 2^{k}+-1 for every draw"
        )
    xi1, xi2 = xi12[keep, 0][:samples], xi12[keep, 1][:samples]
    xi3, xi4 = xi3[keep][:samples], xi4[keep][:samples]
    L = lambda v: eval_symbol(sym, v, 0)
    lhs = np.abs(L(xi1) + L(xi2) + L(xi3) + L(xi4))
    if comparand == "auto":
        comparand = "high" if k >= regime_threshold else "low"
    denom = 2.0 ** (0.5 * k) if comparand == "high" else 2.0 ** (3 * k)
    ratio = lhs / denom
    i_min, i_max = int(np.argmin(ratio)), int(np.argmax(ratio))
    pt = lambda i: (float(xi1[i]), float(xi2[i]), float(xi3[i]), float(xi4[i]))
    return BoundReport(name="four_wave", samples=int(ratio.size),
                       min_ratio=float(ratio[i_min]), max_ratio=float(ratio[i_max]),
                       argmin=pt(i_min), argmax=pt(i_max),
                       params={"k": k, "comparand": comparand, "seed": seed})


# ---------------------------------------------------------------------------
# Gradient decomposition Phi_xi = m1 Phi + m2 Phi_eta + m3 Phi_sigma
# ---------------------------------------------------------------------------

def phixi_decomposition(sym: Symbol, p: ResonancePoint,
                        guard: float = 1e-8) -> tuple[float, float, float, float]:
    """Quotient multipliers (m1, m2, m3) and the identity residual.

    Requires xi > 0 and a sign channel with i1+i2+i3 = 1 (the identity
    is an algebraic consequence of those two facts).  Denominators
    within ``guard`` of zero raise NearSingularDenominatorError naming
    the offending quotient; such points are rejected, not regularized.
    """
    i1, i2, i3 = p.signs
    if i1 + i2 + i3 != 1:
        raise DomainError(
            f"sign channel {p.signs} does not satisfy i1+i2+i3 = 1"
        )
    if not p.xi > 0.0:
        raise DomainError(f"decomposition requires xi > 0, got xi={p.xi}")
    L = lambda v: eval_symbol(sym, v, 0)
    Lp = lambda v: eval_symbol(sym, v, 1)

    b_val = L(p.derived)
    b_slope = Lp(p.derived)
    d1 = L(abs(p.xi)) - i1 * b_val
    d2 = Lp(p.eta) - b_slope
    d3 = Lp(p.sigma) - b_slope
    for name, d in (("L(|xi|) - i1 L(xi-eta-sigma)", d1),
                    ("L'(eta) - L'(xi-eta-sigma)", d2),
                    ("L'(sigma) - L'(xi-eta-sigma)", d3)):
        if abs(d) < guard:
            raise NearSingularDenominatorError(
                f"denominator {name} = {d:.3e} within guard {guard:.1e}"
            )

    phi_xi = Lp(p.xi) - b_slope
    m1 = phi_xi / d1
    m2 = -i2 * m1 * (i2 * L(p.eta) - i1 * b_val) / d2
    m3 = -i3 * m1 * (i3 * L(p.sigma) - i1 * b_val) / d3

    val = phi(sym, p)
    _, phi_eta, phi_sigma = phi_gradient(sym, p)
    residual = abs(phi_xi - (m1 * val + m2 * phi_eta + m3 * phi_sigma))
    return m1, m2, m3, residual


def sample_multiplier_bounds(sym: Symbol, k: int, samples: int, seed: int = 0,
                             guard: float = 1e-8) -> dict:
    """Scan |m1| 2^k, |m2|, |m3| over the comparable-frequency region
    with sign channel (-,+,+); near-singular points are skipped."""
    rng = np.random.default_rng(seed)
    scale = 2.0 ** k
    m1s, m2s, m3s = [], [], []
    kept = 0
    for _ in range(samples):
        xi, eta, sigma = rng.uniform(0.75 * scale, 1.5 * scale, size=3)
        p = ResonancePoint(xi, eta, sigma, (-1, 1, 1))
        try:
            m1, m2, m3, _ = phixi_decomposition(sym, p, guard)
        except NearSingularDenominatorError:
            continue
        kept += 1
        m1s.append(abs(m1))
        m2s.append(abs(m2))
        m3s.append(abs(m3))
    if kept == 0:
        raise InfeasibleSampleError("all sampled points hit the denominator guard")
    return {
        "k": k, "kept": kept,
        "max_m1_scaled": float(np.max(m1s) * scale),
        "max_m2": float(np.max(m2s)),
        "max_m3": float(np.max(m3s)),
    }
