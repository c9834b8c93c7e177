"""Dispersion symbols and their first three derivatives.

The full-dispersion symbol is L(xi) = xi * sqrt(tanh(xi)/xi), odd in xi,
with L'(0) = 1 and L(xi) ~ sign(xi) sqrt(|xi|) at high frequency.  The
direct formula degenerates at xi = 0 (0/0 in the square root and heavy
cancellation in the derivatives), so below a crossover threshold the
symbol and its derivatives are evaluated from the Maclaurin series of
sqrt(tanh(xi)/xi), differentiated term by term.

Comparison symbols: the cubic low-frequency model xi - xi^3/6 ("kdv"),
the power-law family sign(xi)|xi|^(alpha+1) ("fkdv"), and the
infinite-depth gravity branch sign(xi) sqrt(|xi|) ("half_wave").
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from whithamlab.errors import DomainError, NoStationaryPointError, UnsupportedOrderError

# Maclaurin coefficients of sqrt(tanh(xi)/xi) = sum c_j xi^(2j), exact
# rationals evaluated in double precision.  Truncated at xi^16 so that the
# term-by-term third derivative still meets the 1e-12 crossover tolerance.
_SERIES = np.array([
    1.0,
    -1.0 / 6.0,                    # -1/6
    19.0 / 360.0,                  # 19/360
    -55.0 / 3024.0,                # -55/3024
    11813.0 / 1814400.0,           # 11813/1814400
    -2117.0 / 887040.0,            # -2117/887040
    64604977.0 / 72648576000.0,    # 64604977/72648576000
    -263101079.0 / 784604620800.0,  # -263101079/784604620800
    1768132943.0 / 13857951744000.0,  # 1768132943/13857951744000
])

_KINDS = ("whitham", "kdv", "fkdv", "half_wave")

# L'(xi) for the Whitham symbol lies in (0, 1) on (0, inf).
GROUP_VELOCITY_RANGE = (0.0, 1.0)


@dataclass(frozen=True)
class Symbol:
    """A dispersion relation with value and first three derivatives.

    ``zero_threshold`` is the |xi| below which the series branch is used;
    the default keeps the series/direct crossover error below 1e-12.
    """

    kind: str = "whitham"
    alpha: float | None = None
    zero_threshold: float = 0.05

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown symbol kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind == "fkdv":
            if self.alpha is None:
                raise DomainError("fkdv symbol requires an exponent alpha")
            if not (-1.0 < self.alpha <= 2.0):
                raise DomainError(f"fkdv exponent alpha={self.alpha} outside (-1, 2]")
        elif self.alpha is not None:
            raise DomainError(f"alpha is only meaningful for the fkdv symbol, not {self.kind!r}")
        if not (0.0 < self.zero_threshold < 1.0):
            raise DomainError(f"zero_threshold {self.zero_threshold} outside (0, 1)")

    @classmethod
    def whitham(cls, zero_threshold: float = 0.05) -> "Symbol":
        return cls("whitham", zero_threshold=zero_threshold)

    @classmethod
    def kdv(cls) -> "Symbol":
        return cls("kdv")

    @classmethod
    def fkdv(cls, alpha: float) -> "Symbol":
        return cls("fkdv", alpha=alpha)

    @classmethod
    def half_wave(cls) -> "Symbol":
        return cls("half_wave")

    def __call__(self, xi, order: int = 0):
        return eval_symbol(self, xi, order)


def _whitham_series(a: np.ndarray, order: int) -> np.ndarray:
    """Derivative of L(xi) = sum c_j xi^(2j+1) at xi = a >= 0, term by term."""
    out = np.zeros_like(a)
    for j, c in enumerate(_SERIES):
        p = 2 * j + 1
        coeff = c
        for _ in range(order):
            coeff *= p
            p -= 1
        if p < 0 or coeff == 0.0:
            continue
        out += coeff * a ** p
    return out


def _whitham_direct(a: np.ndarray, order: int) -> np.ndarray:
    """Closed-form derivatives of sqrt(xi tanh xi) at xi = a > 0."""
    th = np.tanh(a)
    # sech^2 without cosh overflow at large arguments
    e = np.exp(-a)
    sech2 = (2.0 * e / (1.0 + e * e)) ** 2
    g = a * th
    if order == 0:
        return np.sqrt(g)
    gp = th + a * sech2
    if order == 1:
        return gp / (2.0 * np.sqrt(g))
    gpp = 2.0 * sech2 * (1.0 - g)
    if order == 2:
        return (2.0 * g * gpp - gp * gp) / (4.0 * g ** 1.5)
    gppp = -6.0 * sech2 * th - 2.0 * a * sech2 * sech2 + 4.0 * a * sech2 * th * th
    return (4.0 * g * g * gppp - 3.0 * gp * (2.0 * g * gpp - gp * gp)) / (8.0 * g ** 2.5)


def _whitham(a: np.ndarray, order: int, threshold: float) -> np.ndarray:
    small = a < threshold
    out = np.empty_like(a)
    if np.any(small):
        out[small] = _whitham_series(a[small], order)
    if np.any(~small):
        out[~small] = _whitham_direct(a[~small], order)
    return out


def _kdv(a: np.ndarray, order: int) -> np.ndarray:
    if order == 0:
        return a - a ** 3 / 6.0
    if order == 1:
        return 1.0 - a * a / 2.0
    if order == 2:
        return -a
    return np.full_like(a, -1.0)


def _power_law(a: np.ndarray, order: int, alpha: float) -> np.ndarray:
    """Derivatives of |xi|^(alpha+1) at xi = a >= 0."""
    coeff = 1.0
    p = alpha + 1.0
    for _ in range(order):
        coeff *= p
        p -= 1.0
    if coeff == 0.0:
        return np.zeros_like(a)
    with np.errstate(divide="ignore"):
        out = coeff * a ** p
    return out


def eval_symbol(sym: Symbol, xi, order: int = 0):
    """Evaluate the order-th derivative of the dispersion symbol at xi.

    Vectorized over xi; scalar input returns a float.  Raises
    UnsupportedOrderError for order outside 0..3 and DomainError for
    non-finite xi or a power-law derivative singular at xi = 0.
    """
    if not isinstance(order, (int, np.integer)) or not 0 <= order <= 3:
        raise UnsupportedOrderError(f"order {order!r} outside the implemented range 0..3")
    x = np.asarray(xi, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if not np.all(np.isfinite(x)):
        raise DomainError("symbol evaluation requires finite xi")
    a = np.abs(x)

    if sym.kind == "whitham":
        vals = _whitham(a, order, sym.zero_threshold)
    elif sym.kind == "kdv":
        vals = _kdv(a, order)
    else:
        alpha = -0.5 if sym.kind == "half_wave" else float(sym.alpha)
        if order >= 1 and alpha < 1.0 and np.any(a == 0.0):
            raise DomainError(
                f"derivative of order {order} of the |xi|^{alpha} model is singular at xi = 0"
            )
        vals = _power_law(a, order, alpha)

    # L is odd, so even-order derivatives are odd and flip sign with xi.
    if order in (0, 2):
        vals = vals * np.sign(x)
    out = vals
    return float(out[0]) if scalar else out


def invert_group_velocity(sym: Symbol, c: float) -> float:
    """Positive root xi0 of L'(xi0) = c.

    For the Whitham symbol, L' maps (0, inf) monotonically onto (0, 1);
    c outside that open interval has no stationary point and raises
    NoStationaryPointError.  The root is bracketed, solved by Brent's
    method and polished by Newton to |L'(xi0) - c| < 1e-12.
    """
    c = float(c)
    if sym.kind == "whitham":
        lo, hi = GROUP_VELOCITY_RANGE
        if not (lo < c < hi):
            raise NoStationaryPointError(
                f"group velocity {c} outside ({lo}, {hi}): no stationary point"
            )
        left = 1e-12
        right = 1.0
        while eval_symbol(sym, right, 1) > c:
            right *= 2.0
            if right > 1e14:  # unreachable for c > 0
                raise NoStationaryPointError(f"failed to bracket group velocity {c}")
        root = brentq(lambda z: eval_symbol(sym, z, 1) - c, left, right,
                      xtol=1e-15, rtol=1e-15, maxiter=200)
        for _ in range(2):
            deriv = eval_symbol(sym, root, 2)
            if deriv != 0.0:
                delta = (eval_symbol(sym, root, 1) - c) / deriv
                if abs(delta) < 0.5 * root:
                    root -= delta
        return float(root)
    if sym.kind == "kdv":
        if not (0.0 < c < 1.0):
            raise NoStationaryPointError(f"group velocity {c} outside (0, 1) for the cubic model")
        return float(np.sqrt(2.0 * (1.0 - c)))
    alpha = -0.5 if sym.kind == "half_wave" else float(sym.alpha)
    if alpha == 0.0 or c <= 0.0:
        raise NoStationaryPointError(f"group velocity {c} not attained by the |xi|^{alpha} model")
    return float((c / (alpha + 1.0)) ** (1.0 / alpha))
