"""Periodic grids and complex spectral fields.

A GridSpec is a power-of-two periodic grid standing in for the line:
x runs over [-period/2, period/2) and the frequency lattice is
xi_j = 2 pi j / period for j in [-n/2, n/2), stored in numpy FFT order.

A SpectralField stores one complex field through its coefficients on
the lattice, in the unitary line-transform normalization

    c(xi_j) ~ (1/sqrt(2 pi)) integral u(x) exp(-i xi_j x) dx,

so that ||u||_L2^2 = sum |c_j|^2 * dxi (Parseval without stray factors).
Real fields are Hermitian-symmetric: c(-xi) = conj(c(xi)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from whithamlab.errors import DomainError, GridMismatchError


@dataclass(frozen=True)
class GridSpec:
    """Periodic spatial grid with its frequency lattice."""

    n: int
    period: float

    def __post_init__(self):
        if self.n <= 0 or self.n & (self.n - 1):
            raise DomainError(f"grid size {self.n} is not a power of two")
        if not (np.isfinite(self.period) and self.period > 0.0):
            raise DomainError(f"period {self.period} must be positive and finite")

    @property
    def dx(self) -> float:
        return self.period / self.n

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / self.period

    @property
    def nyquist(self) -> float:
        return np.pi * self.n / self.period

    @property
    def x(self) -> np.ndarray:
        """Centered spatial nodes in [-period/2, period/2)."""
        return -0.5 * self.period + self.dx * np.arange(self.n)

    @property
    def xi(self) -> np.ndarray:
        """Frequency lattice in numpy FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    def guard_time(self, speed: float = 1.0) -> float:
        """Wraparound guard: longest time content moving at ``speed`` stays
        within a quarter period of its origin."""
        if speed <= 0.0:
            return np.inf
        return 0.25 * self.period / speed

    def checked_same(self, other: "GridSpec") -> None:
        if self != other:
            raise GridMismatchError(f"grids differ: {self} vs {other}")


class SpectralField:
    """One complex field stored in Fourier space, real-space on demand."""

    __slots__ = ("grid", "coefficients")

    def __init__(self, grid: GridSpec, coefficients: np.ndarray):
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.shape != (grid.n,):
            raise DomainError(
                f"coefficient array of shape {coefficients.shape} does not fit grid n={grid.n}"
            )
        self.grid = grid
        self.coefficients = coefficients

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_values(cls, grid: GridSpec, values) -> "SpectralField":
        values = np.asarray(values)
        if values.shape != (grid.n,):
            raise DomainError(f"value array of shape {values.shape} does not fit grid n={grid.n}")
        coeff = np.fft.fft(values) * (grid.dx / np.sqrt(2.0 * np.pi))
        return cls(grid, coeff)

    @classmethod
    def from_spectrum(cls, grid: GridSpec, func) -> "SpectralField":
        """Sample a spectral profile xi -> c(xi) on the lattice."""
        return cls(grid, np.asarray(func(grid.xi), dtype=complex))

    @classmethod
    def zero(cls, grid: GridSpec) -> "SpectralField":
        return cls(grid, np.zeros(grid.n, dtype=complex))

    # -- transforms ---------------------------------------------------------

    @property
    def values(self) -> np.ndarray:
        """Complex real-space samples on grid.x."""
        return np.fft.ifft(self.coefficients) * (np.sqrt(2.0 * np.pi) / self.grid.dx)

    @property
    def real_values(self) -> np.ndarray:
        return self.values.real

    def padded_values(self, factor: int = 4) -> tuple[np.ndarray, np.ndarray]:
        """(x, u) on a ``factor`` times finer grid via spectral zero padding."""
        n, m = self.grid.n, self.grid.n * factor
        padded = np.zeros(m, dtype=complex)
        padded[: n // 2] = self.coefficients[: n // 2]
        padded[m - n // 2:] = self.coefficients[n // 2:]
        fine = GridSpec(m, self.grid.period)
        u = np.fft.ifft(padded) * (np.sqrt(2.0 * np.pi) / fine.dx)
        return fine.x, u

    # -- norms --------------------------------------------------------------

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coefficients) ** 2) * self.grid.dxi))

    def sup_norm(self, pad: int = 4) -> float:
        """max |u(x)| read off a zero-padded inverse transform."""
        _, u = self.padded_values(pad)
        return float(np.max(np.abs(u)))

    def hs_norm(self, s: float) -> float:
        """Sobolev norm with weight (1 + xi^2)^s."""
        w = (1.0 + self.grid.xi ** 2) ** s
        return float(np.sqrt(np.sum(w * np.abs(self.coefficients) ** 2) * self.grid.dxi))

    def z_norm(self, weight_exp: int = 4) -> float:
        """Weighted sup of the spectrum, max (1 + |xi|^w) |c(xi)|."""
        w = 1.0 + np.abs(self.grid.xi) ** weight_exp
        return float(np.max(w * np.abs(self.coefficients)))

    def x_weighted_l2(self) -> float:
        """||x u||_2 with the centered coordinate; equals ||d/dxi c||_2 by
        discrete duality for content away from the wrap boundary."""
        u = self.values
        return float(np.sqrt(np.sum(np.abs(self.grid.x * u) ** 2) * self.grid.dx))

    def dx_x_weighted_l2(self) -> float:
        """||d/dx (x u)||_2, again with the centered coordinate."""
        xu = SpectralField.from_values(self.grid, self.grid.x * self.values)
        return float(np.sqrt(
            np.sum(np.abs(self.grid.xi * xu.coefficients) ** 2) * self.grid.dxi))

    # -- algebra ------------------------------------------------------------

    def apply_multiplier(self, mult) -> "SpectralField":
        return SpectralField(self.grid, self.coefficients * np.asarray(mult))

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self.grid.checked_same(other.grid)
        return SpectralField(self.grid, self.coefficients + other.coefficients)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self.grid.checked_same(other.grid)
        return SpectralField(self.grid, self.coefficients - other.coefficients)

    def __mul__(self, scalar) -> "SpectralField":
        return SpectralField(self.grid, self.coefficients * scalar)

    __rmul__ = __mul__

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coefficients.copy())

    def hermitian_defect(self) -> float:
        """max |c(-xi) - conj(c(xi))| over the lattice (0 for real fields)."""
        c = self.coefficients
        mirrored = np.conj(np.concatenate(([c[0]], c[:0:-1])))
        return float(np.max(np.abs(c - mirrored)))


def gaussian_profile(grid: GridSpec, amplitude: float, width: float,
                     center: float = 0.0) -> SpectralField:
    """Real Gaussian bump amplitude * exp(-((x - center)/width)^2)."""
    u = amplitude * np.exp(-(((grid.x - center) / width) ** 2))
    return SpectralField.from_values(grid, u)
