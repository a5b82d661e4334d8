"""Periodic spectral grid: transforms, Fourier multipliers, Lebesgue norms.

The domain is the torus [-L, L) sampled on N uniform points.  All spectral
quantities use the normalization in which the coefficient of mode k equals
the continuum Fourier coefficient of the trigonometric interpolant, i.e.

    u(x) = sum_k  c_k exp(i xi_k x),      xi_k = pi k / L.

Coefficients are stored in standard FFT (unshifted) order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridSpec",
    "Field",
    "Spectrum",
    "MultiplierSpec",
    "make_grid",
    "make_field",
    "to_spectrum",
    "from_spectrum",
    "apply_multiplier",
    "helmholtz_inverse",
    "helmholtz_multiplier",
    "pd_multiplier",
    "apply_pd",
    "derivative",
    "lebesgue_norm",
    "dealias",
    "dealias_field",
    "integrate",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [-L, L) with N = 2**m points."""

    half_length: float
    num_points: int
    dx: float = field(init=False)

    def __post_init__(self):
        if self.half_length <= 0:
            raise ValueError("half_length must be positive")
        if not _is_power_of_two(self.num_points):
            raise ValueError(f"num_points must be a power of two, got {self.num_points}")
        if self.num_points < 16:
            raise ValueError("num_points must be at least 16")
        object.__setattr__(self, "dx", 2.0 * self.half_length / self.num_points)

    @property
    def nodes(self) -> np.ndarray:
        """Physical sample points x_i = -L + i dx."""
        L, N = self.half_length, self.num_points
        return -L + self.dx * np.arange(N)

    @property
    def mode_frequencies(self) -> np.ndarray:
        """Frequencies xi_k = pi k / L in FFT order (0, 1, ..., -1)."""
        N = self.num_points
        return (np.pi / self.half_length) * np.fft.fftfreq(N, d=1.0 / N)

    @property
    def max_frequency(self) -> float:
        """Nyquist frequency pi N / (2 L)."""
        return np.pi * self.num_points / (2.0 * self.half_length)


@dataclass(frozen=True)
class Field:
    """Real-valued grid function (samples of u at the grid nodes)."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.grid.num_points,):
            raise ValueError(
                f"values shape {vals.shape} does not match grid size {self.grid.num_points}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class Spectrum:
    """Complex Fourier coefficients in FFT mode order."""

    grid: GridSpec
    coefficients: np.ndarray

    def __post_init__(self):
        coef = np.asarray(self.coefficients, dtype=complex)
        if coef.shape != (self.grid.num_points,):
            raise ValueError(
                f"coefficients shape {coef.shape} does not match grid size {self.grid.num_points}"
            )
        coef = coef.copy()
        coef.flags.writeable = False
        object.__setattr__(self, "coefficients", coef)


@dataclass(frozen=True)
class MultiplierSpec:
    """Fourier multiplier given by its symbol xi -> m(xi)."""

    symbol: callable
    label: str = ""

    def sample(self, grid: GridSpec) -> np.ndarray:
        """Tabulate the symbol on the grid's mode frequencies."""
        return np.asarray(self.symbol(grid.mode_frequencies), dtype=complex)


def make_grid(L: float, N: int) -> GridSpec:
    """Build the periodic grid on [-L, L) with N points (power of two)."""
    return GridSpec(half_length=float(L), num_points=int(N))


def make_field(grid: GridSpec, values) -> Field:
    return Field(grid=grid, values=np.asarray(values, dtype=float))


def _mode_phase(grid: GridSpec) -> np.ndarray:
    # exp(-i xi_k * (-L)) = (-1)^k: accounts for the grid starting at x = -L,
    # so that coefficients match the interpolant sum_k c_k exp(i xi_k x)
    k = np.fft.fftfreq(grid.num_points, d=1.0 / grid.num_points).astype(int)
    return np.where(k % 2 == 0, 1.0, -1.0)


def to_spectrum(u: Field) -> Spectrum:
    """Forward transform; coefficient k is the interpolant's k-th coefficient."""
    coef = np.fft.fft(u.values) * (_mode_phase(u.grid) / u.grid.num_points)
    return Spectrum(grid=u.grid, coefficients=coef)


def from_spectrum(S: Spectrum, check_real: bool = True, tol: float = 1e-8) -> Field:
    """Inverse transform back to a real field.

    The imaginary residue is discarded after checking it is below `tol`
    relative to the overall spectrum scale (set `check_real=False` to skip).
    """
    grid = S.grid
    vals = np.fft.ifft(S.coefficients * _mode_phase(grid)) * grid.num_points
    if check_real:
        scale = float(np.sum(np.abs(S.coefficients)))  # sup bound for the field
        if scale > 0.0:
            resid = np.max(np.abs(vals.imag)) / scale
            if resid > tol:
                raise ValueError(
                    f"inverse transform has imaginary residue {resid:.3e} (> {tol:.0e}); "
                    "spectrum is not conjugate-symmetric"
                )
    return Field(grid=grid, values=vals.real)


def apply_multiplier(u: Field, m: MultiplierSpec) -> Field:
    """Apply the Fourier multiplier: F^{-1}(m(xi) F u)."""
    S = to_spectrum(u)
    coef = S.coefficients * m.sample(u.grid)
    return from_spectrum(Spectrum(grid=u.grid, coefficients=coef))


def helmholtz_multiplier() -> MultiplierSpec:
    """Symbol of (1 - d^2/dx^2)^{-1}."""
    return MultiplierSpec(symbol=lambda xi: 1.0 / (1.0 + xi**2), label="helmholtz_inverse")


def pd_multiplier() -> MultiplierSpec:
    """Symbol of -d/dx (1 - d^2/dx^2)^{-1}: the nonlocal part of the b-family flux."""
    return MultiplierSpec(symbol=lambda xi: -1j * xi / (1.0 + xi**2), label="pd")


def helmholtz_inverse(u: Field) -> Field:
    """Apply (1 - d^2/dx^2)^{-1} spectrally."""
    return apply_multiplier(u, helmholtz_multiplier())


def apply_pd(u: Field) -> Field:
    """Apply -d/dx (1 - d^2/dx^2)^{-1} spectrally."""
    return apply_multiplier(u, pd_multiplier())


def derivative(u: Field) -> Field:
    """Spectral derivative i xi u^; the (unpaired) Nyquist mode is zeroed."""
    grid = u.grid
    xi = grid.mode_frequencies
    sym = 1j * xi
    sym[grid.num_points // 2] = 0.0
    coef = np.fft.fft(u.values) / grid.num_points * sym
    vals = np.fft.ifft(coef).real * grid.num_points
    return Field(grid=grid, values=vals)


def lebesgue_norm(u: Field, p: float) -> float:
    """L^p norm on the torus: (dx sum |u_i|^p)^(1/p); max norm for p = inf."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(u.values)
    if np.isinf(p):
        return float(np.max(a)) if a.size else 0.0
    return float((u.grid.dx * np.sum(a**p)) ** (1.0 / p))


def integrate(u: Field) -> float:
    """Quadrature integral over the torus (exact trapezoid on a periodic grid)."""
    return float(u.grid.dx * np.sum(u.values))


def _dealias_mask(grid: GridSpec) -> np.ndarray:
    N = grid.num_points
    k = np.fft.fftfreq(N, d=1.0 / N)
    return np.abs(k) <= N // 3


def dealias(S: Spectrum) -> Spectrum:
    """Two-thirds rule: zero every coefficient with |k| > N/3."""
    coef = np.where(_dealias_mask(S.grid), S.coefficients, 0.0)
    return Spectrum(grid=S.grid, coefficients=coef)


def dealias_field(u: Field) -> Field:
    """Project a field onto the dealias-safe band |k| <= N/3."""
    return from_spectrum(dealias(to_spectrum(u)))
