"""Explicit initial data: the band-limited bump phi, high-frequency packets,
their shifted combinations, peakons, and generic presets.

The packet carrier frequency (17/12) 2^n is snapped to the nearest grid mode
so that the packet spectrum is an exact (shifted) copy of the bump spectrum;
otherwise the carrier would be aperiodic on the torus and leak across blocks.
The snap perturbs the carrier by at most half a mode spacing, which keeps the
packet inside the single dyadic annulus j = n for every n >= 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, GridSpec, Spectrum, from_spectrum, to_spectrum
from .lp import smooth_ramp

__all__ = [
    "ProfilePhi",
    "PacketSpec",
    "build_phi",
    "carrier_frequency",
    "make_f_n",
    "make_g_n",
    "make_v",
    "make_peakon",
    "make_smoothed_peakon",
    "preset_u0",
    "translate",
    "max_packet_index",
]

PLATEAU_RADIUS = 0.25
SUPPORT_RADIUS = 0.5
CARRIER_RATIO = 17.0 / 12.0
GN_AMPLITUDE = 12.0 / 17.0


def bump_symbol(xi) -> np.ndarray:
    """The hat profile phi^: even, in [0,1], == 1 for |xi| <= 1/4, 0 for |xi| >= 1/2."""
    a = np.abs(np.asarray(xi, dtype=float))
    out = smooth_ramp((SUPPORT_RADIUS - a) / (SUPPORT_RADIUS - PLATEAU_RADIUS))
    out = np.where(a <= PLATEAU_RADIUS, 1.0, out)
    out = np.where(a >= SUPPORT_RADIUS, 0.0, out)
    return out


@dataclass(frozen=True)
class ProfilePhi:
    """Samples of the bump phi whose transform is supported in |xi| <= 1/2."""

    field: Field
    fourier_support_radius: float = SUPPORT_RADIUS
    plateau_radius: float = PLATEAU_RADIUS


def build_phi(grid: GridSpec) -> ProfilePhi:
    """Periodization of the bump: coefficients phi^(xi_k) / (2L).

    This matches the quadrature of the continuum inverse transform, so the
    grid samples converge to the line profile as L grows.
    """
    dxi = np.pi / grid.half_length
    if SUPPORT_RADIUS / dxi < 8:
        raise ValueError(
            f"grid too coarse in frequency: only {SUPPORT_RADIUS / dxi:.1f} modes "
            "below the bump support radius (need >= 8; increase L)"
        )
    coef = bump_symbol(grid.mode_frequencies) / (2.0 * grid.half_length)
    return ProfilePhi(field=from_spectrum(Spectrum(grid=grid, coefficients=coef)))


def carrier_frequency(grid: GridSpec, n: int) -> float:
    """(17/12) 2^n snapped to the nearest grid mode frequency."""
    dxi = np.pi / grid.half_length
    return round(CARRIER_RATIO * 2.0**n / dxi) * dxi


def max_packet_index(grid: GridSpec) -> int:
    """Largest n whose packet is resolvable and dealias-safe on the grid."""
    limit = (2.0 / 3.0) * grid.max_frequency
    n = 3
    while CARRIER_RATIO * 2.0 ** (n + 1) + SUPPORT_RADIUS <= limit:
        n += 1
    return n


@dataclass(frozen=True)
class PacketSpec:
    """Parameters of the shifted packet (f_n + omega g_n)(x - m)."""

    n: int
    omega: int
    shift: float
    s: float

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("packet index n must be >= 3 (single-block localization)")
        if self.omega not in (0, 1):
            raise ValueError("omega must be 0 or 1")

    def validate(self, grid: GridSpec) -> None:
        if CARRIER_RATIO * 2.0**self.n + SUPPORT_RADIUS > (2.0 / 3.0) * grid.max_frequency:
            raise ValueError(f"packet n={self.n} not resolvable on this grid (dealias-safe bound)")
        steps = self.shift / grid.dx
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError(f"shift {self.shift} is not an integer multiple of dx")


def make_f_n(grid: GridSpec, phi: ProfilePhi, n: int, s: float) -> Field:
    """High-frequency packet 2^{-ns} phi(x) sin(alpha_n x)."""
    if CARRIER_RATIO * 2.0**n + SUPPORT_RADIUS > (2.0 / 3.0) * grid.max_frequency:
        raise ValueError(f"packet n={n} not resolvable on this grid (dealias-safe bound)")
    alpha = carrier_frequency(grid, n)
    vals = 2.0 ** (-n * s) * phi.field.values * np.sin(alpha * grid.nodes)
    return Field(grid=grid, values=vals)


def make_g_n(grid: GridSpec, phi: ProfilePhi, n: int) -> Field:
    """Low-frequency companion (12/17) 2^{-n} phi(x)."""
    return Field(grid=grid, values=GN_AMPLITUDE * 2.0 ** (-float(n)) * phi.field.values)


def translate(u: Field, m: float, spectral: bool = False) -> Field:
    """Translate u by m: index roll for grid-aligned m, phase shift otherwise."""
    grid = u.grid
    steps = m / grid.dx
    if not spectral:
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError(f"shift {m} is not grid-aligned; use spectral=True")
        return Field(grid=grid, values=np.roll(u.values, int(round(steps))))
    S = to_spectrum(u)
    coef = S.coefficients * np.exp(-1j * grid.mode_frequencies * m)
    return from_spectrum(Spectrum(grid=grid, coefficients=coef))


def make_v(grid: GridSpec, phi: ProfilePhi, spec: PacketSpec, spectral_shift: bool = False) -> Field:
    """The shifted combination (f_n + omega g_n)(x - m)."""
    spec.validate(grid)
    f = make_f_n(grid, phi, spec.n, spec.s)
    vals = f.values
    if spec.omega:
        vals = vals + make_g_n(grid, phi, spec.n).values
    return translate(Field(grid=grid, values=vals), spec.shift, spectral=spectral_shift)


def make_peakon(grid: GridSpec, c: float, x0: float = 0.0) -> Field:
    """Periodized peakon c cosh(L - |x - x0|_per) / sinh(L).

    Reduces to the line peakon c e^{-|x - x0|} as L grows.
    """
    L = grid.half_length
    d = np.abs((grid.nodes - x0 + L) % (2.0 * L) - L)
    return Field(grid=grid, values=c * np.cosh(L - d) / np.sinh(L))


def make_smoothed_peakon(grid: GridSpec, c: float = 1.0, width: float = 0.3, x0: float = 0.0) -> Field:
    """Peakon mollified by a Gaussian of the given width.

    Computed spectrally: the periodized peakon has exact coefficients
    c / (L (1 + xi^2)), multiplied by exp(-(width xi)^2 / 2).
    """
    xi = grid.mode_frequencies
    coef = c / (grid.half_length * (1.0 + xi**2)) * np.exp(-0.5 * (width * xi) ** 2)
    u = from_spectrum(Spectrum(grid=grid, coefficients=coef.astype(complex)))
    if x0 != 0.0:
        u = translate(u, x0, spectral=True)
    return u


def preset_u0(name: str, grid: GridSpec, phi: ProfilePhi | None = None) -> Field:
    """Named deterministic initial data concentrated near x = 0.

    Recognized names: zero, gaussian, low_band_random(seed),
    smoothed_peakon(width), power_tail(q).
    """
    name = name.strip()
    if name == "zero":
        return Field(grid=grid, values=np.zeros(grid.num_points))
    if name == "gaussian":
        return Field(grid=grid, values=np.exp(-(grid.nodes**2)))
    if name.startswith("low_band_random"):
        seed = int(_argument(name, "low_band_random", default="0"))
        return _low_band_random(grid, seed)
    if name.startswith("smoothed_peakon"):
        width = float(_argument(name, "smoothed_peakon", default="0.3"))
        return make_smoothed_peakon(grid, c=1.0, width=width)
    if name.startswith("power_tail"):
        q = float(_argument(name, "power_tail", default="3.5"))
        return _power_tail(grid, q)
    raise ValueError(f"unknown preset initial datum: {name!r}")


def _argument(name: str, stem: str, default: str) -> str:
    rest = name[len(stem):]
    if not rest:
        return default
    if rest.startswith("(") and rest.endswith(")"):
        return rest[1:-1] or default
    raise ValueError(f"malformed preset name: {name!r}")


def _power_tail(grid: GridSpec, q: float) -> Field:
    """Smooth datum with algebraic spectral tail (1 + xi^2)^{-q/2}.

    The dyadic tail norms halve geometrically in n, which makes ratio
    statistics against the truncated tail stable under extending the index
    range (a Gaussian tail instead underflows within a few blocks).
    """
    if q <= 1.0:
        raise ValueError("power_tail exponent must exceed 1 for a summable tail")
    xi = grid.mode_frequencies
    coef = (1.0 + xi**2) ** (-0.5 * q) / grid.half_length
    return from_spectrum(Spectrum(grid=grid, coefficients=coef.astype(complex)))


def _low_band_random(grid: GridSpec, seed: int) -> Field:
    """Random field with Gaussian coefficients on |xi| <= 4, smooth tail weight."""
    rng = np.random.default_rng(seed)
    xi = grid.mode_frequencies
    N = grid.num_points
    re = rng.standard_normal(N)
    im = rng.standard_normal(N)
    envelope = np.exp(-(xi**2)) * (np.abs(xi) <= 4.0)
    coef = (re + 1j * im) * envelope / np.sqrt(2.0 * grid.half_length)
    # enforce Hermitian symmetry so the field is real
    k = np.fft.fftfreq(N, d=1.0 / N).astype(int)
    conj = coef[(-k) % N].conj()
    coef = 0.5 * (coef + conj)
    return from_spectrum(Spectrum(grid=grid, coefficients=coef))
