"""Independent reduced-model oracles used to set experiment thresholds.

The frozen-phase oracle predicts the growth of the solution-map gap between
the packet data with and without the low-frequency companion: freezing the
transport velocity to the companion bump shifts the packet phase by about
t * phi(x) (the carrier frequency and the companion amplitude are exact
reciprocals), so the gap field is

    g_n(x) + 2^{-ns} phi(x) [sin(alpha_n (x - t g_n(x))) - sin(alpha_n x)].

Its fitted Besov-norm slope is the reference constant c_pred; experiment
acceptance thresholds are fixed fractions of it.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .besov import BesovParams, besov_norm
from .data import ProfilePhi, carrier_frequency, make_g_n
from .grid import Field, GridSpec
from .lp import CutoffPair, build_cutoffs

__all__ = [
    "frozen_phase_gap",
    "frozen_phase_curve",
    "frozen_phase_slope",
    "periodized_kernel",
    "reference_path",
    "load_reference",
]


def frozen_phase_gap(grid: GridSpec, phi: ProfilePhi, n: int, s: float, t: float) -> Field:
    """Predicted difference field at time t under the frozen-phase reduction."""
    alpha = carrier_frequency(grid, n)
    gn = make_g_n(grid, phi, n)
    x = grid.nodes
    vals = gn.values + 2.0 ** (-n * s) * phi.field.values * (
        np.sin(alpha * (x - t * gn.values)) - np.sin(alpha * x)
    )
    return Field(grid=grid, values=vals)


def frozen_phase_curve(
    grid: GridSpec,
    phi: ProfilePhi,
    n: int,
    prm: BesovParams,
    times,
    cut: CutoffPair | None = None,
) -> np.ndarray:
    """Besov norms of the predicted gap at the given sample times."""
    cut = cut or build_cutoffs()
    return np.array(
        [besov_norm(frozen_phase_gap(grid, phi, n, prm.s, t), prm, cut) for t in times]
    )


def frozen_phase_slope(
    grid: GridSpec,
    phi: ProfilePhi,
    n: int,
    prm: BesovParams,
    times,
    cut: CutoffPair | None = None,
) -> float:
    """c_pred: through-origin least-squares slope of the predicted gap curve."""
    ts = np.asarray(times, dtype=float)
    vals = frozen_phase_curve(grid, phi, n, prm, ts, cut)
    return float(np.sum(ts * vals) / np.sum(ts * ts))


def periodized_kernel(grid: GridSpec, x0: float = 0.0, images: int = 3) -> np.ndarray:
    """Direct summation of the periodized Helmholtz kernel (1/2) e^{-|x - x0 + 2Lm|}."""
    L = grid.half_length
    x = grid.nodes
    total = np.zeros_like(x)
    for m in range(-images, images + 1):
        total += 0.5 * np.exp(-np.abs(x - x0 + 2.0 * L * m))
    return total


def reference_path() -> Path:
    return Path(__file__).parent / "reference" / "frozen_phase.json"


def load_reference() -> dict:
    """Committed frozen-phase reference slopes (regenerate via the oracle command)."""
    with open(reference_path()) as fh:
        return json.load(fh)
