"""Besov norms from dyadic blocks, index admissibility, inequality probes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, lebesgue_norm
from .lp import CutoffPair, build_cutoffs, decompose

__all__ = [
    "BesovParams",
    "besov_norm",
    "block_norms",
    "check_index_condition",
    "intersection_norm_low",
    "sobolev_norm",
    "interpolation_defect",
    "interpolation_endpoint_ratio",
    "product_ratio",
]


@dataclass(frozen=True)
class BesovParams:
    """Index triple (s, p, r) of the space B^s_{p,r}."""

    s: float
    p: float
    r: float

    def __post_init__(self):
        if not np.isfinite(self.s):
            raise ValueError("regularity index s must be finite")
        if self.p < 1 or self.r < 1:
            raise ValueError("integrability indices must lie in [1, inf]")


def check_index_condition(prm: BesovParams) -> bool:
    """Admissibility for the continuity theorems: s > max(3/2, 1 + 1/p), r < inf."""
    return prm.s > max(1.5, 1.0 + 1.0 / prm.p) and not np.isinf(prm.r)


def block_norms(u: Field, p: float, cut: CutoffPair | None = None):
    """L^p norms of all dyadic blocks, returned as (j_indices, norms)."""
    cut = cut or build_cutoffs()
    blocks = decompose(u, cut)
    js = np.array(list(blocks.indices()))
    norms = np.array([lebesgue_norm(blocks[j], p) for j in js])
    return js, norms


def besov_norm(u: Field, prm: BesovParams, cut: CutoffPair | None = None) -> float:
    """The norm (sum_j 2^{sjr} ||Delta_j u||_p^r)^{1/r}; sup over j for r = inf.

    The sum is truncated at the grid's j_max; higher blocks vanish exactly.
    """
    js, norms = block_norms(u, prm.p, cut)
    weighted = 2.0 ** (prm.s * js) * norms
    if np.isinf(prm.r):
        return float(np.max(weighted)) if weighted.size else 0.0
    return float(np.sum(weighted**prm.r) ** (1.0 / prm.r))


def intersection_norm_low(u: Field, p: float, cut: CutoffPair | None = None) -> float:
    """The B^{1/p}_{p,inf} (intersect) L^inf norm, taken as the max of the two."""
    b = besov_norm(u, BesovParams(s=1.0 / p, p=p, r=np.inf), cut)
    return max(b, lebesgue_norm(u, np.inf))


def sobolev_norm(u: Field, s: float) -> float:
    """Spectral H^s norm (2L sum (1+xi^2)^s |u^_k|^2)^{1/2}."""
    from .grid import to_spectrum

    grid = u.grid
    coef = to_spectrum(u).coefficients
    xi = grid.mode_frequencies
    return float(np.sqrt(2.0 * grid.half_length * np.sum((1.0 + xi**2) ** s * np.abs(coef) ** 2)))


def interpolation_defect(
    u: Field,
    s1: float,
    s2: float,
    theta: float,
    p: float,
    r: float,
    cut: CutoffPair | None = None,
) -> float:
    """Convexity defect of the Besov scale.

    Returns ||u||_{B^{th*s1+(1-th)*s2}} - ||u||_{B^{s1}}^th ||u||_{B^{s2}}^(1-th),
    which is <= 0 up to rounding (Hoelder on the weighted block sums).
    """
    if not s1 < s2:
        raise ValueError("requires s1 < s2")
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    cut = cut or build_cutoffs()
    s_mid = theta * s1 + (1.0 - theta) * s2
    n_mid = besov_norm(u, BesovParams(s_mid, p, r), cut)
    n1 = besov_norm(u, BesovParams(s1, p, r), cut)
    n2 = besov_norm(u, BesovParams(s2, p, r), cut)
    return n_mid - n1**theta * n2 ** (1.0 - theta)


def interpolation_endpoint_ratio(
    u: Field,
    s1: float,
    s2: float,
    theta: float,
    p: float,
    cut: CutoffPair | None = None,
) -> float:
    """Ratio probing the endpoint interpolation B_{p,inf} -> B_{p,1}.

    Returns ||u||_{B^{mid}_{p,1}} / (||u||_{B^{s1}_{p,inf}}^th ||u||_{B^{s2}_{p,inf}}^(1-th));
    the implied constant is only recorded by callers, never asserted.
    """
    if not s1 < s2:
        raise ValueError("requires s1 < s2")
    cut = cut or build_cutoffs()
    s_mid = theta * s1 + (1.0 - theta) * s2
    num = besov_norm(u, BesovParams(s_mid, p, 1.0), cut)
    den = besov_norm(u, BesovParams(s1, p, np.inf), cut) ** theta
    den *= besov_norm(u, BesovParams(s2, p, np.inf), cut) ** (1.0 - theta)
    if den == 0.0:
        raise ValueError("ratio undefined for the zero field")
    return num / den


def product_ratio(u: Field, v: Field, prm: BesovParams, cut: CutoffPair | None = None) -> float:
    """Empirical constant of the product estimate.

    Returns ||uv||_{B^s} / (||u||_{B^s} ||v||_inf + ||v||_{B^s} ||u||_inf).
    The estimate asserts a uniform bound; sweeps record the supremum.
    """
    if prm.s <= 0:
        raise ValueError("product estimate requires s > 0")
    cut = cut or build_cutoffs()
    denom = besov_norm(u, prm, cut) * lebesgue_norm(v, np.inf)
    denom += besov_norm(v, prm, cut) * lebesgue_norm(u, np.inf)
    if denom == 0.0:
        raise ValueError("product ratio undefined: zero denominator")
    uv = Field(grid=u.grid, values=u.values * v.values)
    return besov_norm(uv, prm, cut) / denom
