import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfamlab.besov import (
    BesovParams,
    besov_norm,
    block_norms,
    check_index_condition,
    interpolation_defect,
    interpolation_endpoint_ratio,
    intersection_norm_low,
    product_ratio,
    sobolev_norm,
)
from bfamlab.data import translate
from bfamlab.grid import make_field, make_grid


def _random_field(grid, seed, band=None):
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal(grid.num_points)
    u = make_field(grid, vals)
    if band is not None:
        from bfamlab.lp import build_cutoffs, low_pass

        u = low_pass(u, band, build_cutoffs())
    return u


def test_params_validation():
    with pytest.raises(ValueError):
        BesovParams(s=np.nan, p=2, r=2)
    with pytest.raises(ValueError):
        BesovParams(s=2, p=0.5, r=2)
    BesovParams(s=2, p=np.inf, r=np.inf)  # endpoints allowed


def test_index_condition():
    assert check_index_condition(BesovParams(2, 2, 2))
    assert check_index_condition(BesovParams(2, np.inf, 2))
    assert not check_index_condition(BesovParams(1.4, 2, 2))  # s <= 3/2
    assert not check_index_condition(BesovParams(1.9, 1, 2))  # s <= 1 + 1/p
    assert not check_index_condition(BesovParams(2, 2, np.inf))  # r = inf


def test_besov_h_s_agreement(grid_small, cut):
    """B^s_{2,2} and the spectral H^s norm agree up to the cutoff overlap
    (equivalent norms; for block-localized data they are close)."""
    g = grid_small
    u = make_field(g, np.cos(2.0 * g.nodes))
    b = besov_norm(u, BesovParams(2.0, 2.0, 2.0), cut)
    h = sobolev_norm(u, 2.0)
    assert 0.3 * h <= b <= 3.0 * h


def test_besov_scaling_in_s(grid_small, cut):
    """For a single-block function the norm scales like 2^{js}."""
    g = grid_small
    # xi = 22 lies in the plateau of the j=4 annulus ([4/3, 3/2] * 2^4)
    u = make_field(g, np.sin(22.0 * g.nodes))
    js, norms = block_norms(u, 2.0, cut)
    mass = {int(j): n for j, n in zip(js, norms) if n > 1e-12}
    assert set(mass) == {4}
    for s in (0.5, 1.0, 2.0):
        b = besov_norm(u, BesovParams(s, 2.0, 2.0), cut)
        assert b == pytest.approx(2.0 ** (4 * s) * mass[4], rel=1e-12)


def test_besov_translation_invariance(grid_small, cut):
    u = _random_field(grid_small, 21, band=5)
    prm = BesovParams(2.0, 2.0, 2.0)
    shifted = translate(u, 32 * grid_small.dx)
    assert besov_norm(shifted, prm, cut) == pytest.approx(besov_norm(u, prm, cut), rel=1e-12)


def test_besov_r_monotone(grid_small, cut):
    """l^r monotonicity: larger r gives a smaller (or equal) norm."""
    u = _random_field(grid_small, 4)
    for p in (2.0, 4.0):
        n1 = besov_norm(u, BesovParams(1.5, p, 1.0), cut)
        n2 = besov_norm(u, BesovParams(1.5, p, 2.0), cut)
        ninf = besov_norm(u, BesovParams(1.5, p, np.inf), cut)
        assert n1 >= n2 >= ninf > 0


def test_intersection_norm_low(grid_small, cut):
    u = make_field(grid_small, np.cos(2.0 * grid_small.nodes))
    n = intersection_norm_low(u, 2.0, cut)
    assert n >= 1.0 - 1e-9  # at least the sup norm


def test_sobolev_norm_exact_on_mode():
    g = make_grid(8.0, 256)
    xi = np.pi * 4 / 8.0
    u = make_field(g, np.cos(xi * g.nodes))
    # ||cos||_{L^2}^2 = L; H^s adds (1+xi^2)^s
    expected = np.sqrt((1.0 + xi**2) ** 2 * 8.0)
    assert sobolev_norm(u, 2.0) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.floats(min_value=0.1, max_value=0.9))
def test_interpolation_defect_nonpositive(seed, theta):
    g = make_grid(16.0 * np.pi, 2**10)
    u = _random_field(g, seed)
    d = interpolation_defect(u, s1=1.0, s2=3.0, theta=theta, p=2.0, r=2.0)
    norm = besov_norm(u, BesovParams(2.0, 2.0, 2.0))
    assert d <= 1e-12 * max(1.0, norm)


def test_interpolation_defect_validation(grid_small):
    u = _random_field(grid_small, 1)
    with pytest.raises(ValueError):
        interpolation_defect(u, 2.0, 1.0, 0.5, 2.0, 2.0)
    with pytest.raises(ValueError):
        interpolation_defect(u, 1.0, 2.0, 1.5, 2.0, 2.0)


def test_endpoint_ratio_positive(grid_small, cut):
    u = _random_field(grid_small, 2, band=5)
    r = interpolation_endpoint_ratio(u, 1.0, 3.0, 0.5, 2.0, cut)
    assert 0.0 < r < 100.0


def test_product_ratio_bounded(grid_small, cut):
    u = _random_field(grid_small, 5, band=4)
    v = _random_field(grid_small, 6, band=4)
    r = product_ratio(u, v, BesovParams(2.0, 2.0, 2.0), cut)
    assert 0.0 < r < 10.0
    with pytest.raises(ValueError):
        product_ratio(u, v, BesovParams(-1.0, 2.0, 2.0), cut)
