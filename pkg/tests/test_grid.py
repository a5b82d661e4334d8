import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfamlab.grid import (
    Spectrum,
    apply_pd,
    dealias,
    dealias_field,
    derivative,
    from_spectrum,
    helmholtz_inverse,
    integrate,
    lebesgue_norm,
    make_field,
    make_grid,
    to_spectrum,
)


def test_grid_validation():
    with pytest.raises(ValueError):
        make_grid(-1.0, 64)
    with pytest.raises(ValueError):
        make_grid(10.0, 48)  # not a power of two
    with pytest.raises(ValueError):
        make_grid(10.0, 8)  # too small


def test_grid_geometry():
    g = make_grid(8.0, 64)
    assert g.dx == pytest.approx(0.25)
    assert g.nodes[0] == pytest.approx(-8.0)
    assert g.nodes[-1] == pytest.approx(8.0 - g.dx)
    assert g.max_frequency == pytest.approx(math.pi * 64 / 16.0)
    xi = g.mode_frequencies
    assert xi[0] == 0.0
    assert xi[1] == pytest.approx(math.pi / 8.0)


def test_field_rejects_bad_values():
    g = make_grid(8.0, 64)
    with pytest.raises(ValueError):
        make_field(g, np.full(64, np.nan))
    with pytest.raises(ValueError):
        make_field(g, np.zeros(32))


def test_field_immutable():
    g = make_grid(8.0, 64)
    u = make_field(g, np.zeros(64))
    with pytest.raises(ValueError):
        u.values[0] = 1.0


def test_transform_coefficients_of_pure_modes():
    """cos and sin modes land on the expected coefficients with the grid
    starting at x = -L."""
    g = make_grid(8.0, 256)
    k = 3
    xi = math.pi * k / 8.0
    S = to_spectrum(make_field(g, np.cos(xi * g.nodes)))
    c = S.coefficients
    assert c[k] == pytest.approx(0.5, abs=1e-12)
    assert c[-k] == pytest.approx(0.5, abs=1e-12)
    S = to_spectrum(make_field(g, np.sin(xi * g.nodes)))
    c = S.coefficients
    assert c[k] == pytest.approx(-0.5j, abs=1e-12)
    assert c[-k] == pytest.approx(0.5j, abs=1e-12)


def test_transform_round_trip():
    g = make_grid(10.0, 128)
    rng = np.random.default_rng(3)
    u = make_field(g, rng.standard_normal(128))
    v = from_spectrum(to_spectrum(u))
    np.testing.assert_allclose(v.values, u.values, atol=1e-12)


def test_from_spectrum_rejects_asymmetric():
    g = make_grid(10.0, 64)
    coef = np.zeros(64, dtype=complex)
    coef[5] = 1.0  # no conjugate partner
    with pytest.raises(ValueError, match="imaginary residue"):
        from_spectrum(Spectrum(grid=g, coefficients=coef))
    # same spectrum is accepted with the check disabled
    from_spectrum(Spectrum(grid=g, coefficients=coef), check_real=False)


def test_derivative_exact_on_modes():
    g = make_grid(8.0, 256)
    xi = math.pi * 5 / 8.0
    u = make_field(g, np.sin(xi * g.nodes))
    du = derivative(u)
    np.testing.assert_allclose(du.values, xi * np.cos(xi * g.nodes), atol=1e-10)


def test_helmholtz_inverse_on_mode():
    g = make_grid(8.0, 256)
    xi = math.pi * 4 / 8.0
    u = make_field(g, np.cos(xi * g.nodes))
    v = helmholtz_inverse(u)
    np.testing.assert_allclose(v.values, u.values / (1.0 + xi**2), atol=1e-12)


def test_pd_multiplier_on_mode():
    """-dx(1-dxx)^{-1} sin(xi x) = -xi/(1+xi^2) cos(xi x)."""
    g = make_grid(8.0, 256)
    xi = math.pi * 6 / 8.0
    u = make_field(g, np.sin(xi * g.nodes))
    v = apply_pd(u)
    np.testing.assert_allclose(v.values, -xi / (1.0 + xi**2) * np.cos(xi * g.nodes), atol=1e-12)


def test_lebesgue_norms():
    g = make_grid(4.0, 64)
    u = make_field(g, np.ones(64))
    assert lebesgue_norm(u, 2.0) == pytest.approx(math.sqrt(8.0))
    assert lebesgue_norm(u, 1.0) == pytest.approx(8.0)
    assert lebesgue_norm(u, np.inf) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        lebesgue_norm(u, 0.5)


def test_parseval():
    g = make_grid(16.0, 512)
    rng = np.random.default_rng(11)
    u = make_field(g, rng.standard_normal(512))
    S = to_spectrum(u)
    assert lebesgue_norm(u, 2.0) ** 2 == pytest.approx(
        2.0 * g.half_length * float(np.sum(np.abs(S.coefficients) ** 2)), rel=1e-12
    )


def test_integrate_is_mean_coefficient():
    g = make_grid(4.0, 128)
    u = make_field(g, 1.5 + np.sin(math.pi * g.nodes / 4.0))
    assert integrate(u) == pytest.approx(1.5 * 8.0, abs=1e-12)


def test_dealias_zeroes_top_third():
    g = make_grid(8.0, 128)
    coef = np.ones(128, dtype=complex)
    S = dealias(Spectrum(grid=g, coefficients=coef))
    k = np.fft.fftfreq(128, d=1.0 / 128)
    assert np.all(S.coefficients[np.abs(k) > 128 // 3] == 0)
    assert np.all(S.coefficients[np.abs(k) <= 128 // 3] == 1)


def test_dealias_field_idempotent():
    g = make_grid(8.0, 128)
    rng = np.random.default_rng(5)
    u = make_field(g, rng.standard_normal(128))
    once = dealias_field(u)
    twice = dealias_field(once)
    np.testing.assert_allclose(once.values, twice.values, atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=-60, max_value=60))
def test_modes_diagonalize_transform(k):
    g = make_grid(8.0, 128)
    xi = math.pi * k / 8.0
    u = make_field(g, np.cos(xi * g.nodes))
    c = to_spectrum(u).coefficients
    # energy concentrates entirely on modes +-k
    mask = np.zeros(128, dtype=bool)
    mask[k % 128] = True
    mask[(-k) % 128] = True
    assert np.max(np.abs(c[~mask])) < 1e-12
