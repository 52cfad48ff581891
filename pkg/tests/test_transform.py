"""Transform engine: kernel, both numerical routes, closed forms, inversion."""
import cmath
import math

import numpy as np
import pytest

from lcdunkl.corpus import make_gaussian, make_indicator, make_poly_gaussian, make_smooth_bump
from lcdunkl.errors import DegenerateMatrix, FitFailure, ParameterOutOfRange
from lcdunkl.measure import QuadratureSpec, lp_norm
from lcdunkl.transform import (CanonicalMatrix, SpectrumSignal, default_grid,
                               dunkl_transform, fit_polynomial_degree, fractional_matrix,
                               gaussian_constant_analytic, gaussian_lcdt_closed_form,
                               lcdt_forward, lcdt_inverse, lcdt_kernel, lcdt_via_dunkl,
                               poly_gaussian_dunkl_closed_form, prefactor, round_trip)

# mpmath: Dunkl transform of chi_(-r,r) at mu, (k, r, mu, value)
INDICATOR_DUNKL = [
    (0.5, 1.0, 2.7, 0.11627454446722042754),
    (1.5, 2.0, 0.9, 1.3419927817286991162),
    (0.0, 0.5, 11.0, -0.015519918883138334099),
]
# mpmath: Dunkl transform of x exp(-delta x^2) at mu, (k, delta, mu, imag part)
POLY1_DUNKL = [(0.5, 1.0, 1.3, -0.15061871723163977761), (0.0, 0.5, 2.2, -0.19562755841064993466)]

FOURIER = fractional_matrix(math.pi / 2)   # (0, -1; 1, 0)


def test_matrix_validation_and_algebra():
    with pytest.raises(DegenerateMatrix):
        CanonicalMatrix(1.0, 1.0, 1.0, 1.0)
    with pytest.raises(DegenerateMatrix):
        CanonicalMatrix(float("nan"), 0, 0, 1)
    M = CanonicalMatrix(2.0, 0.5, 1.0, 0.75)
    ident = M @ M.inverse()
    assert ident.as_tuple() == pytest.approx((1.0, 0.0, 0.0, 1.0), abs=1e-15)
    R = fractional_matrix(0.4) @ fractional_matrix(0.3)
    assert R.as_tuple() == pytest.approx(fractional_matrix(0.7).as_tuple(), abs=1e-15)


def test_prefactor_branch():
    k = 0.5
    assert prefactor(CanonicalMatrix(0, 1, -1, 0), k) == pytest.approx(cmath.exp(-0.75j * math.pi))
    assert prefactor(CanonicalMatrix(0, -2, 0.5, 0), k) == pytest.approx(
        2 ** -1.5 * cmath.exp(0.75j * math.pi))
    with pytest.raises(DegenerateMatrix):
        prefactor(CanonicalMatrix(1, 0, 0, 1), k)


def test_kernel_reduces_to_chirped_fourier():
    M = fractional_matrix(1.0)
    lam, x = 0.8, -1.3
    expected = cmath.exp(0.5j * (M.d / M.b * lam ** 2 + M.a / M.b * x ** 2)) * cmath.exp(
        -1j * lam * x / M.b)
    assert abs(lcdt_kernel(M, -0.5, lam, x) - expected) < 1e-14


@pytest.mark.parametrize("k,r,mu,value", INDICATOR_DUNKL)
def test_indicator_against_mpmath(k, r, mu, value):
    f = make_indicator(r)
    assert dunkl_transform(f, k, [mu])[0] == pytest.approx(value, rel=1e-10, abs=1e-14)
    # Fourier-type matrix: D^M f(lam) = (-i)^(-(k+1)) D_k f(-lam), and the spectrum is even
    got = lcdt_forward(f, FOURIER, k, [mu]).values[0]
    assert abs(got - prefactor(FOURIER, k) * value) < 1e-10 * abs(value) + 1e-14


@pytest.mark.parametrize("k,delta,mu,imag", POLY1_DUNKL)
def test_odd_poly_gaussian_against_mpmath(k, delta, mu, imag):
    got = dunkl_transform(make_poly_gaussian(1, delta), k, [mu])[0]
    assert abs(got - 1j * imag) < 1e-12


def test_gaussian_dunkl_closed_form():
    mu = np.linspace(-8, 8, 33)
    for k in (-0.5, 0.0, 1.5):
        for s in (0.5, 2.0):
            exact = (2 * s) ** (-(k + 1)) * np.exp(-mu ** 2 / (4 * s))
            np.testing.assert_allclose(dunkl_transform(make_gaussian(s), k, mu), exact,
                                       rtol=0, atol=1e-12)


def test_gaussian_lcdt_closed_form_and_constant():
    for M in (fractional_matrix(math.pi / 6), CanonicalMatrix(0.5, -1, 0.5, 1)):
        for k in (-0.5, 1.5):
            ev, c0 = gaussian_lcdt_closed_form(1.0, M, k)
            assert abs(c0 - gaussian_constant_analytic(1.0, M, k)) < 1e-12
            f = make_gaussian(1.0, M.a / (2 * M.b))
            lam = np.linspace(-3, 3, 25)
            np.testing.assert_allclose(lcdt_forward(f, M, k, lam).values, ev(lam), atol=1e-12)


@pytest.mark.parametrize("f", [make_gaussian(1.0, 0.5), make_indicator(1.0), make_smooth_bump(2.0),
                               make_poly_gaussian(3, 1.0)], ids=lambda f: f.label)
def test_two_routes_agree(f):
    for M in (CanonicalMatrix(2.0, 0.5, 1.0, 0.75), CanonicalMatrix(0.5, -1.0, 0.5, 1.0)):
        for k in (-0.5, 0.5):
            lam = np.linspace(-6, 6, 31)
            a = lcdt_forward(f, M, k, lam).values
            b = lcdt_via_dunkl(f, M, k, lam).values
            assert np.max(np.abs(a - b)) <= 1e-9 * np.max(np.abs(a))


def test_b_zero_branch_is_chirped_dilation():
    M = CanonicalMatrix(2.0, 0.0, 0.3, 0.5)
    k = 0.5
    lam = np.linspace(-3, 3, 13)
    f = make_gaussian(1.0)
    expected = np.exp(1j * 0.3 * lam ** 2 / 4.0) * 2.0 ** (-1.5) * np.exp(-(lam / 2) ** 2)
    np.testing.assert_allclose(lcdt_forward(f, M, k, lam).values, expected, atol=1e-15)
    with pytest.raises(DegenerateMatrix):
        lcdt_via_dunkl(f, M, k, lam)


def test_grid_validation():
    with pytest.raises(ParameterOutOfRange):
        lcdt_forward(make_gaussian(1.0), FOURIER, 0.0, [1.0, 0.0])
    with pytest.raises(ParameterOutOfRange):
        lcdt_forward(make_gaussian(1.0), FOURIER, 0.0, [])


def test_default_grid_has_513_points():
    g = default_grid(make_gaussian(1.0), FOURIER, 0.0)
    assert g.size == 513 and g[0] == -g[-1]


def test_spectrum_signal_matches_direct_route():
    f = make_smooth_bump(1.0)
    M = CanonicalMatrix(2.0, 0.5, 1.0, 0.75)
    S = SpectrumSignal(f, M, 0.5)
    lam = np.linspace(-S.decay_radius, S.decay_radius, 41)
    direct = lcdt_forward(f, M, 0.5, lam).values
    assert np.max(np.abs(S(lam) - direct)) <= 1e-10 * np.max(np.abs(direct))


def test_plancherel_single_case():
    f = make_poly_gaussian(2, 0.5)
    M = CanonicalMatrix(1.0, 1.0, 0.0, 1.0)
    S = SpectrumSignal(f, M, 1.5)
    assert lp_norm(S, 2.0, 1.5) == pytest.approx(lp_norm(f, 2.0, 1.5), rel=1e-8)


def test_inverse_round_trip_smooth():
    f = make_gaussian(1.0, 0.5)
    M = fractional_matrix(math.pi / 6)
    rt = round_trip(f, M, 0.5)
    assert rt.rel_l2_error < 1e-8
    x = np.array([-1.0, 0.3])
    back = lcdt_inverse(SpectrumSignal(f, M, 0.5), M, 0.5, x).values
    np.testing.assert_allclose(back, f(x), atol=1e-8)


def test_composition_of_fractional_angles():
    f = make_gaussian(1.0)
    k = 0.5
    A, B = fractional_matrix(0.5), fractional_matrix(0.7)
    lam = np.linspace(-2, 2, 9)
    two_step = lcdt_forward(SpectrumSignal(f, B, k), A, k, lam).values
    one_step = lcdt_forward(f, A @ B, k, lam).values
    np.testing.assert_allclose(two_step, one_step, atol=1e-8)


def test_polynomial_degree_fit():
    x = np.linspace(-2, 2, 50)
    assert fit_polynomial_degree(x, 1 + x ** 3 + 0j)[0] == 3
    with pytest.raises(FitFailure):
        fit_polynomial_degree(x, np.exp(3 * x) + 0j, max_degree=3)
    for m in (0, 1, 2, 3):
        _, deg, res = poly_gaussian_dunkl_closed_form(m, 1.0, 0.5)
        assert deg == m and res < 1e-8
