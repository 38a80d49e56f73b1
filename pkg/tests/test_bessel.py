"""Tests for the Bessel series and the closed sphere-average evaluation.

Reference values were computed independently with scipy.special and are
frozen here so the package under test never certifies itself.
"""

import math

import numpy as np
import pytest

from sphfn.bessel import (
    ARGUMENT_LIMIT,
    ClosedFormQuery,
    bessel_j,
    closed_form_spherical,
    closed_form_values,
    normalization_constant,
    poisson_integral_form,
)
from sphfn.errors import OverflowRisk

# scipy.special.jv, frozen
J_REAL = [
    (0.0, 0.5, 0.938469807240813),
    (0.0, 2.0, 0.22389077914123562),
    (0.0, 5.0, -0.17759677131433835),
    (0.0, 12.0, 0.04768931079683349),
    (1.0, 3.0, 0.33905895852593626),
    (0.5, 1.0, 0.6713967071418039),
    (0.5, 2.5, 0.30200490606236574),
    (1.5, 2.5, 0.5250802646640036),
    (2.5, 7.0, -0.2834366512017008),
]

J_COMPLEX = [
    (0.0, 1.0 + 1.0j, 0.9376084768060292 - 0.4965299476091221j),
    (1.0, 0.5 - 0.2j, 0.2458997187413714 - 0.09123618189053219j),
    (0.5, 1.0 + 0.3j, 0.6982542779735259 + 0.027374748885690636j),
]

# c(n) (lam r)^{-(n-2)/2} J_{(n-2)/2}(lam r), frozen from scipy
CLOSED_FORM = [
    (2, 0.5, 0.938469807240813),
    (3, 0.5, 0.9588510772084071),
    (4, 0.5, 0.9690738306994956),
    (2, 3.0, -0.2600519549019334),
    (3, 3.0, 0.047040002686622506),
    (4, 3.0, 0.2260393056839575),
]


@pytest.mark.parametrize("nu,z,expect", J_REAL)
def test_series_real_points(nu, z, expect):
    assert bessel_j(nu, z) == pytest.approx(expect, abs=1e-13)


@pytest.mark.parametrize("nu,z,expect", J_COMPLEX)
def test_series_complex_points(nu, z, expect):
    assert bessel_j(nu, z) == pytest.approx(expect, abs=1e-12)


def test_half_order_reduces_to_sine():
    for z in (1.0, 2.5, 1.0 + 0.3j):
        expect = np.sqrt(2.0 / (np.pi * z)) * np.sin(z)
        assert bessel_j(0.5, z) == pytest.approx(complex(expect), abs=1e-12)


def test_negative_half_order_reduces_to_cosine():
    z = 2.0
    expect = math.sqrt(2.0 / (math.pi * z)) * math.cos(z)
    assert bessel_j(-0.5, z) == pytest.approx(expect, abs=1e-12)


def test_zero_argument():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(1.0, 0.0) == 0.0
    assert bessel_j(2.5, 0.0) == 0.0


def test_order_below_minus_one_rejected():
    with pytest.raises(ValueError):
        bessel_j(-1.0, 1.0)
    with pytest.raises(ValueError):
        bessel_j(-2.0, 1.0)


def test_large_argument_guard():
    with pytest.raises(OverflowRisk):
        bessel_j(0.0, ARGUMENT_LIMIT + 100.0)
    with pytest.raises(OverflowRisk):
        closed_form_spherical(3, 450.0, 2.0)
    with pytest.raises(OverflowRisk):
        closed_form_values(3, 450.0, [0.1, 2.0])
    with pytest.raises(OverflowRisk):
        closed_form_spherical(2, 1.0 + 800.0j, 1.0)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("t", [0.5, 1.2, 2.0, 3.3, 5.0, 8.0])
def test_bessel_differential_equation(nu, t):
    """t^2 J'' + t J' + (t^2 - nu^2) J = 0 under central differences."""
    h = 3e-4
    jm, j0, jp = (bessel_j(nu, t + s) for s in (-h, 0.0, h))
    d1 = (jp - jm) / (2.0 * h)
    d2 = (jp - 2.0 * j0 + jm) / (h * h)
    residual = t * t * d2 + t * d1 + (t * t - nu * nu) * j0
    assert abs(residual) <= 1e-6 * max(1.0, abs(j0))


def test_normalization_constants():
    assert normalization_constant(2) == 1.0
    assert normalization_constant(4) == 2.0
    assert normalization_constant(6) == 8.0
    assert normalization_constant(8) == 48.0
    assert normalization_constant(3) == pytest.approx(1.2533141373155003, rel=1e-15)
    assert normalization_constant(5) == pytest.approx(3.759942411946501, rel=1e-15)
    assert normalization_constant(7) == pytest.approx(18.799712059732506, rel=1e-15)
    with pytest.raises(ValueError):
        normalization_constant(0)


@pytest.mark.parametrize("n,z,expect", CLOSED_FORM)
def test_closed_form_frozen_values(n, z, expect):
    # split z = lam * r two ways; the value only depends on the product
    assert closed_form_spherical(n, z, 1.0) == pytest.approx(expect, abs=1e-13)
    assert closed_form_spherical(n, 1.0, z) == pytest.approx(expect, abs=1e-13)


def test_closed_form_matches_one_dim_cosine():
    assert closed_form_spherical(1, 2.0, math.pi) == pytest.approx(1.0, abs=1e-12)
    # imaginary scale: cos(3i) = cosh(3)
    assert closed_form_spherical(1, 1.5j, 2.0) == pytest.approx(
        10.067661995777765, abs=1e-12
    )


def test_closed_form_three_dim_is_sinc():
    assert closed_form_spherical(3, 1.5, 2.0) == pytest.approx(
        0.0470400026866224, abs=1e-12
    )


def test_closed_form_exactly_one_at_origin():
    for n in range(2, 9):
        assert closed_form_spherical(n, 2.0, 0.0) == 1.0
        assert closed_form_spherical(n, 0.0, 1.7) == 1.0
    vals = closed_form_values(5, 2.0, [0.0])
    assert abs(vals[0] - 1.0) <= 1e-14


def test_closed_form_even_in_scale():
    for n in (2, 3, 5):
        for lam in (2.0, 0.7 + 0.4j):
            a = closed_form_spherical(n, lam, 1.3)
            b = closed_form_spherical(n, -lam, 1.3)
            assert a == b
    rs = np.array([0.3, 1.0, 2.4])
    np.testing.assert_array_equal(
        closed_form_values(4, 1.8, rs), closed_form_values(4, -1.8, rs)
    )


def test_series_and_quadrature_agree():
    """The two independent evaluation routes coincide within 1e-11."""
    worst = 0.0
    for n in range(2, 10):
        for lam in (0.5, 2.0, 5.0):
            for r in (0.1, 1.0, 3.0):
                series = closed_form_values(n, lam, [r])[0]
                quad = poisson_integral_form(n, lam, r)
                worst = max(worst, abs(series - quad) / max(1.0, abs(quad)))
    assert worst <= 1e-11


def test_series_and_quadrature_agree_complex_scale():
    for n in (2, 3, 5):
        for r in (0.5, 1.0, 2.0):
            series = closed_form_values(n, 1.0 + 0.5j, [r])[0]
            quad = poisson_integral_form(n, 1.0 + 0.5j, r)
            assert abs(series - quad) <= 1e-11 * max(1.0, abs(quad))


def test_scalar_route_matches_grid_route():
    rs = np.linspace(0.05, 4.0, 17)
    for n in (2, 3, 6):
        grid = closed_form_values(n, 1.7, rs)
        scalar = np.array([closed_form_spherical(n, 1.7, r) for r in rs])
        assert np.max(np.abs(grid - scalar)) <= 1e-12


def test_radial_laplacian_eigenvalue():
    """-(f'' + (n-1) f'/r) = lam^2 f for the closed evaluation."""
    h = 1e-3
    r = 1.3
    for n in (2, 3, 4):
        for lam in (1.5, 2.0):
            fm, f0, fp = (closed_form_spherical(n, lam, r + s) for s in (-h, 0.0, h))
            d1 = (fp - fm) / (2.0 * h)
            d2 = (fp - 2.0 * f0 + fm) / (h * h)
            estimate = -(d2 + (n - 1) / r * d1) / f0
            assert abs(estimate - lam * lam) <= 1e-5 * lam * lam


def test_explicit_node_count_is_honored():
    converged = poisson_integral_form(2, 5.0, 1.0)
    coarse = poisson_integral_form(2, 5.0, 1.0, nodes=4)
    fine = poisson_integral_form(2, 5.0, 1.0, nodes=64)
    assert abs(coarse - converged) > 1e-10
    assert abs(fine - converged) <= 1e-13


def test_query_validation():
    with pytest.raises(ValueError):
        ClosedFormQuery(0, 1.0, 1.0)
    with pytest.raises(ValueError):
        ClosedFormQuery(2, 1.0, -0.5)
    assert ClosedFormQuery(2, 2.0, 1.0).value() == pytest.approx(
        0.22389077914123562, abs=1e-13
    )
    with pytest.raises(ValueError):
        closed_form_values(2, 1.0, [-1.0, 2.0])
