import cmath

import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings, strategies as st

from xxcorr.errors import DomainError
from xxcorr.special import bessel_I, bessel_I_array, bessel_J

# independent Taylor oracle, 60 terms: I_0(1) = sum (1/2)^{2k} / (k!)^2
I0_AT_1 = 1.2660658777520082


def taylor_I0(z: complex, terms: int = 60) -> complex:
    total, term = 0.0 + 0.0j, 1.0 + 0.0j
    for k in range(terms):
        if k > 0:
            term *= (z * z / 4.0) / (k * k)
        total += term
    return total


def test_In_at_zero_is_kronecker():
    assert bessel_I(0, 0.0) == 1.0
    assert bessel_I(3, 0.0) == 0.0


def test_I0_at_one_vs_taylor_oracle():
    assert bessel_I(0, 1.0) == pytest.approx(I0_AT_1, rel=1e-13)
    assert taylor_I0(1.0).real == pytest.approx(I0_AT_1, rel=1e-15)


def test_Jn_trivial_values():
    assert bessel_J(0, 0.0) == 1.0
    assert bessel_J(1, 0.0) == 0.0


def test_J_consistent_with_I():
    z = 0.5 + 0.25j
    assert bessel_J(2, z) == pytest.approx((1j ** 2) * bessel_I(2, -1j * z), rel=1e-12)


def test_symmetry_negative_order_shares_code_path():
    z = 3.7 - 1.2j
    for n in (1, 4, 17):
        assert bessel_I(-n, z) == bessel_I(n, z)


@settings(max_examples=40, deadline=None)
@given(
    r=st.floats(0.1, 30.0),
    phi=st.floats(0.0, 2 * np.pi),
    n=st.integers(-40, 40),
)
def test_recurrence_property(r, phi, n):
    z = r * cmath.exp(1j * phi)
    lhs = bessel_I(n - 1, z) - bessel_I(n + 1, z) - (2 * n / z) * bessel_I(n, z)
    assert abs(lhs) <= 1e-10 * max(1.0, abs(bessel_I(n, z)))


def test_generating_function_of_first_kind():
    # e^{tau f(w)} with f(w) = -(i/2)(w - 1/w) equals sum_n J_n(-i tau) w^n
    for tau in (0.5, 2.0, 5.0):
        for theta in np.linspace(0, 2 * np.pi, 7)[:-1]:
            w = cmath.exp(1j * theta)
            series = sum(bessel_J(n, -1j * tau) * w ** n for n in range(-60, 61))
            target = cmath.exp(tau * (-0.5j) * (w - 1 / w))
            assert abs(series - target) <= 1e-10


def test_matches_scipy_on_complex_grid():
    rng = np.random.default_rng(11)
    for _ in range(25):
        z = complex(rng.uniform(-40, 40), rng.uniform(-10, 10))
        n = int(rng.integers(0, 12))
        ref = scipy.special.iv(n, z)
        assert bessel_I(n, z) == pytest.approx(ref, rel=2e-12, abs=1e-280)


def test_array_variant_consistent():
    z = -7.3 + 2.1j
    vals = bessel_I_array(6, z)
    for n in range(7):
        assert vals[n] == bessel_I(n, z)


def test_domain_errors():
    with pytest.raises(DomainError):
        bessel_I(257, 1.0)
    with pytest.raises(DomainError):
        bessel_I(0, 201.0)
    with pytest.raises(DomainError):
        bessel_J(300, 1.0)


def test_large_real_negative_argument_accurate():
    # reflection path: I_n(-60) = (-1)^n I_n(60)
    ref = scipy.special.iv(2, 60.0)
    assert bessel_I(2, -60.0) == pytest.approx(ref, rel=1e-12)
    ref3 = scipy.special.iv(3, 80.0)
    assert bessel_I(3, -80.0) == pytest.approx(-ref3, rel=1e-12)
