import cmath

import numpy as np
import pytest

from xxcorr.errors import DomainError
from xxcorr.hightemp import (CorrelatorValue, longitudinal_exact,
                             longitudinal_highT, transverse_closed_form,
                             transverse_highT)
from xxcorr.lattice import ed_longitudinal
from xxcorr.model import PhysicalParams
from xxcorr.special import bessel_I, bessel_J


def brandt_jacoby_shifted(t, params):
    ts = t - 1j / (2 * params.T)
    return 0.5 * cmath.exp(-1j * params.h * ts - 4 * params.J ** 2 * ts * ts)


def test_m0_equals_shifted_gaussian():
    for T in (5.0, 20.0):
        for h in (0.5, 2.0):
            params = PhysicalParams(J=1.0, h=h, T=T)
            for t in (-1.0, -0.3, 0.2, 1.0):
                got = transverse_highT(0, t, params).value
                assert got == pytest.approx(brandt_jacoby_shifted(t, params), rel=1e-10)


def test_tau_zero_normalisation_exact():
    params = PhysicalParams(J=1.0, h=1.0, T=20.0)
    for m in range(4):
        got = transverse_highT(m, 1j / (2 * params.T), params).value
        assert got == 0.5 * (-params.J / params.T) ** m


def test_pipeline_vs_closed_forms():
    for h in (0.5, 2.0):
        params = PhysicalParams(J=1.0, h=h, T=20.0)
        for m in (1, 2):
            for t in (-0.5, -0.1, 0.1, 0.5):
                a = transverse_highT(m, t, params).value
                b = transverse_closed_form(m, t, params).value
                assert abs(a - b) <= 1e-8 * abs(b)


def test_closed_form_printed_expressions():
    J, T = 1.0, 15.0
    params0 = PhysicalParams(J=J, h=0.0, T=T)
    for t in (0.2, -0.4):
        tau = -4 * J * (t - 1j / (2 * T))
        pref = cmath.exp(-tau * tau / 4)
        got1 = transverse_closed_form(1, t, params0).value
        assert got1 == pytest.approx(-(J / T) * pref * bessel_I(1, tau) / tau, rel=1e-13)
        got2 = transverse_closed_form(2, t, params0).value
        assert got2 == pytest.approx(
            2 * (J / T) ** 2 * pref * (bessel_I(1, tau) / tau) ** 2, rel=1e-13)
        got0 = transverse_closed_form(0, t, PhysicalParams(J=J, h=1.0, T=T)).value
        assert got0 == pytest.approx(
            brandt_jacoby_shifted(t, PhysicalParams(J=J, h=1.0, T=T)), rel=1e-13)


def test_m1_example_against_closed_form():
    params = PhysicalParams(J=1.0, h=0.5, T=20.0)
    a = transverse_highT(1, 0.3, params).value
    b = transverse_closed_form(1, 0.3, params).value
    assert abs(a - b) <= 1e-8 * abs(b)


def test_conjugation_symmetry():
    params = PhysicalParams(J=1.0, h=1.3, T=10.0)
    for m in (0, 1, 2):
        for t in (0.4, 0.15 + 0.02j):
            a = transverse_highT(m, -t.conjugate() if isinstance(t, complex) else -t,
                                 params).value
            b = transverse_highT(m, t, params).value
            assert a == pytest.approx(b.conjugate(), rel=1e-10)


def test_quadrature_convergence():
    params = PhysicalParams(J=1.0, h=1.0, T=10.0)
    # |tau| ~ 8 at t = 2/J
    a = transverse_highT(2, 2.0, params, quad_nodes=48).value
    b = transverse_highT(2, 2.0, params, quad_nodes=96).value
    assert abs(a - b) <= 1e-8 * abs(b)


def test_domain_errors():
    params = PhysicalParams(J=1.0, h=1.0, T=10.0)
    with pytest.raises(DomainError):
        transverse_highT(9, 0.1, params)
    with pytest.raises(DomainError):
        transverse_highT(1, 0.1, PhysicalParams(J=1.0, h=0.0, T=10.0))
    with pytest.raises(DomainError):
        transverse_closed_form(3, 0.1, params)   # m = 3 needs h = 0
    with pytest.raises(DomainError):
        transverse_closed_form(4, 0.1, PhysicalParams(J=1.0, h=0.0, T=10.0))
    with pytest.raises(DomainError):
        CorrelatorValue(value=1.0, method="nonsense", error_estimate=0.0)


def test_operator_norm_bound():
    params = PhysicalParams(J=1.0, h=0.5, T=5.0)
    for m in (0, 1):
        for t in (0.0, 0.05, 0.3):
            res = transverse_highT(m, t, params)
            assert abs(res.value) <= 0.5 + res.error_estimate


# ---------------------------------------------------------------------------
# longitudinal channel

def test_longitudinal_infinite_T_equal_point():
    params = PhysicalParams(J=1.0, h=0.0, T=1e6)
    got = longitudinal_exact(0, 1j / (2 * params.T), params).value
    assert got == pytest.approx(1.0, abs=1e-6)


def test_longitudinal_high_T_scaling():
    # deviation from the squared-Bessel limit is O(T^-2): doubling T shrinks
    # it by a factor close to 4
    devs = []
    for T in (10.0, 20.0):
        params = PhysicalParams(J=1.0, h=0.8, T=T)
        a = longitudinal_exact(1, 0.4, params).value
        b = longitudinal_highT(1, 0.4, params).value
        devs.append(abs(a - b))
    assert 3.0 <= devs[0] / devs[1] <= 5.0


def test_longitudinal_vs_lattice():
    params = PhysicalParams(J=1.0, h=0.0, T=1.0)
    exact = longitudinal_exact(1, 0.0, params).value
    ed = ed_longitudinal(1, 0.0, params, 12).value
    assert abs(exact - ed) <= 1e-3


def test_longitudinal_highT_values():
    params = PhysicalParams(J=1.0, h=1.0, T=10.0)
    t0 = 1j / (2 * params.T)
    assert longitudinal_highT(0, t0, params).value == pytest.approx(1.0)
    assert abs(longitudinal_highT(2, t0, params).value) < 1e-25
    got = longitudinal_highT(1, 0.5, params).value
    assert got == pytest.approx(bessel_J(1, 4 * (0.5 - 0.05j)) ** 2, rel=1e-12)
