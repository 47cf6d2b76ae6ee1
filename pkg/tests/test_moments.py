import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xxcorr.errors import ConvergenceError, DomainError
from xxcorr.moments import MomentTable, moments_bessel, moments_quadrature


def tau0_moment(m: int, s: int, c: float) -> complex:
    """Independent fixture: the triangular tau = 0 table."""
    if s < m - 1:
        return 0.0 + 0.0j
    base = -(1j ** ((m - s) % 4)) / c
    if s == m - 1:
        return base
    return base * (2.0 - 2j * c * (s - m + 1))


def test_tau0_examples():
    c = 0.3
    assert moments_bessel(1, 0.0, c).entries[0, 0] == pytest.approx(-1j / c)
    assert moments_bessel(0, 0.0, c).entries[0, 0] == pytest.approx(-2 / c + 2j)
    assert moments_bessel(2, 0.0, c).entries[0, 0] == 0.0


@pytest.mark.parametrize("c", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("m", range(6))
def test_tau0_full_table(m, c):
    table = moments_bessel(m, 0.0, c)
    for l in range(m + 1):
        for k in range(m + 2):
            assert table.entries[l, k] == pytest.approx(
                tau0_moment(m, l + k, c), abs=1e-12)


@pytest.mark.parametrize("c", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("m", range(1, 6))
def test_tau0_leading_determinant(m, c):
    table = moments_bessel(m, 0.0, c)
    det = np.linalg.det(table.entries[:m, :m])
    ref = (1j * c) ** (-m) * (-1) ** (m * (m - 1) // 2)
    assert det == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("c", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_tau0_full_determinant_nonzero(c):
    for m in range(6):
        table = moments_bessel(m, 0.0, c)
        assert abs(np.linalg.det(table.entries[: m + 1, : m + 1])) > 1e-8


def test_quadrature_is_independent_oracle():
    tb = moments_bessel(1, 0.5, 0.5)
    tq = moments_quadrature(1, 0.5, 0.5)
    assert np.max(np.abs(tb.entries - tq.entries)
                  / np.maximum(1, np.abs(tq.entries))) < 1e-10


@pytest.mark.parametrize("tau", [10.0, -10.0, 3.0 + 4.0j, -0.7 + 0.2j])
@pytest.mark.parametrize("c", [0.25, 0.5, 0.75])
def test_bessel_vs_quadrature_sweep(tau, c):
    for m in (0, 2, 5):
        tb = moments_bessel(m, tau, c)
        tq = moments_quadrature(m, tau, c, nodes=512)
        scale = np.maximum(1.0, np.abs(tq.entries))
        assert np.max(np.abs(tb.entries - tq.entries) / scale) < 1e-10


def test_quadrature_tau0_fixture():
    table = moments_quadrature(2, 0.0, 0.4)
    for l in range(3):
        for k in range(4):
            assert table.entries[l, k] == pytest.approx(
                tau0_moment(2, l + k, 0.4), abs=1e-12)


def test_hankel_shift_property():
    # the (l, k) = (0, 1) entry of the m = 0 table carries the same weight
    # index as the s = 2 entries of the m = 1 table
    tau, c = 0.8 - 0.3j, 0.35
    t0 = moments_bessel(0, tau, c)
    t1 = moments_bessel(1, tau, c)
    assert t0.by_sum[1] == pytest.approx(t1.by_sum[2], rel=1e-13)


@settings(max_examples=20, deadline=None)
@given(re=st.floats(-6, 6), im=st.floats(-2, 2),
       c=st.floats(0.05, 0.95), m=st.integers(0, 4))
def test_hankel_structure(re, im, c, m):
    table = moments_quadrature(m, complex(re, im), c, nodes=256)
    for s in range(2 * m + 2):
        vals = [table.entries[l, s - l]
                for l in range(max(0, s - m - 1), min(m, s) + 1)]
        assert max(abs(v - vals[0]) for v in vals) <= 1e-13 * max(1, abs(vals[0]))


def test_entire_smoothness():
    tau, c = 1.3 + 0.4j, 0.5
    a = moments_bessel(3, tau, c).entries
    b = moments_bessel(3, tau + 1e-6, c).entries
    assert np.max(np.abs(a - b)) < 1e-4


def test_domain_errors():
    with pytest.raises(DomainError):
        moments_bessel(9, 0.0, 0.5)
    with pytest.raises(DomainError):
        moments_bessel(1, 101.0, 0.5)
    with pytest.raises(DomainError):
        moments_bessel(1, 0.0, 1.0)
    with pytest.raises(DomainError):
        moments_quadrature(1, 0.0, 0.5, nodes=32)


def test_quadrature_convergence_error_for_coarse_nodes():
    # |tau| = 40 needs far more than 64 trapezoid nodes on the circle
    with pytest.raises(ConvergenceError):
        moments_quadrature(2, 40.0, 0.5, nodes=64)
