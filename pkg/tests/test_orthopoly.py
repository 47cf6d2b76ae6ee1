import math

import numpy as np
import pytest

from xxcorr.errors import OnContourError, SingularSystemError
from xxcorr.hightemp import closed_form_u
from xxcorr.model import PhysicalParams
from xxcorr.moments import MomentTable, moments_bessel, oracle_circle, weight_M
from xxcorr.orthopoly import (build_system, cauchy_transforms_at_zero,
                              compute_W, compute_u, cramer_coefficients,
                              eval_Y, orthogonality_residuals, solve_polys)


def quad_moment_integral(sys, power: int, poly: np.ndarray, nodes: int = 1024) -> complex:
    """Oracle: integral dw/(2 pi i) M_m(w) w^power poly(w) on the circle."""
    w, dw = oracle_circle(nodes)
    Mw = weight_M(w, sys.m, sys.tau, sys.c)
    pw = np.polyval(poly[::-1], w)
    return complex(np.sum(Mw * w ** power * pw * dw) / (2j * math.pi))


def test_m0_system():
    for tau in (0.0, 1.2 - 0.4j, -2.0 + 0.1j):
        sys = build_system(0, tau, 0.4)
        assert len(sys.c_coeffs) == 0          # P = 1
        assert len(sys.d_coeffs) == 1          # Q = z + d0
        assert sys.W_m == pytest.approx(-1.0)  # Q(-i) P'(-i) - P(-i) Q'(-i)
        assert sys.u_m == 0.0


def test_orthogonality_residuals():
    sys = build_system(2, 1.0 + 0.2j, 0.5)
    res = orthogonality_residuals(sys)
    assert res.max() <= 1e-10


def test_norming_and_structure_identities():
    for (m, tau, c) in [(1, 0.7 + 0.1j, 0.25), (2, -1.5 + 0.4j, 0.5),
                        (3, 2.2 - 0.3j, 0.75)]:
        sys = build_system(m, tau, c)
        # gamma times the norming integral is 1
        norm = quad_moment_integral(sys, m, sys.p_full)
        assert sys.gamma_m * norm == pytest.approx(1.0, rel=1e-10)
        # subleading coefficient of Q balances gamma kappa
        scale = max(1.0, abs(sys.d_coeffs[m]))
        assert abs(sys.d_coeffs[m] + sys.gamma_m * sys.kappa_m) <= 1e-10 * scale
        # kappa is the next moment integral
        assert sys.kappa_m == pytest.approx(
            quad_moment_integral(sys, m + 1, sys.p_full), rel=1e-10)


def test_cramer_matches_elimination():
    for (m, tau, c) in [(1, 0.9 + 0.3j, 0.5), (2, -0.8 + 0.6j, 0.25)]:
        table = moments_bessel(m, tau, c)
        sys = solve_polys(table)
        cc, dd = cramer_coefficients(table)
        assert np.allclose(cc, sys.c_coeffs, rtol=1e-11, atol=1e-13)
        assert np.allclose(dd, sys.d_coeffs, rtol=1e-11, atol=1e-13)


def test_cauchy_transforms_vs_quadrature():
    for (m, tau, c) in [(0, 0.5 + 0.2j, 0.4), (2, 1.1 - 0.5j, 0.6)]:
        sys = build_system(m, tau, c)
        # F(0) is the weighted Cauchy transform of P at the origin
        F_direct = quad_moment_integral(sys, -1, sys.p_full)
        G_direct = quad_moment_integral(sys, -1, sys.q_full)
        assert sys.F_at_0 == pytest.approx(F_direct, rel=1e-10)
        assert sys.G_at_0 == pytest.approx(G_direct, rel=1e-10)


def test_shifted_table_validation():
    sys = build_system(1, 0.4, 0.5)
    with pytest.raises(IndexError):
        cauchy_transforms_at_zero(sys, moments_bessel(1, 0.4, 0.5))
    with pytest.raises(IndexError):
        cauchy_transforms_at_zero(sys, moments_bessel(2, 0.5, 0.5))


def test_u_closed_form_m1():
    params = PhysicalParams(J=1.0, h=1.4, T=5.0)
    for tau in (0.6 + 0.2j, -1.3 + 0.45j, 2.5):
        sys = build_system(1, tau, params.c)
        assert sys.u_m == pytest.approx(closed_form_u(1, tau, params), rel=1e-8)


def test_u_closed_form_m3_small_field_limit():
    h = 1e-4 * 4.0
    params = PhysicalParams(J=1.0, h=h, T=5.0)
    params0 = PhysicalParams(J=1.0, h=0.0, T=5.0)
    for tau in (1.1, -0.8 + 0.2j):
        sys = build_system(3, tau, params.c)
        target = closed_form_u(3, tau, params0)
        assert abs(sys.u_m - target) <= 1e-3 * max(1.0, abs(target))


def test_W_closed_form_m1():
    from xxcorr.hightemp import closed_form_W
    params = PhysicalParams(J=1.0, h=2.0, T=5.0)
    for tau in (0.5, 1.0 - 0.7j):
        sys = build_system(1, tau, params.c)
        assert compute_W(sys) == pytest.approx(closed_form_W(1, tau, params), rel=1e-10)
        assert compute_W(sys) == sys.W_m


def test_large_tau_coefficient_limits():
    # polynomials approach (z - i)^m as real tau grows
    c = 0.5
    for m in range(4):
        sys = build_system(m, 60.0, c)
        for k in range(m):
            assert abs(sys.c_coeffs[k]
                       - math.comb(m, k) * (-1j) ** (m - k)) < 0.05
        for k in range(m + 1):
            assert abs(sys.d_coeffs[k]
                       - math.comb(m + 1, k) * (-1j) ** (m + 1 - k)) < 0.05


def test_large_tau_W_limit():
    c = 0.5
    for m in range(4):
        ref = (-1.0) ** (m + 1) * 4.0 ** m
        W40 = build_system(m, 40.0, c).W_m
        W80 = build_system(m, 80.0, c).W_m
        assert abs(W40 - ref) <= 0.10 * abs(ref)
        assert abs(W80 - ref) <= 0.05 * abs(ref)


def test_eval_Y_unimodular_and_structured():
    rng = np.random.default_rng(5)
    for m in range(4):
        tau = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
        sys = build_system(m, tau, 0.4)
        for z in (-2j, 3.0, -1j, 0.5 + 0.5j, -4.0):
            Y = eval_Y(sys, z)
            assert abs(np.linalg.det(Y) - 1.0) <= 1e-9
            # the (2,1) entry is gamma P by construction
            p = np.polyval(sys.p_full[::-1], z)
            assert Y[0, 1] == pytest.approx(sys.gamma_m * p, rel=1e-12)
        z = 50.0 * np.exp(1j * rng.uniform(0, 2 * math.pi))
        Y = eval_Y(sys, z)
        # monic growth of the lower-right entry, subleading coefficient O(m)
        bound = (2.0 if m <= 2 else 6.0) / abs(z)
        assert abs(Y[1, 1] / z ** (m + 1) - 1.0) <= bound


def test_eval_Y_on_contour_error():
    sys = build_system(1, 0.5, 0.5)
    with pytest.raises(OnContourError):
        eval_Y(sys, 2.0 + 0.0j, radius=2.0)
    # automatic radius choice handles points near the default circle
    Y = eval_Y(sys, -2j)
    assert abs(np.linalg.det(Y) - 1.0) <= 1e-9


def test_singular_system_detected():
    # a rank-deficient table must be rejected with a condition diagnostic
    entries = np.ones((3, 4), dtype=complex)
    table = MomentTable(m=2, tau=0.3, c=0.5, entries=entries)
    with pytest.raises(SingularSystemError):
        solve_polys(table)
