"""Monic orthogonal polynomials against the moment weight, and derived data.

For a moment table A at separation index m, the monic polynomials P (degree m)
and Q (degree m+1) satisfy

    sum_k A[l, k] p_k = -A[l, m],    l = 0..m-1      (coefficients of P)
    sum_k A[n, k] q_k = -A[n, m+1],  n = 0..m        (coefficients of Q)

Solved by pivoted elimination; Cramer determinant ratios are kept as a test
oracle only.  From the solution:

    1/gamma  = sum_k A[m, k]   p_k          (norming constant)
    kappa    = sum_k A[m, k+1] p_k          (subleading norm)
    W        = Q(-i) P'(-i) - P(-i) Q'(-i)  (prefactor combination)

and, with the shifted table A' at index m+1,

    F(0) = sum_k A'[0, k] p_k,   G(0) = sum_k A'[0, k] q_k

(the Cauchy transforms of the weighted polynomials at the origin), feeding the
per-unit-reduced-time correction

    u = (i/2) [ p_{m-1} - gamma (F(0) (P(0) - Q'(0)) + G(0) P'(0)) ].

Here p/q coefficient vectors include the leading 1.  The 2x2 matrix solution
``eval_Y`` built from these polynomials is unimodular; that and the residual
identities are the module's correctness certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError, OnContourError, SingularSystemError
from .moments import MomentTable, ORACLE_RADIUS, oracle_circle, weight_M

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class OrthoPolySystem:
    """Everything derived from one (m, tau, c) moment solve.

    ``c_coeffs``/``d_coeffs`` are the non-leading coefficients of P and Q in
    ascending order (the leading coefficient is 1 and is not stored).
    """

    m: int
    tau: complex
    c: float
    c_coeffs: np.ndarray
    d_coeffs: np.ndarray
    gamma_m: complex
    kappa_m: complex
    W_m: complex
    condition_estimate: float
    F_at_0: complex | None = None
    G_at_0: complex | None = None
    u_m: complex | None = None

    @property
    def p_full(self) -> np.ndarray:
        """Coefficients of P including the leading 1, ascending."""
        return np.concatenate([self.c_coeffs, [1.0 + 0.0j]])

    @property
    def q_full(self) -> np.ndarray:
        return np.concatenate([self.d_coeffs, [1.0 + 0.0j]])


def _polyval(coeffs: np.ndarray, z: complex) -> complex:
    v = 0.0 + 0.0j
    for c in coeffs[::-1]:
        v = v * z + c
    return v


def _polyval_deriv(coeffs: np.ndarray, z: complex) -> complex:
    d = np.array([k * coeffs[k] for k in range(1, len(coeffs))], dtype=complex)
    return _polyval(d, z) if len(d) else 0.0 + 0.0j


def _wronskian_at_minus_i(p: np.ndarray, q: np.ndarray) -> complex:
    zi = -1j
    return (_polyval(q, zi) * _polyval_deriv(p, zi)
            - _polyval(p, zi) * _polyval_deriv(q, zi))


def solve_polys(table: MomentTable) -> OrthoPolySystem:
    """Solve the two moment systems by pivoted elimination.

    Raises SingularSystemError when the condition estimate exceeds 1e12,
    which flags proximity to one of the isolated reduced-time values at
    which the polynomials fail to exist.
    """
    m = table.m
    A = table.entries
    MQ = A[: m + 1, : m + 1]
    cond = float(np.linalg.cond(MQ, 2))
    if m > 0:
        MP = A[:m, :m]
        cond = max(cond, float(np.linalg.cond(MP, 2)))
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularSystemError(
            f"moment system nearly singular at tau = {table.tau} (cond ~ {cond:.2e})",
            tau=table.tau, condition=cond)
    if m > 0:
        cc = np.linalg.solve(A[:m, :m], -A[:m, m])
    else:
        cc = np.zeros(0, dtype=complex)
    dd = np.linalg.solve(A[: m + 1, : m + 1], -A[: m + 1, m + 1])
    p = np.concatenate([cc, [1.0 + 0.0j]])
    gamma_inv = complex(np.dot(A[m, : m + 1], p))
    if gamma_inv == 0:
        raise SingularSystemError(
            f"vanishing norming integral at tau = {table.tau}", tau=table.tau,
            condition=cond)
    kappa = complex(np.dot(A[m, 1: m + 2], p))
    q = np.concatenate([dd, [1.0 + 0.0j]])
    return OrthoPolySystem(
        m=m, tau=table.tau, c=table.c,
        c_coeffs=cc.astype(complex), d_coeffs=dd.astype(complex),
        gamma_m=1.0 / gamma_inv, kappa_m=kappa,
        W_m=_wronskian_at_minus_i(p, q),
        condition_estimate=cond)


def cramer_coefficients(table: MomentTable) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients of P and Q by Cramer determinant ratios (test oracle).

    Numerically inferior to elimination; kept to cross-check small m.
    """
    m = table.m
    A = table.entries

    def cramer(size: int, rhs_col: int) -> np.ndarray:
        M = A[:size, :size]
        den = np.linalg.det(M)
        if den == 0:
            raise SingularSystemError("Cramer denominator vanished", tau=table.tau)
        out = np.empty(size, dtype=complex)
        for n in range(size):
            Mn = M.copy()
            Mn[:, n] = A[:size, rhs_col]
            out[n] = -np.linalg.det(Mn) / den
        return out

    cc = cramer(m, m) if m > 0 else np.zeros(0, dtype=complex)
    dd = cramer(m + 1, m + 1)
    return cc, dd


def cauchy_transforms_at_zero(sys: OrthoPolySystem,
                              table_shifted: MomentTable) -> tuple[complex, complex]:
    """Cauchy transforms of the weighted P and Q at the origin.

    ``table_shifted`` must be the moment table for index m+1 at the same
    (tau, c): dividing the weight by w shifts the index by one, so the
    transforms at 0 are plain moment sums against the shifted table.
    """
    if table_shifted.m != sys.m + 1:
        raise IndexError(
            f"shifted table has m = {table_shifted.m}, expected {sys.m + 1}")
    if table_shifted.tau != sys.tau or table_shifted.c != sys.c:
        raise IndexError("shifted table was built at different (tau, c)")
    row = table_shifted.entries[0]
    F0 = complex(np.dot(row[: sys.m + 1], sys.p_full))
    G0 = complex(np.dot(row[: sys.m + 2], sys.q_full))
    return F0, G0


def compute_W(sys: OrthoPolySystem) -> complex:
    """Q(-i) P'(-i) - P(-i) Q'(-i) by Horner evaluation."""
    return _wronskian_at_minus_i(sys.p_full, sys.q_full)


def compute_u(sys: OrthoPolySystem, transforms: tuple[complex, complex]) -> complex:
    """Correction function u per unit reduced time.

    For m = 0 the coefficient p_{m-1} does not exist and is 0 by convention;
    the bracket then cancels identically and u = 0.
    """
    F0, G0 = transforms
    p, q = sys.p_full, sys.q_full
    cm1 = p[sys.m - 1] if sys.m >= 1 else 0.0 + 0.0j
    P0 = p[0]
    Pp0 = p[1] if len(p) > 1 else 0.0 + 0.0j
    Qp0 = q[1]
    return 0.5j * (cm1 - sys.gamma_m * (F0 * (P0 - Qp0) + G0 * Pp0))


def build_system(m: int, tau: complex, c: float) -> OrthoPolySystem:
    """Full solve: polynomials, norming data, Cauchy transforms and u."""
    from .moments import moments_bessel  # local import to keep module load light

    sys = solve_polys(moments_bessel(m, tau, c))
    F0, G0 = cauchy_transforms_at_zero(sys, moments_bessel(m + 1, tau, c))
    u = compute_u(sys, (F0, G0))
    return OrthoPolySystem(
        m=sys.m, tau=sys.tau, c=sys.c, c_coeffs=sys.c_coeffs,
        d_coeffs=sys.d_coeffs, gamma_m=sys.gamma_m, kappa_m=sys.kappa_m,
        W_m=sys.W_m, condition_estimate=sys.condition_estimate,
        F_at_0=F0, G_at_0=G0, u_m=u)


def eval_Y(sys: OrthoPolySystem, z: complex, nodes: int = 512,
           radius: float | None = None) -> np.ndarray:
    """2x2 solution matrix at a point off the integration contour.

    Row 1: (-gamma C[M P](z), gamma P(z)); row 2: (-C[M Q](z), Q(z)), where
    C[f](z) is the Cauchy transform over a clockwise circle of the given
    radius (> 1, so that it encloses the weight's only finite singularities
    at 0 and -i).  When no radius is given, one is chosen away from |z|; an
    explicitly requested radius too close to |z| raises OnContourError.  The
    result is unimodular up to quadrature error whichever homotopic contour
    is used.
    """
    z = complex(z)
    if radius is None:
        radius = ORACLE_RADIUS if abs(abs(z) - ORACLE_RADIUS) >= 0.2 else 1.3
    if abs(abs(z) - radius) < 0.05:
        raise OnContourError(f"evaluation point {z} too close to the circle |w| = {radius}")
    w, dw = oracle_circle(nodes, radius=radius)
    Mw = weight_M(w, sys.m, sys.tau, sys.c)
    pw = np.polyval(sys.p_full[::-1], w)
    qw = np.polyval(sys.q_full[::-1], w)
    cauchy = 1.0 / (w - z) / (2j * math.pi)
    CP = np.sum(Mw * pw * cauchy * dw)
    CQ = np.sum(Mw * qw * cauchy * dw)
    return np.array([
        [-sys.gamma_m * CP, sys.gamma_m * _polyval(sys.p_full, z)],
        [-CQ, _polyval(sys.q_full, z)],
    ])


def orthogonality_residuals(sys: OrthoPolySystem, nodes: int = 512) -> np.ndarray:
    """Quadrature residuals of the defining orthogonality conditions.

    Returns |integral M w^n P| for n = 0..m-1 followed by |integral M w^n Q|
    for n = 0..m, computed on the oracle circle (independent of the moment
    formulas used in the solve).
    """
    w, dw = oracle_circle(nodes)
    Mw = weight_M(w, sys.m, sys.tau, sys.c)
    pw = np.polyval(sys.p_full[::-1], w)
    qw = np.polyval(sys.q_full[::-1], w)
    res = []
    for n in range(sys.m):
        res.append(abs(np.sum(Mw * w ** n * pw * dw) / (2j * math.pi)))
    for n in range(sys.m + 1):
        res.append(abs(np.sum(Mw * w ** n * qw * dw) / (2j * math.pi)))
    return np.array(res)
