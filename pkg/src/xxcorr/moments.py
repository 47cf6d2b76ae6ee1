"""Moment matrices of the orthogonality weight, two independent ways.

The weight lives on a clockwise contour around 0 and -i in the image plane of
x -> -i tanh(x); its moments

    A[l, k] = integral dw/(2 pi i) M_m(w) w^{l+k},   l = 0..m, k = 0..m+1

depend on (l, k) only through s = l + k (Hankel structure).  Two routes:

* ``moments_bessel``     -- closed finite sums of modified Bessel functions
  I_n(-tau); the production path.
* ``moments_quadrature`` -- direct trapezoidal contour integration of
  b_{m-k-l}(w) e^{tau f(w)} over the clockwise circle |w| = 2, with
  f(w) = -(i/2)(w - 1/w); the independent oracle.  Any radius > 1 encloses
  the only finite singularities (w = 0 and w = -i); 2 balances pole distance
  against the growth of the exponential factor.

The fast path computes one value per distinct s and fills the table, which
enforces the Hankel structure by construction; the oracle fills every entry
independently.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .special import bessel_I_array

MAX_M = 8
MAX_ABS_TAU = 100.0


@dataclass(frozen=True)
class MomentTable:
    """Moments for separation index m at reduced time tau and field ratio c.

    ``entries[l, k]`` is the (l, k) moment, l = 0..m (rows), k = 0..m+1.
    """

    m: int
    tau: complex
    c: float
    entries: np.ndarray

    @property
    def by_sum(self) -> np.ndarray:
        """Moments indexed by s = l + k, s = 0..2m+1 (first anti-diagonals)."""
        out = np.empty(2 * self.m + 2, dtype=complex)
        for s in range(2 * self.m + 2):
            l = min(s, self.m)
            out[s] = self.entries[l, s - l]
        return out


def _validate(m: int, tau: complex, c: float) -> tuple[int, complex, float]:
    m = int(m)
    if not (0 <= m <= MAX_M):
        raise DomainError(f"m = {m} outside supported range [0, {MAX_M}]")
    tau = complex(tau)
    if abs(tau) > MAX_ABS_TAU:
        raise DomainError(f"|tau| = {abs(tau):.3g} exceeds {MAX_ABS_TAU}")
    c = float(c)
    if not (0.0 < c < 1.0):
        raise DomainError(f"c = {c} outside the critical interval (0, 1)")
    return m, tau, c


def moment_by_sum(m: int, s: int, tau: complex, c: float,
                  bessels: np.ndarray | None = None) -> complex:
    """Single moment for k + l = s from the Bessel-sum formulas.

    With q = m - s the two branches (q - 1 >= 0 and < 0) share the structure

        -(i^q e^{ic tau}/c) * [ I_{q-1} + (1 + ic(q-1)) S + ic tau (I_{q-1} + I_q) ]

    where all Bessel functions are evaluated at -tau and S is e^{-tau} minus
    (resp. plus) the symmetric partial sum of I_n over |n| <= q-1 (resp. |q|).
    """
    q = m - s
    nmax = max(abs(q - 1), abs(q), 1)
    if bessels is None:
        bessels = bessel_I_array(nmax, -tau)
    I = lambda n: bessels[abs(n)]
    if q - 1 >= 0:
        part = I(0) + 2.0 * sum(I(n) for n in range(1, q)) if q >= 1 else 0.0
        S = cmath.exp(-tau) - part
    else:
        part = I(0) + 2.0 * sum(I(n) for n in range(1, -q + 1))
        S = cmath.exp(-tau) + part
    core = I(q - 1) + (1.0 + 1j * c * (q - 1)) * S + 1j * c * tau * (I(q - 1) + I(q))
    return -(1j ** (q % 4)) * cmath.exp(1j * c * tau) / c * core


def moments_bessel(m: int, tau: complex, c: float) -> MomentTable:
    """Moment table from the closed Bessel-sum formulas (one value per s)."""
    m, tau, c = _validate(m, tau, c)
    bessels = bessel_I_array(m + 2, -tau)
    by_sum = np.array([moment_by_sum(m, s, tau, c, bessels)
                       for s in range(2 * m + 2)])
    entries = np.empty((m + 1, m + 2), dtype=complex)
    for l in range(m + 1):
        for k in range(m + 2):
            entries[l, k] = by_sum[l + k]
    return MomentTable(m=m, tau=tau, c=c, entries=entries)


# ---------------------------------------------------------------------------
# contour-quadrature oracle

ORACLE_RADIUS = 2.0


def weight_b(n: int, w: np.ndarray, tau: complex, c: float) -> np.ndarray:
    """b_n(w) = e^{ic tau} w^{-n} / (2 pi c) * [ (w-i)/(w+i) - 2cw/(w+i)^2 ]."""
    w = np.asarray(w, complex)
    return (cmath.exp(1j * c * tau) * w ** (-n) / (2.0 * math.pi * c)
            * ((w - 1j) / (w + 1j) - 2.0 * c * w / (w + 1j) ** 2))


def oracle_circle(n_nodes: int, radius: float = ORACLE_RADIUS) -> tuple[np.ndarray, np.ndarray]:
    """Clockwise circle |w| = radius: nodes and complex weights dw."""
    theta = 2.0 * math.pi * np.arange(n_nodes) / n_nodes
    w = radius * np.exp(-1j * theta)
    dw = -1j * w * (2.0 * math.pi / n_nodes)
    return w, dw


def weight_M(w: np.ndarray, m: int, tau: complex, c: float) -> np.ndarray:
    """Orthogonality weight M_m(w) = 2 pi i b_m(w) e^{tau f(w)} on the circle."""
    w = np.asarray(w, complex)
    f = -0.5j * (w - 1.0 / w)
    return 2j * math.pi * weight_b(m, w, tau, c) * np.exp(tau * f)


def _quad_entries(m: int, tau: complex, c: float, n_nodes: int) -> np.ndarray:
    w, dw = oracle_circle(n_nodes)
    f = -0.5j * (w - 1.0 / w)
    expf = np.exp(tau * f)
    entries = np.empty((m + 1, m + 2), dtype=complex)
    for l in range(m + 1):
        for k in range(m + 2):
            entries[l, k] = np.sum(weight_b(m - k - l, w, tau, c) * expf * dw)
    return entries


def moments_quadrature(m: int, tau: complex, c: float, nodes: int = 256) -> MomentTable:
    """Moment table by trapezoidal quadrature on the clockwise oracle circle.

    Entries are computed independently (no Hankel shortcut).  The node count
    is doubled once; if any entry moves by more than 1e-10 the result is
    rejected.
    """
    m, tau, c = _validate(m, tau, c)
    if nodes < 64:
        raise DomainError(f"need at least 64 quadrature nodes, got {nodes}")
    coarse = _quad_entries(m, tau, c, nodes)
    fine = _quad_entries(m, tau, c, 2 * nodes)
    scale = np.maximum(1.0, np.abs(fine))
    if np.max(np.abs(fine - coarse) / scale) > 1e-10:
        raise ConvergenceError(
            f"moment quadrature not converged at {nodes} nodes for m={m}, tau={tau}"
        )
    return MomentTable(m=m, tau=tau, c=c, entries=fine)
