"""Physical parameters, dispersion relations, Fermi data, thermal weight.

The chain Hamiltonian is ``H = J sum_j (sx_{j-1} sx_j + sy_{j-1} sy_j)
- (h/2) sum_j sz_j`` with J > 0 and a critical transverse field 0 < h < 4J.

Rapidity parametrisation.  One-particle momentum ``p(x) = -i ln(-i tanh x)``
(principal branch, cuts on the segments from -i pi/2 to 0 mod i pi), with

    p'(x)   = -2i / sinh(2x)
    eps(x)  = h - 4iJ / sinh(2x)

All four functions below are i*pi periodic and real on the lines
Im x = +-pi/4.  The dressed thermal weight is

    z(x) = ln[coth(eps(x)/2T)] / (2 pi i)

with the principal logarithm; branch-continuity bookkeeping along closed
contours lives in :mod:`xxcorr.contours`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import BranchCutError, DomainError, PoleError
from .special import arcosh

_POLE_TOL = 1e-12
_CUT_TOL = 1e-10


@dataclass(frozen=True)
class PhysicalParams:
    """Couplings of the chain: exchange J > 0, field h, temperature T > 0.

    The full pipeline requires the critical regime 0 < h < 4J; h = 0 is
    admitted only by the closed-form operations of :mod:`xxcorr.hightemp`.
    """

    J: float
    h: float
    T: float

    def __post_init__(self):
        if not (self.J > 0):
            raise DomainError(f"J must be > 0, got {self.J}")
        if not (self.T > 0):
            raise DomainError(f"T must be > 0, got {self.T}")
        if self.h < 0 or self.h >= 4 * self.J:
            raise DomainError(
                f"field h = {self.h} outside supported range [0, 4J) with J = {self.J}"
            )

    @property
    def c(self) -> float:
        """Dimensionless field h / 4J."""
        return self.h / (4.0 * self.J)

    def require_critical(self) -> None:
        """Raise unless 0 < h < 4J strictly (required by all pipeline operations)."""
        if self.h == 0:
            raise DomainError("h = 0 is only supported by the closed-form operations")


@dataclass(frozen=True)
class FermiData:
    """Zeros of the one-particle energy in the fundamental strip.

    ``lambda_minus/plus = i pi/4 -/+ z_F`` with ``z_F = arcosh(4J/h)/2``;
    the momentum there is ``p_F = arccos(h/4J)``.
    """

    z_F: float
    lambda_minus: complex
    lambda_plus: complex
    p_F: float

    @classmethod
    def from_params(cls, params: PhysicalParams) -> "FermiData":
        params.require_critical()
        z_F = 0.5 * arcosh(4.0 * params.J / params.h)
        return cls(
            z_F=z_F,
            lambda_minus=1j * math.pi / 4 - z_F,
            lambda_plus=1j * math.pi / 4 + z_F,
            p_F=math.acos(params.c),
        )


@dataclass(frozen=True)
class ReducedTime:
    """Complex time t together with the reduced variable tau = -4J (t - i/2T).

    The entire high-temperature asymptotics is a function of tau alone.
    ``strip_margin`` (optional) bounds |Im t| <= 1/(2T) + margin; the width of
    the validity strip is not known a priori, so no default is imposed.
    """

    t: complex
    tau: complex

    @classmethod
    def from_time(cls, t: complex, params: PhysicalParams,
                  strip_margin: float | None = None) -> "ReducedTime":
        t = complex(t)
        if strip_margin is not None:
            if abs(t.imag) > 1.0 / (2.0 * params.T) + strip_margin:
                raise DomainError(
                    f"Im t = {t.imag} outside validity strip "
                    f"|Im t| <= 1/(2T) + {strip_margin}"
                )
        return cls(t=t, tau=-4.0 * params.J * (t - 1j / (2.0 * params.T)))


def momentum_derivative(lam: complex) -> complex:
    """p'(lam) = -2i / sinh(2 lam)."""
    s = cmath.sinh(2.0 * complex(lam))
    if abs(s) < _POLE_TOL:
        raise PoleError(f"momentum derivative has a pole at lam = {lam}")
    return -2j / s


def energy(lam: complex, params: PhysicalParams) -> complex:
    """One-particle energy eps(lam) = h + 2J p'(lam) = h - 4iJ/sinh(2 lam)."""
    s = cmath.sinh(2.0 * complex(lam))
    if abs(s) < _POLE_TOL:
        raise PoleError(f"energy has a pole at lam = {lam}")
    return params.h - 4j * params.J / s


def energy_derivative(lam: complex, params: PhysicalParams) -> complex:
    """d eps / d lam = 8iJ cosh(2 lam) / sinh^2(2 lam)."""
    s = cmath.sinh(2.0 * complex(lam))
    if abs(s) < _POLE_TOL:
        raise PoleError(f"energy derivative has a pole at lam = {lam}")
    return 8j * params.J * cmath.cosh(2.0 * complex(lam)) / (s * s)


def _distance_to_momentum_cut(lam: complex) -> float:
    """Distance to the cuts {Re = 0, Im in [-pi/2, 0] mod pi}."""
    x, y = complex(lam).real, complex(lam).imag
    # fold Im into [-pi/2, pi/2)
    yf = (y + math.pi / 2) % math.pi - math.pi / 2
    dy = 0.0 if yf <= 0.0 else yf
    return math.hypot(x, dy)


def momentum(lam: complex) -> complex:
    """One-particle momentum p(lam) = -i ln(-i tanh lam), principal branch."""
    lam = complex(lam)
    if _distance_to_momentum_cut(lam) < _CUT_TOL:
        raise BranchCutError(f"lam = {lam} lies on a branch cut of the momentum")
    return -1j * cmath.log(-1j * cmath.tanh(lam))


def phase_factor(lam: complex) -> complex:
    """e^{i p(lam)} = -i tanh(lam): single-valued, safe on any contour."""
    return -1j * cmath.tanh(complex(lam))


def thermal_weight_z(lam: complex, params: PhysicalParams) -> complex:
    """Dressed weight z(lam) = ln coth(eps(lam)/2T) / (2 pi i), principal branch.

    Raises PoleError at the zeros/poles of coth (eps = i pi k T) and
    BranchCutError where coth(eps/2T) falls on the negative real axis, where
    the principal branch is discontinuous.  Contour integrations use the
    branch-tracked variant in :mod:`xxcorr.contours` instead.
    """
    e = energy(lam, params)
    u = e / (2.0 * params.T)
    s = cmath.sinh(u)
    c_ = cmath.cosh(u)
    if abs(s) < _POLE_TOL or abs(c_) < _POLE_TOL:
        raise PoleError(f"coth(eps/2T) has a zero or pole at lam = {lam}")
    w = c_ / s
    if w.real < 0 and abs(w.imag) < _CUT_TOL * max(1.0, abs(w.real)):
        raise BranchCutError(
            f"coth(eps/2T) = {w} lies on the principal logarithm cut at lam = {lam}"
        )
    return cmath.log(w) / (2j * math.pi)


def thermal_weight_z_derivative(lam: complex, params: PhysicalParams) -> complex:
    """dz/dlam = -eps'(lam) / (2 pi i T sinh(eps(lam)/T)).

    Unlike z itself this is meromorphic (single-valued), with simple poles at
    the roots of e^{-eps/T} = +-1 only.
    """
    e = energy(lam, params)
    s = cmath.sinh(e / params.T)
    if abs(s) < _POLE_TOL:
        raise PoleError(f"dz/dlam has a pole at lam = {lam}")
    return -energy_derivative(lam, params) / (2j * math.pi * params.T * s)
