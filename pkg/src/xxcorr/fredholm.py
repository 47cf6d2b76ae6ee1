"""Exact (all-temperature) correlator via the Fredholm determinant.

The correlator is assembled from three factors, each produced by contour
quadrature on the hole/particle contours of :mod:`xxcorr.contours`:

* a prefactor ``F(m)`` built from the dressed thermal weight z: a double
  contour integral of z coth'(lam - mu) z between the hole contour and a
  tightly enclosed copy, and -m times the analytic momentum-weighted
  integral of log coth(eps/2T).  The imaginary part of the latter integral
  equals the Fermi momentum exactly, which absorbs the -i m p_F phase.
* the scalar ``Omega`` and the function ``E_h`` on the particle contour --
  Cauchy-type averages of the hole-contour density ``wbar e^g`` with
  g = i(m p - t eps), where e^{i m p} is evaluated single-valuedly as
  (-i tanh x)^m;
* the Nystroem determinant and resolvent of the integrable kernel

      V(x, y) = [e^{x-y} E_h(y) - e^{y-x} E_h(x)] / sinh(x-y) * w(y) e^{-g(y)}

  on the particle contour, whose diagonal is the analytic limit
  (2 E_h - E_h') w e^{-g}.

Boundary values of the Cauchy transforms are always obtained by contour
deformation (offset copies, or the identity "interior boundary value of the
particle transform = hole transform"), never by principal-value splitting.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .contours import (
    ContourPath,
    build_hole_contour,
    build_particle_contour,
    find_thermal_roots,
    offset_contour,
    thermal_z_on_path,
    unwrapped_log_coth,
)
from .errors import ConvergenceError, DomainError, GeometryError, SingularSystemError
from .hightemp import CorrelatorValue, _model_error
from .model import FermiData, PhysicalParams

_BASE_PARTICLE_NODES = 816  # particle-contour nodes at geometry density 1.0


# ---------------------------------------------------------------------------
# vectorised dispersion helpers (arrays of rapidities)

def _pprime(x: np.ndarray) -> np.ndarray:
    return -2j / np.sinh(2.0 * x)


def _eps(x: np.ndarray, params: PhysicalParams) -> np.ndarray:
    return params.h - 4j * params.J / np.sinh(2.0 * x)


def _eps_prime(x: np.ndarray, params: PhysicalParams) -> np.ndarray:
    return 8j * params.J * np.cosh(2.0 * x) / np.sinh(2.0 * x) ** 2


def _z_prime(x: np.ndarray, params: PhysicalParams) -> np.ndarray:
    """Derivative of the dressed weight: meromorphic, single-valued."""
    return -_eps_prime(x, params) / (
        2j * math.pi * params.T * np.sinh(_eps(x, params) / params.T))


def _zf(x: np.ndarray) -> np.ndarray:
    """Image-plane coordinate -i tanh(x) = e^{i p(x)} (single-valued)."""
    return -1j * np.tanh(x)


def _cauchy_kernel(x: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """sinh(x + lam) / sinh(x - lam) for x (rows) against lam (cols)."""
    return np.sinh(x[:, None] + lam[None, :]) / np.sinh(x[:, None] - lam[None, :])


# ---------------------------------------------------------------------------
# temperature-dependent, (m, t)-independent geometry

@dataclass(frozen=True)
class _Geometry:
    params: PhysicalParams
    fermi: FermiData
    hole: ContourPath
    particle: ContourPath
    hole_inner: ContourPath
    particle_in: ContourPath
    particle_out: ContourPath
    logcoth_hole: np.ndarray
    logcoth_particle: np.ndarray
    z_hole: np.ndarray
    z_particle: np.ndarray
    z_hole_inner: np.ndarray
    z_particle_in: np.ndarray
    phi_p_on_hole: np.ndarray
    phi_h_on_particle: np.ndarray
    prefactor_quad: complex      # double integral of z coth' z
    prefactor_log_integral: complex  # momentum-weighted log-coth integral

    def prefactor(self, m: int) -> complex:
        """F(m) = exp(quad term - m * analytic log integral).

        The imaginary part of the log integral equals p_F, so the separate
        -i m p_F phase of the raw expression is already included.
        """
        return cmath.exp(self.prefactor_quad - m * self.prefactor_log_integral)


def _phi_exponent(x: np.ndarray, path: ContourPath, z: np.ndarray) -> np.ndarray:
    """integral over path of p'(lam) z(lam) sinh(x+lam)/sinh(x-lam) dlam."""
    dens = path.weights * _pprime(path.nodes) * z
    return (dens[None, :] * _cauchy_kernel(x, path.nodes)).sum(axis=1)


def _phi_from_hole(x: np.ndarray, geom: "_Geometry") -> np.ndarray:
    return 0.5j * _pprime(x) * np.exp(1j * _phi_exponent(x, geom.hole, geom.z_hole))


def _phi_from_particle(x: np.ndarray, path: ContourPath, z: np.ndarray) -> np.ndarray:
    return 0.5j * _pprime(x) * np.exp(-1j * _phi_exponent(x, path, z))


def _min_distance(x: np.ndarray, path: ContourPath) -> float:
    return float(np.min(np.abs(x[:, None] - path.nodes[None, :])))


def _prefactor_pieces(params, hole, hole_inner, logcoth_hole, z_hole, z_hole_inner):
    """The two m-independent ingredients of F(m).

    Double integral: integrated by parts in the outer-contour variable
    (coth'(l-m) -> coth(l-m) acting on dz/dmu, which is meromorphic) and
    singularity-subtracted so that the nearby pole at lam = mu costs no
    quadrature accuracy:

        G(lam) = int coth(lam-mu) (z'(mu) - z'(lam)) dmu - 2 pi i z'(lam)
        term   = - int_{inner} z(lam) G(lam) dlam

    Log integral: int dlam/(2 pi) p'(lam) log coth(eps/2T) with the
    branch-tracked logarithm; analytic in the contour shape, imaginary part
    identically p_F.
    """
    zp_hole = _z_prime(hole.nodes, params)
    zp_inner = _z_prime(hole_inner.nodes, params)
    cothk = 1.0 / np.tanh(hole_inner.nodes[:, None] - hole.nodes[None, :])
    G = ((cothk * (zp_hole[None, :] - zp_inner[:, None])) @ hole.weights
         - 2j * math.pi * zp_inner)
    term1 = -np.sum(hole_inner.weights * z_hole_inner * G)
    log_integral = np.sum(hole.weights / (2.0 * math.pi)
                          * _pprime(hole.nodes) * logcoth_hole)
    return complex(term1), complex(log_integral)


@lru_cache(maxsize=8)
def _geometry(params: PhysicalParams, density: float, inner_offset: float,
              boundary_offset: float, r_acc: float,
              particle_shift: float) -> _Geometry:
    fermi = FermiData.from_params(params)
    roots = find_thermal_roots(params, r_acc=r_acc)
    hole = build_hole_contour(params, roots, density=density)
    particle = build_particle_contour(params, roots, density=density)
    if particle_shift != 0.0:
        particle = offset_contour(particle, particle_shift)
    hole_inner = offset_contour(hole, -inner_offset)
    particle_in = offset_contour(particle, -boundary_offset)
    particle_out = offset_contour(particle, +boundary_offset)

    logcoth_hole = unwrapped_log_coth(hole, params)
    logcoth_particle = unwrapped_log_coth(particle, params)
    z_hole = logcoth_hole / (2j * math.pi)
    z_particle = logcoth_particle / (2j * math.pi)
    z_hole_inner = thermal_z_on_path(hole_inner, params)
    z_particle_in = thermal_z_on_path(particle_in, params)

    sep = _min_distance(hole.nodes, particle)
    if sep < 0.05:
        raise GeometryError(
            f"hole and particle contours come within {sep:.3g} of each other")

    geom = _Geometry(
        params=params, fermi=fermi, hole=hole, particle=particle,
        hole_inner=hole_inner, particle_in=particle_in,
        particle_out=particle_out,
        logcoth_hole=logcoth_hole, logcoth_particle=logcoth_particle,
        z_hole=z_hole, z_particle=z_particle, z_hole_inner=z_hole_inner,
        z_particle_in=z_particle_in,
        phi_p_on_hole=np.empty(0), phi_h_on_particle=np.empty(0),
        prefactor_quad=0j, prefactor_log_integral=0j)
    # fill the derived tables (dataclass is frozen; rebuild with results)
    phi_p_on_hole = _phi_from_particle(hole.nodes, particle, z_particle)
    phi_h_on_particle = _phi_from_hole(particle.nodes, geom)
    term1, logint = _prefactor_pieces(params, hole, hole_inner,
                                      logcoth_hole, z_hole, z_hole_inner)
    if abs(logint.imag - fermi.p_F) > 1e-7:
        raise ConvergenceError(
            "momentum-weighted log integral failed its Fermi-momentum identity "
            f"(got {logint.imag}, expected {fermi.p_F})")
    return _Geometry(
        params=params, fermi=fermi, hole=hole, particle=particle,
        hole_inner=hole_inner, particle_in=particle_in,
        particle_out=particle_out,
        logcoth_hole=logcoth_hole, logcoth_particle=logcoth_particle,
        z_hole=z_hole, z_particle=z_particle, z_hole_inner=z_hole_inner,
        z_particle_in=z_particle_in,
        phi_p_on_hole=phi_p_on_hole, phi_h_on_particle=phi_h_on_particle,
        prefactor_quad=term1, prefactor_log_integral=logint)


# ---------------------------------------------------------------------------
# per-(m, t) state

class AuxFunctions:
    """Cached boundary data for one (params, m, t) evaluation.

    Holds the contours, the branch-tracked weight tables, the Cauchy-transform
    boundary tables, and the hole-contour density ``wbar e^g`` from which
    Omega, E_h and the kernel are built.
    """

    def __init__(self, params: PhysicalParams, m: int, t: complex, *,
                 density: float = 1.0, inner_offset: float = 0.03,
                 boundary_offset: float = 0.04, r_acc: float = 0.05,
                 particle_shift: float = 0.0):
        m = int(m)
        if not (0 <= m <= 8):
            raise DomainError(f"m = {m} outside supported range [0, 8]")
        params.require_critical()
        self.params = params
        self.m = m
        self.t = complex(t)
        self.geom = _geometry(params, float(density), float(inner_offset),
                              float(boundary_offset), float(r_acc),
                              float(particle_shift))
        g = self.geom
        eps_h = _eps(g.hole.nodes, params)
        eps_p = _eps(g.particle.nodes, params)
        self.eps_hole = eps_h
        self.eps_particle = eps_p
        # e^{+g} on the hole contour, e^{-g} on the particle contour
        self.eg_hole = _zf(g.hole.nodes) ** m * np.exp(-1j * self.t * eps_h)
        self.emg_particle = _zf(g.particle.nodes) ** (-m) * np.exp(1j * self.t * eps_p)
        self.wbar_eg = (-g.phi_p_on_hole / (1j * math.pi * (1.0 - np.exp(eps_h / params.T)))
                        * self.eg_hole)
        self.w_emg = self.emg_particle / (
            1j * math.pi * g.phi_h_on_particle * (1.0 - np.exp(-eps_p / params.T)))
        self.omega = complex(np.sum(g.hole.weights * self.wbar_eg))

    # -- Cauchy transforms ---------------------------------------------------

    def phi_h(self, x, side: str = "off") -> np.ndarray:
        """Hole-contour transform; ``side='plus'`` (interior boundary value on
        the hole contour) equals the particle transform there."""
        x = np.atleast_1d(np.asarray(x, complex))
        g = self.geom
        if side == "off":
            if _min_distance(x, g.hole) < 1e-8:
                raise GeometryError("evaluation point on the hole contour")
            return _phi_from_hole(x, g)
        if side == "plus":
            return _phi_from_particle(x, g.particle, g.z_particle)
        raise DomainError(f"unsupported side {side!r} for phi_h")

    def phi_p(self, x, side: str = "off") -> np.ndarray:
        """Particle-contour transform.

        side='off'   x off the particle contour: direct integral;
        side='plus'  interior boundary value on the contour: equals the hole
                     transform (contour-deformation identity);
        side='minus' exterior boundary value: integral over the inward-offset
                     copy, which keeps the evaluation point strictly outside
                     the integration contour.
        """
        x = np.atleast_1d(np.asarray(x, complex))
        g = self.geom
        if side == "off":
            if _min_distance(x, g.particle) < 1e-8:
                raise GeometryError("evaluation point on the particle contour")
            return _phi_from_particle(x, g.particle, g.z_particle)
        if side == "plus":
            return _phi_from_hole(x, g)
        if side == "minus":
            if _min_distance(x, g.particle_in) < 1e-8:
                raise GeometryError("evaluation point on the offset contour")
            return _phi_from_particle(x, g.particle_in, g.z_particle_in)
        raise DomainError(f"unsupported side {side!r} for phi_p")

    # -- hole-contour averages ------------------------------------------------

    def E_h(self, y) -> np.ndarray:
        """E_h(y) = integral over the hole contour of wbar e^g e^{y-x}/sinh(y-x)."""
        y = np.atleast_1d(np.asarray(y, complex))
        d = y[None, :] - self.geom.hole.nodes[:, None]
        phi = np.exp(d) / np.sinh(d)
        return ((self.geom.hole.weights * self.wbar_eg)[:, None] * phi).sum(axis=0)

    def E_h_prime(self, y) -> np.ndarray:
        """Analytic derivative of E_h (for the kernel diagonal)."""
        y = np.atleast_1d(np.asarray(y, complex))
        d = y[None, :] - self.geom.hole.nodes[:, None]
        phi = np.exp(d) / np.sinh(d) * (1.0 - 1.0 / np.tanh(d))
        return ((self.geom.hole.weights * self.wbar_eg)[:, None] * phi).sum(axis=0)

    def E_p(self, x) -> np.ndarray:
        """Particle-contour analogue, built from the exterior boundary values."""
        x = np.atleast_1d(np.asarray(x, complex))
        g = self.geom
        php_minus = self.phi_p(g.particle.nodes, side="minus")
        dens = (g.particle.weights / (1j * math.pi) * php_minus * self.eg_on(g.particle.nodes)
                / (1.0 - np.exp(self.eps_particle / self.params.T)))
        d = x[None, :] - g.particle.nodes[:, None]
        phi = np.exp(d) / np.sinh(d)
        return (dens[:, None] * phi).sum(axis=0)

    def E_p_plus(self, x) -> np.ndarray:
        """Interior boundary value of E_p on the particle contour, computed by
        deforming the integration contour outward."""
        x = np.atleast_1d(np.asarray(x, complex))
        g = self.geom
        out = g.particle_out
        php = _phi_from_particle(out.nodes, g.particle, g.z_particle)
        eps_out = _eps(out.nodes, self.params)
        dens = (out.weights / (1j * math.pi) * php * self.eg_on(out.nodes)
                / (1.0 - np.exp(eps_out / self.params.T)))
        d = x[None, :] - out.nodes[:, None]
        phi = np.exp(d) / np.sinh(d)
        return (dens[:, None] * phi).sum(axis=0)

    def eg_on(self, x: np.ndarray) -> np.ndarray:
        """e^{g} = (-i tanh x)^m e^{-i t eps(x)} at arbitrary points."""
        return _zf(x) ** self.m * np.exp(-1j * self.t * _eps(x, self.params))


# ---------------------------------------------------------------------------
# Nystroem system and assembled correlator

@dataclass(frozen=True)
class NystromSystem:
    """Discretised kernel on the particle contour with its determinant data."""

    nodes: np.ndarray
    weights: np.ndarray
    kernel: np.ndarray          # V(y_j, y_k) * quadrature weight_k
    E_h_values: np.ndarray
    omega: complex
    log_det: complex
    resolvent_applied: np.ndarray   # (id + V)^{-1} E_h at the nodes

    @property
    def det(self) -> complex:
        return cmath.exp(self.log_det)


def build_nystrom(aux: AuxFunctions) -> NystromSystem:
    g = aux.geom
    y = g.particle.nodes
    Eh = aux.E_h(y)
    Ehp = aux.E_h_prime(y)
    X, Y = y[:, None], y[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        V = (np.exp(X - Y) * Eh[None, :] - np.exp(Y - X) * Eh[:, None]) / np.sinh(X - Y)
    np.fill_diagonal(V, 2.0 * Eh - Ehp)
    V = V * aux.w_emg[None, :]
    K = V * g.particle.weights[None, :]
    A = np.eye(len(y), dtype=complex) + K
    sign, logabs = np.linalg.slogdet(A)
    if sign == 0:
        raise SingularSystemError("Nystroem matrix id + V is singular")
    u = np.linalg.solve(A, Eh)
    return NystromSystem(nodes=y, weights=g.particle.weights, kernel=K,
                         E_h_values=Eh, omega=aux.omega,
                         log_det=cmath.log(sign) + logabs,
                         resolvent_applied=u)


def prefactor_F(m: int, aux: AuxFunctions) -> complex:
    """Series prefactor for separation m (independent of t)."""
    return aux.geom.prefactor(int(m))


def _assemble(aux: AuxFunctions) -> tuple[complex, NystromSystem]:
    nys = build_nystrom(aux)
    resolvent_part = complex(np.sum(
        nys.weights * aux.w_emg * nys.E_h_values * nys.resolvent_applied))
    F = prefactor_F(aux.m, aux)
    value = (-1.0) ** aux.m * F * (nys.omega - resolvent_part) * nys.det
    return value, nys


def fredholm_correlator(m: int, t: complex, params: PhysicalParams,
                        N: int = 504, check_convergence: bool = True,
                        **geometry_options) -> CorrelatorValue:
    """Transverse correlator from the determinant representation.

    ``N`` sets the particle-contour quadrature budget (>= 64).  When
    ``check_convergence`` is set the value is recomputed on a coarser
    contour; disagreement beyond 1e-4 relative raises ConvergenceError and
    the difference feeds the error estimate.
    """
    if N < 64:
        raise DomainError(f"N must be >= 64, got {N}")
    density = N / _BASE_PARTICLE_NODES
    aux = AuxFunctions(params, m, t, density=density, **geometry_options)
    value, _ = _assemble(aux)
    err = 0.0
    if check_convergence:
        coarse_aux = AuxFunctions(params, m, t, density=density * 0.6,
                                  **geometry_options)
        coarse, _ = _assemble(coarse_aux)
        err = abs(value - coarse)
        if err > 1e-4 * max(abs(value), 1e-12):
            raise ConvergenceError(
                f"determinant value not converged at N = {N} for m={m}, t={t} "
                f"(coarse/fine differ by {err:.2e})")
    return CorrelatorValue(
        value=value, method="fredholm", error_estimate=err,
        metadata={"m": int(m), "t": complex(t), "J": params.J, "h": params.h,
                  "T": params.T, "N": int(N)})


def formfactor_leading_term(m: int, t: complex, params: PhysicalParams,
                            N: int = 504, **geometry_options) -> CorrelatorValue:
    """First term of the excitation series: (-1)^m F(m) Omega.

    This single hole-contour integral dominates the correlator in the
    spacelike regime (separation large compared to 4Jt).
    """
    density = N / _BASE_PARTICLE_NODES
    aux = AuxFunctions(params, m, t, density=density, **geometry_options)
    value = (-1.0) ** aux.m * prefactor_F(aux.m, aux) * aux.omega
    return CorrelatorValue(
        value=value, method="fredholm", error_estimate=_model_error(value, params),
        metadata={"m": int(m), "t": complex(t), "J": params.J, "h": params.h,
                  "T": params.T, "N": int(N), "term": "leading"})
