"""Self-contained invariant suite backing ``xxcorr check``.

Each entry returns (name, measured residual, tolerance, passed).  The suite
is a fast cross-section of the package's mathematical certificates, not a
replacement for the test suite.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .contours import build_hole_contour, build_particle_contour, find_thermal_roots
from .fredholm import AuxFunctions
from .hightemp import transverse_closed_form, transverse_highT
from .model import FermiData, PhysicalParams, energy, momentum, momentum_derivative
from .moments import moments_bessel, moments_quadrature
from .orthopoly import build_system, eval_Y, orthogonality_residuals
from .special import bessel_I, bessel_J


def _tau0_moment(m: int, s: int, c: float) -> complex:
    if s < m - 1:
        return 0.0 + 0.0j
    base = -(1j ** ((m - s) % 4)) / c
    if s == m - 1:
        return base
    return base * (2.0 - 2j * c * (s - m + 1))


def run_all(params: PhysicalParams, L: int = 8) -> list[tuple[str, float, float, bool]]:
    rng = np.random.default_rng(7)
    out: list[tuple[str, float, float, bool]] = []

    def add(name: str, residual: float, tol: float):
        out.append((name, float(residual), tol, bool(residual <= tol)))

    # special functions
    z = complex(rng.uniform(0.5, 20.0), rng.uniform(-3, 3))
    add("bessel symmetry I(-n) = I(n)",
        abs(bessel_I(-5, z) - bessel_I(5, z)), 1e-14)
    n = 7
    rec = abs(bessel_I(n - 1, z) - bessel_I(n + 1, z)
              - (2 * n / z) * bessel_I(n, z))
    add("bessel three-term recurrence", rec / max(1.0, abs(bessel_I(n, z))), 1e-10)
    tau = 2.5
    w = cmath.exp(1j * 0.9)
    series = sum(bessel_J(k, -1j * tau) * w ** k for k in range(-40, 41))
    add("bessel generating function",
        abs(cmath.exp(tau * (-0.5j) * (w - 1 / w)) - series), 1e-10)

    # dispersion
    fermi = FermiData.from_params(params)
    lam = complex(rng.uniform(-1, 1), rng.uniform(-0.1, 0.1))
    eps = energy(lam, params)
    fact = (-params.h * momentum_derivative(lam)
            * cmath.sinh(lam - fermi.lambda_minus)
            * cmath.sinh(lam - fermi.lambda_plus))
    add("energy factorisation", abs(eps - fact) / abs(eps), 1e-12)
    add("i*pi periodicity of the energy",
        abs(energy(lam + 1j * math.pi, params) - eps) / abs(eps), 1e-13)
    x = rng.uniform(-2, 2)
    add("energy real on Im = pi/4",
        abs(energy(x + 0.25j * math.pi, params).imag), 1e-13)
    add("momentum real on Im = pi/4",
        abs(momentum(x + 0.25j * math.pi).imag), 1e-13)

    # contours and thermal roots
    roots = find_thermal_roots(params)
    res_roots = max((abs(cmath.exp(-energy(r, params) / params.T) - 1.0)
                     for r in roots.roots_lower + roots.roots_upper), default=0.0)
    add("thermal root residuals", res_roots, 1e-10)
    hole = build_hole_contour(params, roots)
    particle = build_particle_contour(params, roots)
    add("hole contour closure integral", abs(np.sum(hole.weights)), 1e-12)
    wind_err = abs(hole.integrate(1.0 / (hole.nodes - fermi.lambda_minus))
                   / (2j * math.pi) - 1.0)
    add("hole contour winding about left Fermi rapidity", wind_err, 1e-10)
    wind_err = abs(particle.integrate(1.0 / (particle.nodes - fermi.lambda_plus))
                   / (2j * math.pi) - 1.0)
    add("particle contour winding about right Fermi rapidity", wind_err, 1e-10)

    # moments
    c = params.c
    dev = 0.0
    for m in range(4):
        table = moments_bessel(m, 0.0, c)
        for l in range(m + 1):
            for k in range(m + 2):
                dev = max(dev, abs(table.entries[l, k] - _tau0_moment(m, l + k, c)))
    add("moment table at tau = 0", dev, 1e-12)
    tau_c = 0.8 + 0.3j
    tb = moments_bessel(2, tau_c, c)
    tq = moments_quadrature(2, tau_c, c)
    add("moments: Bessel sums vs contour quadrature",
        float(np.max(np.abs(tb.entries - tq.entries)
                     / np.maximum(1.0, np.abs(tq.entries)))), 1e-10)

    # orthogonal polynomials
    sys2 = build_system(2, tau_c, c)
    add("orthogonality residuals", float(orthogonality_residuals(sys2).max()), 1e-10)
    add("norm identity d + gamma kappa",
        abs(sys2.d_coeffs[2] + sys2.gamma_m * sys2.kappa_m), 1e-10)
    add("unimodularity of the matrix solution",
        abs(np.linalg.det(eval_Y(sys2, -2j)) - 1.0), 1e-9)

    # Fredholm boundary identity
    aux = AuxFunctions(params, 0, 0.1)
    idx = np.arange(10, len(particle.nodes), len(particle.nodes) // 6)[:6]
    pts = aux.geom.particle.nodes[idx]
    ratio = aux.phi_p(pts, side="minus") / aux.phi_p(pts, side="plus")
    target = np.tanh(aux.eps_particle[idx] / (2 * params.T)) ** 2
    add("particle transform boundary ratio",
        float(np.max(np.abs(ratio - target) / np.abs(target))), 1e-6)

    # asymptotic pipeline vs closed form
    v1 = transverse_highT(1, 0.2, params).value
    v2 = transverse_closed_form(1, 0.2, params).value
    add("pipeline vs closed form (m = 1)", abs(v1 - v2) / abs(v2), 1e-8)

    return out
