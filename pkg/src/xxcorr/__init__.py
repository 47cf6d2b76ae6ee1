"""Finite-temperature transverse dynamical correlators of the XX spin chain.

Three independent computations of <s1- s_{m+1}+(t)> at temperature T:

* :func:`transverse_highT` -- leading high-temperature asymptotics from
  moment-determined orthogonal polynomials (with closed Bessel forms for
  m <= 3 in :func:`transverse_closed_form`);
* :func:`fredholm_correlator` -- the exact determinant representation,
  evaluated by contour Nystroem quadrature;
* :func:`ed_transverse` -- exact diagonalisation of finite periodic chains.

Longitudinal correlators (:func:`longitudinal_exact`,
:func:`longitudinal_highT`, :func:`ed_longitudinal`) are included for
cross-checks.
"""

from .errors import (BranchCutError, ConvergenceError, DomainError,
                     GeometryError, OnContourError, PoleError, ResourceError,
                     SingularSystemError, XXCorrError)
from .fredholm import (AuxFunctions, NystromSystem, build_nystrom,
                       formfactor_leading_term, fredholm_correlator,
                       prefactor_F)
from .hightemp import (CorrelatorValue, longitudinal_exact,
                       longitudinal_highT, transverse_closed_form,
                       transverse_highT)
from .lattice import SpectralData, ed_longitudinal, ed_transverse, spectral_data
from .model import (FermiData, PhysicalParams, ReducedTime, energy,
                    momentum, momentum_derivative, thermal_weight_z)
from .moments import MomentTable, moments_bessel, moments_quadrature
from .contours import (ContourPath, ThermalRootSet, build_hole_contour,
                       build_particle_contour, find_thermal_roots,
                       image_contour_gamma_p, offset_contour)
from .orthopoly import (OrthoPolySystem, build_system,
                        cauchy_transforms_at_zero, compute_W, compute_u,
                        eval_Y, solve_polys)
from .special import bessel_I, bessel_J

__version__ = "0.1.0"

__all__ = [
    "AuxFunctions", "BranchCutError", "ContourPath", "ConvergenceError",
    "CorrelatorValue", "DomainError", "FermiData", "GeometryError",
    "MomentTable", "NystromSystem", "OnContourError", "OrthoPolySystem",
    "PhysicalParams", "PoleError", "ReducedTime", "ResourceError",
    "SingularSystemError", "SpectralData", "ThermalRootSet", "XXCorrError",
    "bessel_I", "bessel_J", "build_hole_contour", "build_nystrom",
    "build_particle_contour", "build_system", "cauchy_transforms_at_zero",
    "compute_W", "compute_u", "ed_longitudinal", "ed_transverse", "energy",
    "eval_Y", "find_thermal_roots", "formfactor_leading_term",
    "fredholm_correlator", "image_contour_gamma_p", "longitudinal_exact",
    "longitudinal_highT", "momentum", "momentum_derivative", "moments_bessel",
    "moments_quadrature", "offset_contour", "prefactor_F", "solve_polys",
    "spectral_data", "thermal_weight_z", "transverse_closed_form",
    "transverse_highT",
]
