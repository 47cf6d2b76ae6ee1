import cmath
import json
import math

import numpy as np
import pytest

from xxcorr.contours import (build_hole_contour, build_particle_contour,
                             find_thermal_roots, image_contour_gamma_p,
                             offset_contour, thermal_z_on_path,
                             unwrapped_log_coth, verify_path)
from xxcorr.errors import DomainError, GeometryError
from xxcorr.model import FermiData, PhysicalParams

# first lower-strip root at (J=1, h=2, T=5): x = arsinh(4i/(2 - 10 pi i))/2
ROOT_1 = -0.06323830821337882 + 0.004004460168354736j


@pytest.fixture(scope="module")
def setup():
    params = PhysicalParams(J=1.0, h=2.0, T=10.0)
    roots = find_thermal_roots(params)
    hole = build_hole_contour(params, roots)
    particle = build_particle_contour(params, roots)
    return params, roots, hole, particle


def _residual(x, params):
    eps = params.h - 4j * params.J / cmath.sinh(2 * x)
    return abs(cmath.exp(-eps / params.T) - 1.0)


def test_thermal_roots_residuals_and_families():
    params = PhysicalParams(J=1.0, h=2.0, T=5.0)
    roots = find_thermal_roots(params)
    assert roots.roots_lower[0] == pytest.approx(ROOT_1, rel=1e-13)
    for r in roots.roots_lower:
        assert abs(r.imag) < math.pi / 4
        assert _residual(r, params) <= 1e-10
    for r in roots.roots_upper:
        assert math.pi / 4 < r.imag < 3 * math.pi / 4
        assert _residual(r, params) <= 1e-10
    # listed roots all lie outside the accumulation radius; the next index in
    # each family falls within it
    assert min(abs(r) for r in roots.roots_lower) >= roots.r_acc
    n = roots.truncation_index
    nxt = 0.5 * cmath.asinh(4j * params.J / (params.h - 2j * math.pi * n * params.T))
    assert abs(nxt) < roots.r_acc


def test_root_domain_error():
    params = PhysicalParams(J=1.0, h=2.0, T=5.0)
    with pytest.raises(DomainError):
        find_thermal_roots(params, r_acc=0.5)


def test_hole_contour_certificates(setup):
    params, roots, hole, _ = setup
    fermi = FermiData.from_params(params)
    assert hole.winding_number(fermi.lambda_minus) == 1
    assert hole.winding_number(fermi.lambda_plus) == 0
    assert hole.winding_number(0.0) == 1
    assert hole.winding_number(0.5j * math.pi) == 0
    assert abs(np.sum(hole.weights)) < 1e-12
    verify_path(hole)  # quadrature exactness at 1e-10 for every certificate


def test_particle_contour_certificates(setup):
    params, roots, _, particle = setup
    fermi = FermiData.from_params(params)
    assert particle.winding_number(fermi.lambda_plus) == 1
    assert particle.winding_number(0.5j * math.pi) == 1
    assert particle.winding_number(fermi.lambda_minus) == 0
    assert particle.winding_number(0.0) == 0
    assert abs(np.sum(particle.weights)) < 1e-12
    verify_path(particle)


def test_offset_contour(setup):
    params, roots, hole, particle = setup
    fermi = FermiData.from_params(params)
    assert offset_contour(hole, 0.0) is hole
    inner = offset_contour(hole, -0.03)
    assert inner.winding_number(fermi.lambda_minus) == 1
    outer = offset_contour(particle, +0.05)
    for r in roots.roots_lower:
        assert outer.winding_number(r) == 0
    assert outer.winding_number(fermi.lambda_plus) == 1


def test_no_roots_between_contour_and_offset(setup):
    params, roots, hole, particle = setup
    # sampled residual scan midway between the particle contour and its
    # outward offset: e^{-eps/T} - 1 must stay away from zero there
    normal = -1j * particle.weights / np.abs(particle.weights)
    midpoints = particle.nodes + 0.025 * normal
    eps = params.h - 4j * params.J / np.sinh(2 * midpoints)
    assert np.min(np.abs(np.exp(-eps / params.T) - 1.0)) > 1e-3


def test_image_contour(setup):
    params, roots, _, particle = setup
    gamma = image_contour_gamma_p(particle)
    # the conformal map sends i pi/4 -> 1, 0 -> 0, +inf -> -i
    assert -1j * np.tanh(0.25j * np.pi) == pytest.approx(1.0)
    assert -1j * np.tanh(0.0) == 0.0
    assert -1j * np.tanh(30.0) == pytest.approx(-1j)
    assert gamma.orientation == -1
    for p in (0.0, 1.0, 1j, -1.0, -1j):
        assert gamma.winding_number(p) == -1
    assert gamma.winding_number(40.0 + 40.0j) == 0


def test_unwrapped_log_coth_consistency(setup):
    params, roots, hole, particle = setup
    for path in (hole, particle):
        lc = unwrapped_log_coth(path, params)
        eps = params.h - 4j * params.J / np.sinh(2 * path.nodes)
        coth = 1.0 / np.tanh(eps / (2 * params.T))
        # branch-tracked log exponentiates back to coth everywhere
        assert np.max(np.abs(np.exp(lc) - coth) / np.abs(coth)) < 1e-10
        # and differs from the principal log by integer multiples of 2 pi i
        k = (lc - np.log(coth)) / (2j * math.pi)
        assert np.max(np.abs(k - np.round(k.real))) < 1e-10


def test_thermal_z_global_shift_immaterial(setup):
    # a closed integral that any global integer branch shift cannot change:
    # exp(-2 integral z coth(2 lam) dlam) over the particle contour equals
    # tanh(h/2T)
    params, roots, hole, particle = setup
    z = thermal_z_on_path(particle, params)
    val = np.exp(-2.0 * np.sum(particle.weights * z / np.tanh(2.0 * particle.nodes)))
    assert val == pytest.approx(math.tanh(params.h / (2 * params.T)), rel=1e-10)


def test_geometry_error_for_bad_box(setup):
    params, roots, *_ = setup
    with pytest.raises(GeometryError):
        build_hole_contour(params, roots, half_width=0.3)
    with pytest.raises(GeometryError):
        build_hole_contour(params, roots, b=0.05)


def test_json_dump(setup):
    _, _, hole, _ = setup
    doc = json.loads(hole.to_json())
    assert doc["orientation"] == 1
    assert len(doc["segments"]) == len(hole.segments)
    assert doc["n_nodes"] == len(hole.nodes)
    assert doc["certificate"]["inside"]
