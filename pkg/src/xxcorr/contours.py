"""Closed integration contours in the rapidity strip, with certificates.

Two families of contours are needed:

* the *hole* contour: a rectangle around the real axis (|Im| <= b < pi/4)
  whose top edge carries a smooth bump rising just above Im = pi/4 around
  Re = -z_F, so that it encloses every root of e^{-eps/T} - 1 in the lower
  strip together with the left Fermi rapidity, and nothing else;
* the *particle* contour: the mirror image around Im = pi/2 with a downward
  bump around Re = +z_F, enclosing the upper-strip roots and the right Fermi
  rapidity.

The roots accumulate at 0 and i pi/2; both accumulation points are interior.
Every built contour carries a certificate: closure, sum(weights) ~ 0, and
winding numbers about a list of points that must be inside / outside.

Geometry is stored per smooth segment as analytic position / first / second
derivative callables, so that contours can be offset along exact normals and
mapped through conformal changes of variables without losing quadrature
accuracy.  Quadrature is composite Gauss-Legendre, 24 nodes per panel.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BranchCutError, ConvergenceError, DomainError, GeometryError
from .model import FermiData, PhysicalParams
from .special import arsinh

NODES_PER_PANEL = 24

_TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------------------
# smooth bump profile (C-infinity, compactly supported on [-1, 1])

def _bump(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, float)
    out = np.zeros_like(u)
    m = np.abs(u) < 1
    out[m] = np.exp(1.0 - 1.0 / (1.0 - u[m] ** 2))
    return out


def _bump_d(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, float)
    out = np.zeros_like(u)
    m = np.abs(u) < 1
    um = u[m]
    out[m] = _bump(um) * (-2.0 * um / (1.0 - um ** 2) ** 2)
    return out


def _bump_dd(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, float)
    out = np.zeros_like(u)
    m = np.abs(u) < 1
    um = u[m]
    g = -2.0 * um / (1.0 - um ** 2) ** 2
    gp = -2.0 * (1.0 + 3.0 * um ** 2) / (1.0 - um ** 2) ** 3
    out[m] = _bump(um) * (g * g + gp)
    return out


# ---------------------------------------------------------------------------
# segments and paths

@dataclass(frozen=True)
class Segment:
    """One smooth arc, parametrised over s in [0, 1]."""

    pos: Callable[[np.ndarray], np.ndarray]
    dpos: Callable[[np.ndarray], np.ndarray]
    d2pos: Callable[[np.ndarray], np.ndarray]
    panels: int


@dataclass(frozen=True)
class ContourPath:
    """Closed oriented path with quadrature nodes/weights and a certificate."""

    segments: tuple[Segment, ...]
    orientation: int
    nodes: np.ndarray     # complex quadrature points
    weights: np.ndarray   # complex weights, parametrisation derivative included
    inside_points: tuple[complex, ...]
    outside_points: tuple[complex, ...]

    def integrate(self, values: np.ndarray) -> complex:
        """Contour integral of a function sampled at ``self.nodes``."""
        return complex(np.sum(self.weights * values))

    def winding_number(self, point: complex) -> int:
        """Winding about ``point`` from the node polyline (robust, integer)."""
        z = np.concatenate([self.nodes, self.nodes[:1]]) - point
        total = np.sum(np.angle(z[1:] / z[:-1]))
        return int(round(total / (2.0 * math.pi)))

    def minimum_distance(self, point: complex) -> float:
        return float(np.min(np.abs(self.nodes - point)))

    def to_json(self, samples_per_segment: int = 64) -> str:
        """Debug/plot dump: sampled polylines per segment plus metadata."""
        s = np.linspace(0.0, 1.0, samples_per_segment)
        segs = []
        for seg in self.segments:
            p = seg.pos(s)
            segs.append({
                "panels": seg.panels,
                "samples": [{"re": float(v.real), "im": float(v.imag)} for v in p],
            })
        doc = {
            "orientation": self.orientation,
            "segments": segs,
            "n_nodes": int(len(self.nodes)),
            "certificate": {
                "inside": [{"re": p.real, "im": p.imag} for p in self.inside_points],
                "outside": [{"re": p.real, "im": p.imag} for p in self.outside_points],
            },
        }
        return json.dumps(doc, indent=2)


def _line_segment(z0: complex, z1: complex, panels: int) -> Segment:
    dz = z1 - z0
    return Segment(
        pos=lambda s, z0=z0, dz=dz: z0 + dz * np.asarray(s, float),
        dpos=lambda s, dz=dz: np.full(np.shape(np.asarray(s, float)), dz, complex),
        d2pos=lambda s: np.zeros(np.shape(np.asarray(s, float)), complex),
        panels=panels,
    )


def _arc_segment(center: complex, radius: float, theta0: float, theta1: float,
                 panels: int) -> Segment:
    dth = theta1 - theta0

    def pos(s):
        return center + radius * np.exp(1j * (theta0 + dth * np.asarray(s, float)))

    def dpos(s):
        return 1j * dth * radius * np.exp(1j * (theta0 + dth * np.asarray(s, float)))

    def d2pos(s):
        return -(dth ** 2) * radius * np.exp(1j * (theta0 + dth * np.asarray(s, float)))

    return Segment(pos=pos, dpos=dpos, d2pos=d2pos, panels=panels)


def _bump_segment(x0: float, x1: float, base_im: float, center: float,
                  height: float, width: float, panels: int) -> Segment:
    """Horizontal edge from x0 to x1 at Im = base_im with a smooth vertical
    excursion of signed ``height`` over the window |Re - center| < width."""
    dx = x1 - x0

    def pos(s):
        x = x0 + dx * np.asarray(s, float)
        return x + 1j * (base_im + height * _bump((x - center) / width))

    def dpos(s):
        x = x0 + dx * np.asarray(s, float)
        return dx * (1.0 + 1j * (height / width) * _bump_d((x - center) / width))

    def d2pos(s):
        x = x0 + dx * np.asarray(s, float)
        return (dx ** 2) * 1j * (height / width ** 2) * _bump_dd((x - center) / width)

    return Segment(pos=pos, dpos=dpos, d2pos=d2pos, panels=panels)


def _assemble(segments: Sequence[Segment], orientation: int,
              inside: Sequence[complex], outside: Sequence[complex]) -> ContourPath:
    xg, wg = np.polynomial.legendre.leggauss(NODES_PER_PANEL)
    nodes, weights = [], []
    for seg in segments:
        edges = np.linspace(0.0, 1.0, seg.panels + 1)
        for i in range(seg.panels):
            s = 0.5 * (edges[i + 1] - edges[i]) * xg + 0.5 * (edges[i] + edges[i + 1])
            w = 0.5 * (edges[i + 1] - edges[i]) * wg
            nodes.append(seg.pos(s))
            weights.append(w * seg.dpos(s))
    return ContourPath(
        segments=tuple(segments),
        orientation=orientation,
        nodes=np.concatenate(nodes),
        weights=np.concatenate(weights),
        inside_points=tuple(complex(p) for p in inside),
        outside_points=tuple(complex(p) for p in outside),
    )


def verify_path(path: ContourPath, *, quadrature_tol: float = 1e-10) -> None:
    """Certificate checks; raises GeometryError on any failure."""
    # closed: each segment ends where the next begins
    ends = [seg.pos(np.array([1.0]))[0] for seg in path.segments]
    starts = [seg.pos(np.array([0.0]))[0] for seg in path.segments]
    for i in range(len(path.segments)):
        gap = abs(ends[i] - starts[(i + 1) % len(path.segments)])
        if gap > 1e-13:
            raise GeometryError(f"contour not closed: gap {gap:.2e} after segment {i}")
    if abs(np.sum(path.weights)) > 1e-12:
        raise GeometryError("closed-contour integral of dz does not vanish")
    for p in path.inside_points:
        if path.winding_number(p) != path.orientation:
            raise GeometryError(f"point {p} not enclosed with winding {path.orientation}")
        res = path.integrate(1.0 / (path.nodes - p)) / _TWO_PI_I
        if abs(res - path.orientation) > quadrature_tol:
            raise GeometryError(
                f"quadrature winding for inside point {p} off by {abs(res - path.orientation):.2e}"
            )
    for p in path.outside_points:
        if path.winding_number(p) != 0:
            raise GeometryError(f"point {p} unexpectedly enclosed")
        res = path.integrate(1.0 / (path.nodes - p)) / _TWO_PI_I
        if abs(res) > quadrature_tol:
            raise GeometryError(
                f"quadrature winding for outside point {p} off by {abs(res):.2e}"
            )


# ---------------------------------------------------------------------------
# thermal roots

@dataclass(frozen=True)
class ThermalRootSet:
    """Roots of e^{-eps(x)/T} = 1 in the two half-strips.

    The n-th root solves eps(x) = 2 pi i n T; roots with index beyond
    ``truncation_index`` lie within ``r_acc`` of an accumulation point
    (0 for the lower family, i pi/2 for the upper) and are not listed.
    """

    roots_lower: tuple[complex, ...]
    roots_upper: tuple[complex, ...]
    truncation_index: int
    r_acc: float
    accumulation_points: tuple[complex, complex] = (0.0 + 0.0j, 0.5j * math.pi)


def _root_residual(x: complex, params: PhysicalParams) -> float:
    eps = params.h - 4j * params.J / cmath.sinh(2.0 * x)
    return abs(cmath.exp(-eps / params.T) - 1.0)


def find_thermal_roots(params: PhysicalParams, r_acc: float = 0.05) -> ThermalRootSet:
    """Enumerate the thermal roots outside radius ``r_acc`` of the
    accumulation points; every listed root is verified by residual check."""
    params.require_critical()
    if not (0.0 < r_acc < 0.2):
        raise DomainError(f"r_acc must lie in (0, 0.2), got {r_acc}")
    lower, upper = [], []
    n = 0
    while True:
        n += 1
        if n > 10 ** 6:
            raise ConvergenceError("thermal root enumeration did not terminate")
        done = True
        for sign in (+1, -1):
            x = 0.5 * arsinh(4j * params.J / (params.h - _TWO_PI_I * sign * n * params.T))
            if abs(x) >= r_acc:
                done = False
                lower.append(x)
            xu = 0.5j * math.pi - x
            if abs(xu - 0.5j * math.pi) >= r_acc:
                done = False
                upper.append(xu)
        if done:
            break
    for x in lower + upper:
        if _root_residual(x, params) > 1e-10:
            raise ConvergenceError(f"thermal root candidate {x} fails residual check")
    return ThermalRootSet(
        roots_lower=tuple(lower),
        roots_upper=tuple(upper),
        truncation_index=n,
        r_acc=r_acc,
    )


# ---------------------------------------------------------------------------
# contour builders

# panel budget per segment at density 1; floors keep the bump (where the
# Fermi rapidity sits ~0.05 away) resolved even under small node budgets
_BASE_PANELS = {"long": 9, "side": 2, "flank": 4, "bump": 8, "corner": 1}
_FLOOR_PANELS = {"long": 4, "side": 1, "flank": 3, "bump": 6, "corner": 1}

_CORNER_RADIUS = 0.1


def _panel(kind: str, density: float) -> int:
    return max(_FLOOR_PANELS[kind], round(_BASE_PANELS[kind] * density))


def _rounded_box_with_bump(y_lo: float, y_hi: float, a: float, bump_edge: str,
                           center: float, height: float, w: float,
                           density: float) -> list[Segment]:
    """Counterclockwise rounded rectangle [-a, a] x [y_lo, y_hi] whose top or
    bottom edge carries a smooth bump of signed ``height``.

    The rounded corners make the path tangent-continuous, so offsets along
    normals remain closed.
    """
    r = _CORNER_RADIUS
    np_ = lambda kind: _panel(kind, density)

    def edge(x0, x1, base_im, with_bump):
        if not with_bump:
            return [_line_segment(x0 + 1j * base_im, x1 + 1j * base_im, np_("long"))]
        lo, hi = center - w, center + w
        pieces = [(x0, lo, "flank"), (lo, hi, "bump"), (hi, x1, "flank")]
        if x0 > x1:
            pieces = [(x0, hi, "flank"), (hi, lo, "bump"), (lo, x1, "flank")]
        return [_bump_segment(u0, u1, base_im, center, height, w, np_(kind))
                for (u0, u1, kind) in pieces]

    segs: list[Segment] = []
    segs += edge(-a + r, a - r, y_lo, bump_edge == "bottom")
    segs.append(_arc_segment((a - r) + 1j * (y_lo + r), r, -math.pi / 2, 0.0,
                             np_("corner")))
    segs.append(_line_segment(a + 1j * (y_lo + r), a + 1j * (y_hi - r), np_("side")))
    segs.append(_arc_segment((a - r) + 1j * (y_hi - r), r, 0.0, math.pi / 2,
                             np_("corner")))
    segs += edge(a - r, -a + r, y_hi, bump_edge == "top")
    segs.append(_arc_segment((-a + r) + 1j * (y_hi - r), r, math.pi / 2, math.pi,
                             np_("corner")))
    segs.append(_line_segment(-a + 1j * (y_hi - r), -a + 1j * (y_lo + r), np_("side")))
    segs.append(_arc_segment((-a + r) + 1j * (y_lo + r), r, math.pi, 1.5 * math.pi,
                             np_("corner")))
    return segs


def _hole_segments(z_F: float, a: float, b: float, delta: float, w: float,
                   density: float) -> list[Segment]:
    """Counterclockwise rounded rectangle with an upward bump at Re = -z_F."""
    peak = math.pi / 4 + delta - b
    return _rounded_box_with_bump(-b, b, a, "top", -z_F, peak, w, density)


def _particle_segments(z_F: float, a: float, b: float, delta: float, w: float,
                       density: float) -> list[Segment]:
    """Counterclockwise rounded rectangle about Im = pi/2, downward bump at +z_F."""
    y0 = math.pi / 2
    depth = (y0 - b) - (math.pi / 4 - delta)
    return _rounded_box_with_bump(y0 - b, y0 + b, a, "bottom", z_F, -depth, w,
                                  density)


def _default_geometry(fermi: FermiData, delta: float, bump_width: float | None,
                      half_width: float | None):
    w = bump_width if bump_width is not None else min(fermi.z_F / 2.0, 0.3)
    a = half_width if half_width is not None else max(fermi.z_F + w + 0.5, 1.4)
    if w <= 0 or a <= fermi.z_F + w + 2 * _CORNER_RADIUS:
        raise GeometryError("contour half-width too small for the bump window")
    return a, w


def _build_with_selftest(make_segments, orientation, inside, outside,
                         density: float) -> ContourPath:
    """Assemble, verify, and double panel counts until the residue self-test
    is stable to 1e-11 (at most three doublings)."""
    tol = 1e-10 if density >= 1.0 else 1e-8
    path = _assemble(make_segments(density), orientation, inside, outside)
    verify_path(path, quadrature_tol=tol)
    probe = inside[0]
    prev = path.integrate(1.0 / (path.nodes - probe)) / _TWO_PI_I
    for _ in range(3):
        cand = _assemble(make_segments(2 * density), orientation, inside, outside)
        cur = cand.integrate(1.0 / (cand.nodes - probe)) / _TWO_PI_I
        if abs(cur - prev) < 1e-11:
            return path
        density *= 2
        path = cand
        verify_path(path, quadrature_tol=tol)
        prev = cur
    raise ConvergenceError("contour quadrature self-test did not stabilise")


def build_hole_contour(params: PhysicalParams, roots: ThermalRootSet, *,
                       b: float = math.pi / 8, delta: float = 0.08,
                       bump_width: float | None = None,
                       half_width: float | None = None,
                       density: float = 1.0) -> ContourPath:
    """Positively oriented contour enclosing the lower-strip thermal roots and
    the left Fermi rapidity; excludes the upper-strip roots and the right one."""
    if not (_CORNER_RADIUS < b <= math.pi / 8):
        raise GeometryError(f"rectangle half-height b = {b} outside ({_CORNER_RADIUS}, pi/8]")
    fermi = FermiData.from_params(params)
    a, w = _default_geometry(fermi, delta, bump_width, half_width)
    inside = list(roots.roots_lower) + [fermi.lambda_minus, 0.0 + 0.0j]
    outside = list(roots.roots_upper) + [fermi.lambda_plus, 0.5j * math.pi]
    return _build_with_selftest(
        lambda d: _hole_segments(fermi.z_F, a, b, delta, w, d),
        +1, inside, outside, density)


def build_particle_contour(params: PhysicalParams, roots: ThermalRootSet, *,
                           b: float = math.pi / 8, delta: float = 0.08,
                           bump_width: float | None = None,
                           half_width: float | None = None,
                           density: float = 1.0) -> ContourPath:
    """Mirror of the hole contour about Im = pi/4: encloses the upper-strip
    roots, the right Fermi rapidity and i pi/2."""
    if not (_CORNER_RADIUS < b <= math.pi / 8):
        raise GeometryError(f"rectangle half-height b = {b} outside ({_CORNER_RADIUS}, pi/8]")
    fermi = FermiData.from_params(params)
    a, w = _default_geometry(fermi, delta, bump_width, half_width)
    inside = list(roots.roots_upper) + [fermi.lambda_plus, 0.5j * math.pi]
    outside = list(roots.roots_lower) + [fermi.lambda_minus, 0.0 + 0.0j]
    return _build_with_selftest(
        lambda d: _particle_segments(fermi.z_F, a, b, delta, w, d),
        +1, inside, outside, density)


# ---------------------------------------------------------------------------
# derived contours

def _offset_segment(seg: Segment, shift: float, orientation: int) -> Segment:
    """Displace a segment by ``shift`` along outward normals (exact derivative)."""

    def unit_and_derivative(s):
        v = seg.dpos(s)
        a_ = seg.d2pos(s)
        mag = np.abs(v)
        u = v / mag
        up = a_ / mag - v * np.real(np.conj(v) * a_) / mag ** 3
        return u, up

    def pos(s):
        u, _ = unit_and_derivative(s)
        return seg.pos(s) + shift * (-1j * orientation) * u

    def dpos(s):
        u, up = unit_and_derivative(s)
        return seg.dpos(s) + shift * (-1j * orientation) * up

    def d2pos(s):
        # second derivative of the normal term is only needed for further
        # offsets/maps; approximate by central differences of dpos
        s = np.asarray(s, float)
        h = 1e-6
        return (dpos(s + h) - dpos(s - h)) / (2 * h)

    # the curvature correction sharpens the bump profile; refine until the
    # segment quadrature reproduces the endpoint difference exactly
    panels = _refine_panel_count(pos, dpos, 2 * seg.panels)
    return Segment(pos=pos, dpos=dpos, d2pos=d2pos, panels=panels)


def _refine_panel_count(pos, dpos, panels: int, max_panels: int = 256) -> int:
    xg, wg = np.polynomial.legendre.leggauss(NODES_PER_PANEL)
    target = pos(np.array([1.0]))[0] - pos(np.array([0.0]))[0]
    while panels <= max_panels:
        edges = np.linspace(0.0, 1.0, panels + 1)
        total = 0.0 + 0.0j
        for i in range(panels):
            s = 0.5 * (edges[i + 1] - edges[i]) * xg + 0.5 * (edges[i] + edges[i + 1])
            total += np.sum(0.5 * (edges[i + 1] - edges[i]) * wg * dpos(s))
        if abs(total - target) <= 1e-13 * max(1.0, abs(target)):
            return panels
        panels *= 2
    raise ConvergenceError("offset segment quadrature did not converge")


def offset_contour(path: ContourPath, normal_shift: float) -> ContourPath:
    """Parallel contour displaced along outward (positive shift) or inward
    (negative) normals.  Certificates are re-verified; simplicity is checked."""
    if normal_shift == 0.0:
        return path
    segs = [_offset_segment(s, normal_shift, path.orientation) for s in path.segments]
    new = _assemble(segs, path.orientation, path.inside_points, path.outside_points)
    # simplicity check: points far apart along the curve must stay separated
    # in the plane (chords shorter than a fraction of the shift flag a pinch)
    arch = np.cumsum(np.abs(new.weights))
    total = arch[-1]
    sep = np.abs(arch[:, None] - arch[None, :])
    sep = np.minimum(sep, total - sep)
    d = np.abs(new.nodes[:, None] - new.nodes[None, :])
    mask = sep > 10.0 * abs(normal_shift)
    if mask.any() and d[mask].min() < 0.3 * abs(normal_shift):
        raise GeometryError("offset contour self-intersects or pinches")
    verify_path(new)
    return new


def image_contour_gamma_p(path: ContourPath) -> ContourPath:
    """Image of the particle contour under x -> -i tanh(x).

    The map swaps interior and exterior, so the image is clockwise and
    encloses 0, +-1, +-i while leaving infinity outside.
    """

    def mapped(seg: Segment) -> Segment:
        def pos(s):
            return -1j * np.tanh(seg.pos(s))

        def dpos(s):
            p = seg.pos(s)
            return -1j / np.cosh(p) ** 2 * seg.dpos(s)

        def d2pos(s):
            p = seg.pos(s)
            sech2 = 1.0 / np.cosh(p) ** 2
            return (2j * np.tanh(p) * sech2 * seg.dpos(s) ** 2
                    - 1j * sech2 * seg.d2pos(s))

        return Segment(pos=pos, dpos=dpos, d2pos=d2pos, panels=seg.panels)

    inside = (0.0 + 0.0j, 1.0 + 0.0j, 1j, -1.0 + 0.0j, -1j)
    outside = (40.0 + 40.0j,)
    new = _assemble([mapped(s) for s in path.segments], -path.orientation,
                    inside, outside)
    verify_path(new)
    return new


# ---------------------------------------------------------------------------
# branch-tracked thermal weight along a path

def unwrapped_log_coth(path: ContourPath, params: PhysicalParams) -> np.ndarray:
    """log coth(eps/2T) at the path nodes, continuous along the path.

    The principal value is taken at the first node and continued by
    unwrapping; the dressed weight is this divided by 2 pi i.  A closed
    contour enclosing balanced sets of roots and anti-roots must return to
    its starting branch: that closure is certified here, as is the node
    resolution (no single step may jump by more than one unit of phase).
    Global integer shifts of the branch drop out of every downstream
    integral, so the anchor choice is immaterial.
    """
    eps = params.h - 4j * params.J / np.sinh(2.0 * path.nodes)
    w = 1.0 / np.tanh(eps / (2.0 * params.T))
    lc = np.empty_like(w)
    lc[0] = np.log(w[0])
    steps = np.log(w[1:] / w[:-1])
    if np.max(np.abs(steps)) > 1.5:
        raise BranchCutError(
            "thermal weight varies too fast between contour nodes; "
            "a branch point sits too close to the path or nodes are too coarse"
        )
    lc[1:] = lc[0] + np.cumsum(steps)
    closure = abs(lc[0] - (lc[-1] + np.log(w[0] / w[-1])))
    if closure > 1e-8:
        raise BranchCutError(
            f"branch tracking of the thermal weight failed to close (residual {closure:.2e})"
        )
    return lc


def thermal_z_on_path(path: ContourPath, params: PhysicalParams) -> np.ndarray:
    """Branch-tracked dressed weight z at the path nodes."""
    return unwrapped_log_coth(path, params) / _TWO_PI_I
