"""Transport of disk Leja sections through exterior conformal maps.

Only the ellipse family ships: Phi(z) = c1*z + c2/z with c1 = (a+b)/2 and
c2 = (a-b)/2 maps the unit circle onto the ellipse with semi-axes a >= b > 0
(and the exterior onto the exterior).  Its boundary is smooth, so the kernel
difference Phi'(e^it)/(Phi(e^it) - Phi(w)) - 1/(e^it - w) stays bounded and
the distortion constant A is a plain sup of trapezoid integrals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import wrap_angle
from .disk import UNIT_DISK, BoundarySamples, LejaSection
from .flip import (
    LebesgueReport,
    SupNormEstimate,
    _abs_flip_matrix,
    _abs_flips_at_points,
    _golden_max,
    _golden_max_vec,
    _lebesgue_at,
    _log_node_weights,
    default_grid,
)

_CHUNK = 4096


@dataclass(frozen=True)
class ExteriorMap:
    """Conformal map of the exterior of the unit disk onto an ellipse exterior."""

    kind: str
    a: float
    b: float
    c1: float
    c2: float

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.c1 * z + self.c2 / z
        return complex(out) if out.ndim == 0 else out

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.c1 - self.c2 / z**2
        return complex(out) if out.ndim == 0 else out

    def to_json(self) -> dict:
        return {"kind": self.kind, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class TransportedSection:
    source: LejaSection
    images: np.ndarray
    map: ExteriorMap

    def __len__(self) -> int:
        return self.images.size

    def to_json(self) -> dict:
        data = self.source.to_json()
        data["map"] = self.map.to_json()
        data["points"] = [{"re": float(z.real), "im": float(z.imag)} for z in self.images]
        return data

    def to_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "re", "im", "map"])
            tag = f"{self.map.kind} a={self.map.a} b={self.map.b}"
            for i, z in enumerate(self.images, start=1):
                w.writerow([i, repr(float(z.real)), repr(float(z.imag)), tag])


def ellipse_exterior_map(a: float, b: float) -> ExteriorMap:
    """Exterior map for the ellipse x^2/a^2 + y^2/b^2 = 1, a >= b > 0.

    The degenerate case a == b is the scaled circle Phi(z) = a*z.  The
    boundary parametrization is self-checked at 256 angles.
    """
    if not (b > 0.0 and a >= b):
        raise ValueError("need a >= b > 0")
    mp = ExteriorMap("ellipse", float(a), float(b), (a + b) / 2.0, (a - b) / 2.0)
    t = 2.0 * np.pi * np.arange(256) / 256
    img = mp(np.exp(1j * t))
    resid = (img.real / a) ** 2 + (img.imag / b) ** 2 - 1.0
    if np.max(np.abs(resid)) > 1e-12:
        raise AssertionError("ellipse parametrization self-check failed")
    return mp


def transport_sequence(mp: ExteriorMap, section: LejaSection) -> TransportedSection:
    """Pointwise image of a unit-disk section; no optimality is implied for it."""
    if section.compact_tag != UNIT_DISK:
        raise ValueError("only unit-disk sections can be transported")
    images = np.atleast_1d(np.array(mp(section.points), dtype=complex))
    if np.unique(images).size != images.size:
        raise ValueError("map produced coincident images")
    images.setflags(write=False)
    return TransportedSection(section, images, mp)


def boundary_samples(mp: ExteriorMap, count: int) -> BoundarySamples:
    """Images of ``count`` equispaced circle points; feeds the greedy builder."""
    t = 2.0 * np.pi * np.arange(count) / count
    return BoundarySamples(mp(np.exp(1j * t)), f"ellipse a={mp.a} b={mp.b}, {count} samples")


def chord_ratio(mp: ExteriorMap, z, w):
    """|Phi(z) - Phi(w)| / |z - w| for distinct circle points."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.abs(mp(z) - mp(w)) / np.abs(z - w)


def flip_sup_on_compact(
    ts: TransportedSection,
    p: int,
    boundary_grid: int | None = None,
    refine_iters: int = 40,
) -> SupNormEstimate:
    """Sup of the transported FLIP modulus over the image boundary.

    The scan runs over Phi(uniform circle grid) with golden refinement in the
    circle parameter; the node's own parameter is always a candidate.
    """
    nodes = ts.images
    n_points = nodes.size
    if not 1 <= p <= n_points:
        raise ValueError(f"p must be in 1..{n_points}, got {p}")
    log_w = _log_node_weights(nodes)
    grid = boundary_grid if boundary_grid else default_grid(n_points)
    mp = ts.map
    node_t = float(np.angle(ts.source.points[p - 1]))
    best_val, best_ang = 1.0, node_t
    kk = np.array([p - 1])
    for start in range(0, grid, _CHUNK):
        ang = 2.0 * np.pi * np.arange(start, min(start + _CHUNK, grid)) / grid
        bpts = mp(np.exp(1j * ang))
        vals = _abs_flips_at_points(nodes, bpts, np.broadcast_to(kk, ang.shape).copy(), log_w)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_ang = float(vals[i]), float(ang[i])
    refined = refine_iters > 0
    if refined:
        h = 2.0 * np.pi / grid

        def fn(t):
            return _abs_flips_at_points(nodes, np.atleast_1d(mp(np.exp(1j * t))), kk, log_w)[0]

        val, ang = _golden_max(fn, best_ang - h, best_ang + h, refine_iters)
        if val > best_val:
            best_val, best_ang = float(val), float(ang)
    return SupNormEstimate(best_val, wrap_angle(best_ang), grid, refined)


def compact_flip_stats(
    ts: TransportedSection,
    boundary_grid: int | None = None,
    refine_iters: int = 40,
    per_node_refine: bool = False,
) -> tuple[np.ndarray, LebesgueReport]:
    """Per-node sups and Lebesgue constant over the image boundary."""
    nodes = ts.images
    n_points = nodes.size
    log_w = _log_node_weights(nodes)
    grid = boundary_grid if boundary_grid else default_grid(n_points)
    mp = ts.map
    node_max = np.zeros(n_points)
    node_arg = np.array([float(np.angle(z)) for z in ts.source.points])
    leb_max, leb_arg = 0.0, 0.0
    for start in range(0, grid, _CHUNK):
        ang = 2.0 * np.pi * np.arange(start, min(start + _CHUNK, grid)) / grid
        mat = _abs_flip_matrix(nodes, mp(np.exp(1j * ang)), log_w)
        cmax = mat.max(axis=0)
        upd = cmax > node_max
        if upd.any():
            rows = mat.argmax(axis=0)
            node_arg[upd] = ang[rows[upd]]
            node_max[upd] = cmax[upd]
        sums = mat.sum(axis=1)
        i = int(np.argmax(sums))
        if sums[i] > leb_max:
            leb_max, leb_arg = float(sums[i]), float(ang[i])
    h = 2.0 * np.pi / grid
    if per_node_refine and refine_iters > 0:
        ks = np.arange(n_points)

        def fn_vec(ts_ang):
            return _abs_flips_at_points(nodes, mp(np.exp(1j * ts_ang)), ks, log_w)

        node_max = np.maximum(node_max, _golden_max_vec(fn_vec, node_arg - h, node_arg + h, refine_iters))
    node_max = np.maximum(node_max, 1.0)
    if refine_iters > 0:

        def leb_fn(t):
            return _lebesgue_at(nodes, complex(mp(np.exp(1j * t))), log_w)

        val, ang = _golden_max(leb_fn, leb_arg - h, leb_arg + h, refine_iters)
        if val > leb_max:
            leb_max, leb_arg = float(val), float(ang)
    report = LebesgueReport(n_points, max(leb_max, 1.0), wrap_angle(leb_arg), node_max)
    return node_max, report


def lebesgue_on_compact(
    ts: TransportedSection, boundary_grid: int | None = None, refine_iters: int = 40
) -> LebesgueReport:
    _, report = compact_flip_stats(ts, boundary_grid, refine_iters, per_node_refine=True)
    return report


def estimate_alper_constant(mp: ExteriorMap, w_grid: int = 512, t_grid: int = 512) -> float:
    """sup over |w|=1 of the integral of |Phi'(e^it)/(Phi(e^it)-Phi(w)) - 1/(e^it - w)| dt.

    The inner integral is a periodic trapezoid rule; at the single t node
    nearest arg(w) the integrand is replaced by its limit Phi''(w)/(2 Phi'(w)),
    estimated from second-order central differences of Phi along the circle,
    which keeps trapezoid order for the one substituted node.
    """
    if w_grid < 256 or t_grid < 256:
        raise ValueError("grids must be at least 256")
    t = 2.0 * np.pi * np.arange(t_grid) / t_grid
    zt = np.exp(1j * t)
    phi_t = mp(zt)
    dphi_t = mp.derivative(zt)
    h = 2.0 * np.pi / t_grid
    best = 0.0
    for s in 2.0 * np.pi * np.arange(w_grid) / w_grid:
        w = complex(np.exp(1j * s))
        phi_w = mp(w)
        with np.errstate(divide="ignore", invalid="ignore"):
            integrand = np.abs(dphi_t / (phi_t - phi_w) - 1.0 / (zt - w))
        i = int(np.argmin(np.abs(zt - w)))
        zp, zm = w * np.exp(1j * h), w * np.exp(-1j * h)
        d1 = (mp(zp) - mp(zm)) / (2.0 * h)
        d2 = (mp(zp) - 2.0 * phi_w + mp(zm)) / h**2
        phi1 = d1 / (1j * w)
        phi2 = (d2 + w * phi1) / (1j * w) ** 2
        integrand[i] = abs(phi2 / (2.0 * phi1))
        value = float(np.sum(integrand) * h)
        if value > best:
            best = value
    return best
