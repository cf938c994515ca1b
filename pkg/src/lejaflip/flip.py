"""Fundamental Lagrange interpolation polynomials (FLIPs) of disk Leja sections.

Direct evaluation works for any pairwise-distinct node set.  For unit-disk
Leja sections whose length is not a power of two, the modulus also factors
over the binary blocks of the section,

    |l_k(z)| = (1/2**p1) |z**2**p1 - 1| / |z - z_k|
               * prod_q |z**2**pq + w0**2**pq| / |z_k**2**pq + w0**2**pq|,

with w0 the root of -1 attached to the section.  Sup norms are estimated on
the unit circle only (the maximum modulus principle makes that exact) by a
uniform angle scan followed by golden-section refinement.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .core import BoundViolation, binary_decompose, stable_abs_product, wrap_angle
from .disk import LejaSection, canonical_disk_leja, omega0_of_section

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_NEAR_NODE = 1e-8

__all__ = [
    "SupNormEstimate",
    "LebesgueReport",
    "SpecialNStats",
    "flip_direct",
    "roots_of_unity_flip_abs",
    "flip_structured_abs",
    "allones_block_flip_abs",
    "sup_norm_on_circle",
    "lebesgue_constant",
    "circle_flip_stats",
    "special_n_statistics",
    "default_grid",
]


@dataclass(frozen=True)
class SupNormEstimate:
    """Certified lower bound of a boundary sup, with its argmax parameter."""

    value: float
    argmax_angle: float
    coarse_grid_size: int
    refined: bool


@dataclass(frozen=True)
class LebesgueReport:
    n_points: int
    constant: float
    argmax_angle: float
    per_node_sup: np.ndarray

    def to_json(self) -> dict:
        return {
            "N": self.n_points,
            "constant": self.constant,
            "argmax_angle": self.argmax_angle,
            "per_node_sup": [float(v) for v in self.per_node_sup],
        }

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "sup_k"])
            for k, v in enumerate(self.per_node_sup, start=1):
                w.writerow([k, repr(float(v))])


@dataclass(frozen=True)
class SpecialNStats:
    sum_sup: float
    avg_sup: float
    max_sup: float
    min_over_k: float


def default_grid(n_points: int) -> int:
    """Coarse scan size: 64 angles per node oscillation, at least 4096."""
    return max(4096, 64 * n_points)


def _as_nodes(points) -> np.ndarray:
    if isinstance(points, LejaSection):
        return points.points
    pts = np.asarray(points, dtype=complex)
    if pts.ndim != 1 or pts.size == 0:
        raise ValueError("need a one-dimensional, nonempty node array")
    return pts


def _log_node_weights(nodes: np.ndarray) -> np.ndarray:
    """log prod_{j != k} |eta_k - eta_j| per node; rejects duplicate nodes."""
    d = np.abs(nodes[:, None] - nodes[None, :])
    np.fill_diagonal(d, 1.0)
    if np.any(d == 0.0):
        raise ValueError("nodes must be pairwise distinct")
    return np.log(d).sum(axis=1)


def flip_direct(points, k: int, z: complex) -> complex:
    """prod_{j != k} (z - eta_j) / (eta_k - eta_j), the k-th FLIP at z (k is 1-based)."""
    nodes = _as_nodes(points)
    n_points = nodes.size
    if not 1 <= k <= n_points:
        raise ValueError(f"k must be in 1..{n_points}, got {k}")
    if np.unique(nodes).size != n_points:
        raise ValueError("nodes must be pairwise distinct")
    others = np.delete(nodes, k - 1)
    log_num, ph_num = stable_abs_product(others, complex(z))
    log_den, ph_den = stable_abs_product(others, complex(nodes[k - 1]))
    if log_num == float("-inf"):
        return 0.0 + 0.0j
    return math.exp(log_num - log_den) * complex(np.exp(1j * (ph_num - ph_den)))


def roots_of_unity_flip_abs(m: int, k: int, z: complex) -> float:
    """|FLIP| for the m-th roots of unity: (1/m) |z**m - 1| / |z - z_k|.

    Within 1e-8 of the node the removable singularity is evaluated through
    the power-sum form (1/m) |sum_j z_k**(m-1-j) z**j|.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if not 1 <= k <= m:
        raise ValueError(f"k must be in 1..{m}, got {k}")
    z = complex(z)
    node = complex(np.exp(2j * np.pi * (k - 1) / m))
    return _unity_quotient_abs(z, node, m) / m


def _unity_quotient_abs(z: complex, node: complex, m: int) -> float:
    """|z**m - node**m| / |z - node| with the series form near the node."""
    if abs(z - node) < _NEAR_NODE:
        j = np.arange(m)
        return float(np.abs(np.sum(node ** (m - 1 - j) * z**j)))
    return abs(z**m - node**m) / abs(z - node)


def flip_structured_abs(section: LejaSection, k: int, z: complex) -> float:
    """|FLIP| through the binary-block factorization (first-block nodes only).

    Valid for unit-disk Leja sections whose length is not a power of two and
    for k up to the leading block size 2**p1; agrees with |flip_direct| there.
    """
    pts = section.points
    exps = binary_decompose(pts.size)
    if len(exps) < 2:
        raise ValueError("section length is a power of two; use roots_of_unity_flip_abs")
    block = 1 << exps[0]
    if not 1 <= k <= block:
        raise ValueError(f"structured form only covers k in 1..{block}, got {k}")
    omega = omega0_of_section(section)
    return _structured_abs(pts[k - 1], exps, omega, complex(z))


def _structured_abs(node: complex, exps: list[int], omega: complex, z: complex) -> float:
    block = 1 << exps[0]
    value = _unity_quotient_abs(z, node, block) / block
    for p in exps[1:]:
        t = 1 << p
        wt = omega**t
        value *= abs(z**t + wt) / abs(node**t + wt)
    return value


def allones_block_flip_abs(p1: int, ell: int, z: complex) -> float:
    """|FLIP| representative for first-block nodes of a section of length 2**(p1+1) - 1.

    With w = exp(i*pi*(2*ell+1)/2**p1) this evaluates
    |1 - w| / 2**(p1+1) * |z**2**(p1+1) - 1| / (|z - 1| |z - w|),
    which is the modulus of the FLIP at the node paired with w after rotating
    the argument by that node.  Removable singularities at z = 1 and z = w are
    handled by power-sum forms.
    """
    if p1 < 0:
        raise ValueError("p1 must be nonnegative")
    if not 0 <= ell < (1 << p1):
        raise ValueError(f"ell must be in 0..{(1 << p1) - 1}, got {ell}")
    z = complex(z)
    m = 1 << (p1 + 1)
    w = complex(np.exp(1j * np.pi * (2 * ell + 1) / (1 << p1)))
    if abs(z - 1.0) < _NEAR_NODE:
        quot = _unity_quotient_abs(z, 1.0 + 0.0j, m) / abs(z - w)
    else:
        quot = _unity_quotient_abs(z, w, m) / abs(z - 1.0)
    return abs(1.0 - w) / m * quot


# ---------------------------------------------------------------------------
# circle-grid scans


def _abs_flip_matrix(nodes: np.ndarray, bpts: np.ndarray, log_w: np.ndarray) -> np.ndarray:
    """|l_k(b)| for every boundary point b (rows) and node k (columns).

    Boundary points that coincide exactly with a node get their Kronecker row.
    A fast linear-domain kernel is used when the node weights and distance
    products stay inside double range; otherwise the log-domain kernel runs.
    """
    dx = bpts.real[:, None] - nodes.real[None, :]
    dy = bpts.imag[:, None] - nodes.imag[None, :]
    d2 = dx * dx + dy * dy
    hit = d2 == 0.0
    hit_rows = hit.any(axis=1)
    out = None
    if np.all(np.abs(log_w) < 280.0):
        w2 = np.exp(2.0 * log_w)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
            w_sq = np.prod(d2, axis=1)
            out = np.sqrt(w_sq[:, None] / (d2 * w2[None, :]))
        # rows whose distance product left double range lose accuracy silently
        safe = (w_sq > 1e-280) & (w_sq < 1e280)
        if not np.all((np.isfinite(out) & safe[:, None]) | hit_rows[:, None]):
            out = None
    if out is None:
        with np.errstate(divide="ignore"):
            log_d = 0.5 * np.log(d2)
        log_d[hit] = 0.0
        log_prod = log_d.sum(axis=1)
        out = np.exp(log_prod[:, None] - log_d - log_w[None, :])
    if hit_rows.any():
        out[hit_rows] = hit[hit_rows].astype(float)
    return out


def _abs_flips_at_points(nodes: np.ndarray, zs: np.ndarray, ks: np.ndarray, log_w: np.ndarray) -> np.ndarray:
    """|l_{ks[i]}(zs[i])| for paired evaluation points and 0-based node indices."""
    d = np.abs(zs[:, None] - nodes[None, :])
    hit = d == 0.0
    with np.errstate(divide="ignore"):
        log_d = np.log(d)
    log_d[hit] = 0.0
    log_prod = log_d.sum(axis=1)
    rows = np.arange(zs.size)
    vals = np.exp(log_prod - log_d[rows, ks] - log_w[ks])
    bad = hit.any(axis=1)
    if bad.any():
        vals[bad] = hit[bad, ks[bad]].astype(float)
    return vals


def _lebesgue_at(nodes: np.ndarray, z: complex, log_w: np.ndarray) -> float:
    """sum_k |l_k(z)| at a single point, O(N)."""
    d = np.abs(z - nodes)
    if np.any(d == 0.0):
        return 1.0
    logs = np.log(d)
    return float(np.sum(np.exp(logs.sum() - logs - log_w)))


def _golden_max(fn, lo: float, hi: float, iters: int) -> tuple[float, float]:
    """Golden-section maximum of a scalar function on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    return (fc, c) if fc >= fd else (fd, d)


def _golden_max_vec(fn, lo: np.ndarray, hi: np.ndarray, iters: int) -> np.ndarray:
    """Vectorized golden-section maxima over per-element brackets."""
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        left = fc > fd
        b[left] = d[left]
        d[left] = c[left]
        fd[left] = fc[left]
        c[left] = b[left] - _GOLDEN * (b[left] - a[left])
        right = ~left
        a[right] = c[right]
        c[right] = d[right]
        fc[right] = fd[right]
        d[right] = a[right] + _GOLDEN * (b[right] - a[right])
        probe = np.where(left, c, d)
        fp = fn(probe)
        fc = np.where(left, fp, fc)
        fd = np.where(right, fp, fd)
    return np.maximum(fc, fd)


_CHUNK = 4096


def _scan_circle(nodes: np.ndarray, grid: int, log_w: np.ndarray):
    """One pass over the uniform angle grid.

    Returns per-node grid maxima with their angles, and the grid maximum of
    the Lebesgue function with its angle.  Ties resolve toward smaller angles.
    """
    n_nodes = nodes.size
    node_max = np.zeros(n_nodes)
    node_arg = np.zeros(n_nodes)
    leb_max, leb_arg = 0.0, 0.0
    for start in range(0, grid, _CHUNK):
        ang = 2.0 * np.pi * np.arange(start, min(start + _CHUNK, grid)) / grid
        mat = _abs_flip_matrix(nodes, np.exp(1j * ang), log_w)
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
    return node_max, node_arg, leb_max, leb_arg


def sup_norm_on_circle(points, k: int, coarse_grid: int | None = None, refine_iters: int = 40) -> SupNormEstimate:
    """Sup of |l_k| over the unit circle: grid scan plus golden refinement.

    The node's own angle is always a candidate (the FLIP equals 1 there), so
    the estimate is a true lower bound of the sup and never drops below 1.
    """
    nodes = _as_nodes(points)
    n_points = nodes.size
    if not 1 <= k <= n_points:
        raise ValueError(f"k must be in 1..{n_points}, got {k}")
    log_w = _log_node_weights(nodes)
    grid = coarse_grid if coarse_grid else default_grid(n_points)
    best_val, best_ang = 1.0, wrap_angle(float(np.angle(nodes[k - 1])))
    kk = np.array([k - 1])
    for start in range(0, grid, _CHUNK):
        ang = 2.0 * np.pi * np.arange(start, min(start + _CHUNK, grid)) / grid
        vals = _abs_flips_at_points(nodes, np.exp(1j * ang), np.broadcast_to(kk, ang.shape).copy(), log_w)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val, best_ang = float(vals[i]), float(ang[i])
    refined = refine_iters > 0
    if refined:
        h = 2.0 * np.pi / grid

        def fn(t):
            return _abs_flips_at_points(nodes, np.exp(1j * np.array([t])), kk, log_w)[0]

        val, ang = _golden_max(fn, best_ang - h, best_ang + h, refine_iters)
        if val > best_val:
            best_val, best_ang = float(val), float(ang)
    return SupNormEstimate(best_val, wrap_angle(best_ang), grid, refined)


def circle_flip_stats(
    points,
    coarse_grid: int | None = None,
    refine_iters: int = 40,
    per_node_refine: bool = False,
) -> tuple[np.ndarray, LebesgueReport]:
    """Per-node sup estimates and the Lebesgue constant from a shared scan.

    ``per_node_refine`` adds golden-section refinement around each node's
    winning grid cell; the Lebesgue maximum is always refined when
    ``refine_iters`` is positive.
    """
    nodes = _as_nodes(points)
    n_points = nodes.size
    log_w = _log_node_weights(nodes)
    grid = coarse_grid if coarse_grid else default_grid(n_points)
    node_max, node_arg, leb_max, leb_arg = _scan_circle(nodes, grid, log_w)
    h = 2.0 * np.pi / grid
    if per_node_refine and refine_iters > 0:
        ks = np.arange(n_points)

        def fn_vec(ts):
            return _abs_flips_at_points(nodes, np.exp(1j * ts), ks, log_w)

        refined = _golden_max_vec(fn_vec, node_arg - h, node_arg + h, refine_iters)
        node_max = np.maximum(node_max, refined)
    # value at the node itself is exactly 1
    node_max = np.maximum(node_max, 1.0)
    if refine_iters > 0:

        def leb_fn(t):
            return _lebesgue_at(nodes, complex(np.exp(1j * t)), log_w)

        val, ang = _golden_max(leb_fn, leb_arg - h, leb_arg + h, refine_iters)
        if val > leb_max:
            leb_max, leb_arg = float(val), float(ang)
    report = LebesgueReport(n_points, max(leb_max, 1.0), wrap_angle(leb_arg), node_max)
    return node_max, report


def lebesgue_constant(points, coarse_grid: int | None = None, refine_iters: int = 40) -> LebesgueReport:
    """Sup over the circle of sum_k |l_k(z)|, with per-node sups refined."""
    _, report = circle_flip_stats(points, coarse_grid, refine_iters, per_node_refine=True)
    return report


def special_n_statistics(p: int, coarse_grid: int | None = None, refine_iters: int = 40) -> SpecialNStats:
    """Sup-norm statistics of all FLIPs of the canonical section of length 2**p - 1.

    Raises :class:`BoundViolation` unless the sum exceeds 2**p - 1, and the
    maximum falls inside [4*cos(pi/8)/pi - 1e-6, 2 + 1e-6].
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    n_points = 2**p - 1
    section = canonical_disk_leja(n_points)
    sups, _ = circle_flip_stats(section, coarse_grid, refine_iters, per_node_refine=True)
    stats = SpecialNStats(
        sum_sup=float(np.sum(sups)),
        avg_sup=float(np.mean(sups)),
        max_sup=float(np.max(sups)),
        min_over_k=float(np.min(sups)),
    )
    if not stats.sum_sup > n_points:
        raise BoundViolation(f"sum of sups {stats.sum_sup} must exceed {n_points}")
    if stats.max_sup > 2.0 + 1e-6:
        raise BoundViolation(f"max sup {stats.max_sup} exceeds 2")
    if not stats.max_sup > 4.0 * math.cos(math.pi / 8.0) / math.pi - 1e-6:
        raise BoundViolation(f"max sup {stats.max_sup} below the 4cos(pi/8)/pi floor")
    return stats
