"""Bivariate Lagrange interpolation on intertwining arrays.

Nodes come from two univariate sequences (eta_k) and (theta_l) ordered by the
graded lexicographic rule on exponent pairs: (k1,l1) before (k2,l2) when
k1+l1 < k2+l2, or the sums tie and k1 > k2.  The first N nodes form the array
Omega_{n,m} with N_{n-1} < N <= N_n, N_n = (n+1)(n+2)/2, m = N - N_{n-1} - 1.
Each basis polynomial evaluates through one of seven closed forms selected by
the position of (p, q) relative to the diagonal p+q = n and the split q vs m;
a dense generalized Vandermonde determinant provides the independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import BoundViolation

__all__ = [
    "IntertwiningArray",
    "lex_to_pair",
    "pair_to_lex",
    "shape_of",
    "triangular_number",
    "build_array",
    "flip_case",
    "bivariate_flip",
    "interpolate",
    "bivariate_lebesgue",
    "vdm_matrix",
    "vdm_determinant",
    "flip_via_vdm_ratio",
    "vdm_extension_factor",
    "schiffer_siciak",
    "verify_2d_leja",
    "TwoDLejaReport",
    "jackson_decay_experiment",
    "DEFAULT_ORACLE_CAP",
]

#: Largest node count accepted by the determinant-ratio oracle by default.
DEFAULT_ORACLE_CAP = 21


def triangular_number(n: int) -> int:
    """Dimension of the total-degree-n polynomial space in two variables."""
    return (n + 1) * (n + 2) // 2 if n >= 0 else 0


def lex_to_pair(j: int) -> tuple[int, int]:
    """Exponent pair (k, l) of the j-th basis monomial, j >= 1."""
    if j < 1:
        raise ValueError("j must be positive")
    d = int((math.isqrt(8 * j - 7) - 1) // 2)
    while triangular_number(d) < j:
        d += 1
    while d > 0 and triangular_number(d - 1) >= j:
        d -= 1
    t = j - triangular_number(d - 1)
    return d - t + 1, t - 1


def pair_to_lex(k: int, l: int) -> int:
    """Position of the monomial z**k w**l in the graded ordering."""
    if k < 0 or l < 0:
        raise ValueError("exponents must be nonnegative")
    return triangular_number(k + l - 1) + l + 1


def shape_of(n_nodes: int) -> tuple[int, int]:
    """The unique (n, m) with N_{n-1} < N <= N_n and m = N - N_{n-1} - 1."""
    if n_nodes < 1:
        raise ValueError("node count must be positive")
    k, l = lex_to_pair(n_nodes)
    return k + l, l


@dataclass(frozen=True)
class IntertwiningArray:
    """First N nodes of the intertwining of two point sequences."""

    eta: np.ndarray
    theta: np.ndarray
    N: int
    n: int
    m: int
    nodes: np.ndarray  # shape (N, 2)

    def node(self, j: int) -> tuple[complex, complex]:
        """1-based access to H_j."""
        z, w = self.nodes[j - 1]
        return complex(z), complex(w)

    def pairs(self) -> list[tuple[int, int]]:
        """Source-index pairs (p, q) of the nodes, in order."""
        return [lex_to_pair(j) for j in range(1, self.N + 1)]

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "n": self.n,
            "m": self.m,
            "nodes": [
                {
                    "z": {"re": float(z.real), "im": float(z.imag)},
                    "w": {"re": float(w.real), "im": float(w.imag)},
                }
                for z, w in self.nodes
            ],
        }


def build_array(eta, theta, n_nodes: int) -> IntertwiningArray:
    """Assemble Omega_N from the leading entries of the two source sequences."""
    eta = np.asarray(eta, dtype=complex)
    theta = np.asarray(theta, dtype=complex)
    n, m = shape_of(n_nodes)
    for name, src in (("eta", eta), ("theta", theta)):
        if src.ndim != 1 or src.size < n + 1:
            raise ValueError(f"{name} needs at least {n + 1} entries for N={n_nodes}")
        if np.unique(src[: n + 1]).size != n + 1:
            raise ValueError(f"{name} entries must be pairwise distinct")
    nodes = np.array([(eta[k], theta[l]) for k, l in (lex_to_pair(j) for j in range(1, n_nodes + 1))])
    return IntertwiningArray(eta, theta, n_nodes, n, m, nodes)


def _require_member(arr: IntertwiningArray, p: int, q: int) -> None:
    if p < 0 or q < 0 or not (p + q < arr.n or (p + q == arr.n and q <= arr.m)):
        raise ValueError(f"(eta_{p}, theta_{q}) is not a node of Omega_{arr.N}")


def flip_case(arr: IntertwiningArray, p: int, q: int) -> str:
    """Which of the seven closed forms evaluates the FLIP at (eta_p, theta_q)."""
    _require_member(arr, p, q)
    n, m = arr.n, arr.m
    if p + q == n or (p + q == n - 1 and q >= m + 1):
        return "top"
    if p + q == n - 1 and q == m:
        return "edge-qm"
    if p + q == n - 1:
        return "edge-qlt"
    if q <= m - 1 and p <= n - m - 1:
        return "low-left"
    if q <= m - 1:
        return "low-right"
    if q == m:
        return "low-qm"
    return "low-qgt"


def _flip_terms(n: int, m: int, p: int, q: int) -> list[tuple[int, int, int]]:
    """Signed product terms (sign, z_ub, w_ub) of the FLIP at (eta_p, theta_q).

    Each term means sign * prod_{j<=z_ub, j!=p} (z-eta_j)/(eta_p-eta_j)
                         * prod_{i<=w_ub, i!=q} (w-theta_i)/(theta_q-theta_i),
    with an upper bound of -1 standing for the empty product.
    """
    if p + q == n or (p + q == n - 1 and q >= m + 1):
        return [(1, p - 1, q - 1)]
    if p + q == n - 1 and q == m:
        return [(1, n - m, m - 1)]
    if p + q == n - 1 and q <= m - 1:
        return [(1, p + 1, q - 1), (-1, p - 1, q - 1), (1, p - 1, q + 1)]
    if q <= m - 1 and p <= n - m - 1:
        terms = [(1, n - q, q - 1), (-1, n - q - 1, q - 1), (1, n - q - 1, q + 1)]
        for r in range(1, m - q):
            terms += [(1, n - q - r - 1, q + r + 1), (-1, n - q - r - 1, q + r)]
        for r in range(m - q, n - p - q - 1):
            terms += [(1, n - q - r - 2, q + r + 1), (-1, n - q - r - 2, q + r)]
        return terms
    if q <= m - 1:
        terms = [(1, n - q, q - 1), (-1, n - q - 1, q - 1), (1, n - q - 1, q + 1)]
        for r in range(1, n - p - q):
            terms += [(1, n - q - r - 1, q + r + 1), (-1, n - q - r - 1, q + r)]
        return terms
    if q == m:
        terms = [(1, n - m, m - 1), (-1, n - m - 2, m - 1), (1, n - m - 2, m + 1)]
        for r in range(1, n - m - p - 1):
            terms += [(1, n - m - r - 2, m + r + 1), (-1, n - m - r - 2, m + r)]
        return terms
    terms = [(1, n - q - 1, q - 1), (-1, n - q - 2, q - 1), (1, n - q - 2, q + 1)]
    for r in range(1, n - p - q - 1):
        terms += [(1, n - q - r - 2, q + r + 1), (-1, n - q - r - 2, q + r)]
    return terms


def _ratio_prefix_table(points: np.ndarray, skip: int, ubs: Sequence[int], x: np.ndarray) -> dict[int, np.ndarray]:
    """Vectors prod_{j<=ub, j!=skip} (x - pts[j]) / (pts[skip] - pts[j]) for each ub."""
    table: dict[int, np.ndarray] = {}
    cur = np.ones_like(x)
    j = 0
    for ub in sorted(set(ubs)):
        if ub < 0:
            table[ub] = cur.copy()
            continue
        while j <= ub:
            if j != skip:
                cur = cur * (x - points[j]) / (points[skip] - points[j])
            j += 1
        table[ub] = cur
    return table


def _flip_on_axes(arr: IntertwiningArray, p: int, q: int, zs: np.ndarray, ws: np.ndarray) -> np.ndarray:
    """FLIP values on the tensor grid zs x ws, shape (len(zs), len(ws))."""
    terms = _flip_terms(arr.n, arr.m, p, q)
    ztab = _ratio_prefix_table(arr.eta, p, [t[1] for t in terms], zs)
    wtab = _ratio_prefix_table(arr.theta, q, [t[2] for t in terms], ws)
    acc = np.zeros((zs.size, ws.size), dtype=complex)
    for sign, z_ub, w_ub in terms:
        acc += sign * np.outer(ztab[z_ub], wtab[w_ub])
    return acc


def bivariate_flip(arr: IntertwiningArray, p: int, q: int, z: complex, w: complex) -> complex:
    """FLIP of Omega_N at source indices (p, q), evaluated at (z, w).

    Equals 1 at (eta_p, theta_q) and 0 at every other node; the selected
    closed form is reported by :func:`flip_case`.
    """
    _require_member(arr, p, q)
    val = _flip_on_axes(arr, p, q, np.array([z], dtype=complex), np.array([w], dtype=complex))
    return complex(val[0, 0])


def interpolate(arr: IntertwiningArray, f: Callable[[complex, complex], complex], z: complex, w: complex) -> complex:
    """Lagrange interpolant sum_p f(H_p) l_{H_p}(z, w)."""
    total = 0.0 + 0.0j
    for j, (p, q) in enumerate(arr.pairs(), start=1):
        zv, wv = arr.node(j)
        total += complex(f(zv, wv)) * bivariate_flip(arr, p, q, z, w)
    return total


def _interp_grid(arr: IntertwiningArray, values: np.ndarray, zs: np.ndarray, ws: np.ndarray) -> np.ndarray:
    acc = np.zeros((zs.size, ws.size), dtype=complex)
    for j, (p, q) in enumerate(arr.pairs()):
        acc += values[j] * _flip_on_axes(arr, p, q, zs, ws)
    return acc


def bivariate_lebesgue(arr: IntertwiningArray, grid: int) -> float:
    """Max over the torus grid of sum_p |l_{H_p}(z, w)| (grid angles per axis)."""
    if grid < 2:
        raise ValueError("grid must be at least 2")
    axis = np.exp(2j * np.pi * np.arange(grid) / grid)
    total = np.zeros((grid, grid))
    for p, q in arr.pairs():
        total += np.abs(_flip_on_axes(arr, p, q, axis, axis))
    return float(total.max())


# ---------------------------------------------------------------------------
# Vandermonde oracle


def vdm_matrix(points: Sequence[tuple[complex, complex]]) -> np.ndarray:
    """Generalized Vandermonde matrix [e_i(H_j)] in the graded monomial order."""
    pts = np.asarray(points, dtype=complex)
    n_pts = pts.shape[0]
    mat = np.empty((n_pts, n_pts), dtype=complex)
    for i in range(1, n_pts + 1):
        k, l = lex_to_pair(i)
        mat[i - 1] = pts[:, 0] ** k * pts[:, 1] ** l
    return mat


def vdm_determinant(points: Sequence[tuple[complex, complex]]) -> complex:
    """Determinant of the generalized Vandermonde matrix (LU with partial pivoting)."""
    return complex(np.linalg.det(vdm_matrix(points)))


def flip_via_vdm_ratio(
    arr: IntertwiningArray, p: int, z: complex, w: complex, oracle_cap: int = DEFAULT_ORACLE_CAP
) -> complex:
    """FLIP value as a ratio of two dense determinants (test oracle; p is 1-based)."""
    if arr.N > oracle_cap:
        raise ValueError(f"oracle capped at N={oracle_cap}, got N={arr.N}")
    if not 1 <= p <= arr.N:
        raise ValueError(f"p must be in 1..{arr.N}")
    sign_d, log_d = np.linalg.slogdet(vdm_matrix(arr.nodes))
    if not np.isfinite(log_d) or log_d < math.log(1e-250):
        raise ArithmeticError("denominator determinant is numerically degenerate")
    shifted = arr.nodes.copy()
    shifted[p - 1] = (z, w)
    sign_n, log_n = np.linalg.slogdet(vdm_matrix(shifted))
    if not np.isfinite(log_n):
        return 0.0 + 0.0j
    return complex(sign_n / sign_d * np.exp(log_n - log_d))


def vdm_extension_factor(arr: IntertwiningArray, z: complex, w: complex) -> complex:
    """Predicted ratio VDM(H_1..H_N, (z,w)) / VDM(H_1..H_N).

    Full triangular arrays (m = n) give prod_{j<=n} (z - eta_j); otherwise
    prod_{j<=n-m-2} (z - eta_j) * prod_{i<=m} (w - theta_i), the z part being
    empty when m = n - 1.
    """
    n, m = arr.n, arr.m
    if m == n:
        return complex(np.prod(z - arr.eta[: n + 1]))
    zpart = complex(np.prod(z - arr.eta[: n - m - 1])) if n - m - 2 >= 0 else 1.0 + 0.0j
    wpart = complex(np.prod(w - arr.theta[: m + 1]))
    return zpart * wpart


def _vdm_1d(points: np.ndarray) -> complex:
    val = 1.0 + 0.0j
    for b in range(points.size):
        for a in range(b):
            val *= points[b] - points[a]
    return complex(val)


def schiffer_siciak(eta, theta, n: int) -> complex:
    """prod_{j=1..n} VDM(eta_0..eta_j) * VDM(theta_0..theta_j).

    Equals the generalized Vandermonde determinant of the full triangular
    array Omega_{N_n}.
    """
    eta = np.asarray(eta, dtype=complex)
    theta = np.asarray(theta, dtype=complex)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if eta.size < n + 1 or theta.size < n + 1:
        raise ValueError(f"need n+1 = {n + 1} source points")
    val = 1.0 + 0.0j
    for j in range(1, n + 1):
        val *= _vdm_1d(eta[: j + 1]) * _vdm_1d(theta[: j + 1])
    return val


# ---------------------------------------------------------------------------
# sequence-level experiments


@dataclass(frozen=True)
class TwoDLejaReport:
    max_shortfall: float
    worst_size: int
    checked: int

    def passed(self, rel_tol: float) -> bool:
        return self.max_shortfall <= rel_tol


def verify_2d_leja(eta, theta, n_max: int, grid: int = 512) -> TwoDLejaReport:
    """Check the greedy optimality of each intertwining node H_{N+1}, N < n_max.

    The extension determinant factors into one-dimensional distance products,
    so the sup over the product compact splits into two circle-grid maxima;
    the value at H_{N+1} is compared against their product.
    """
    eta = np.asarray(eta, dtype=complex)
    theta = np.asarray(theta, dtype=complex)
    need = shape_of(n_max)[0] + 2
    if eta.size < need or theta.size < need:
        raise ValueError(f"need at least {need} source points per sequence")
    circle = np.exp(2j * np.pi * np.arange(grid) / grid)
    worst, worst_n = 0.0, 0
    for n_nodes in range(1, n_max):
        n, m = shape_of(n_nodes)
        nk, nl = lex_to_pair(n_nodes + 1)
        next_z, next_w = eta[nk], theta[nl]
        if m == n:
            val = float(np.prod(np.abs(next_z - eta[: n + 1])))
            gmax = float(np.max(np.prod(np.abs(circle[:, None] - eta[None, : n + 1]), axis=1)))
        else:
            z_cnt = n - m - 1
            vz = float(np.prod(np.abs(next_z - eta[:z_cnt]))) if z_cnt > 0 else 1.0
            gz = (
                float(np.max(np.prod(np.abs(circle[:, None] - eta[None, :z_cnt]), axis=1)))
                if z_cnt > 0
                else 1.0
            )
            vw = float(np.prod(np.abs(next_w - theta[: m + 1])))
            gw = float(np.max(np.prod(np.abs(circle[:, None] - theta[None, : m + 1]), axis=1)))
            val, gmax = vz * vw, gz * gw
        if gmax > val:
            short = 1.0 - val / gmax
            if short > worst:
                worst, worst_n = short, n_nodes
    return TwoDLejaReport(worst, worst_n, n_max - 1)


def jackson_decay_experiment(
    f: Callable[[complex, complex], complex],
    n_max: int,
    grid: int = 48,
    sources: tuple[np.ndarray, np.ndarray] | None = None,
    require_decay: bool = False,
) -> list[tuple[int, int, float]]:
    """Interpolation error of f on full triangular arrays, n = 2..n_max.

    Returns rows (n, N_n, torus-grid sup error).  With ``require_decay`` the
    rows must decrease strictly, which holds for entire functions such as
    exp(z + w); the decay rate itself is not asserted.
    """
    from .disk import canonical_disk_leja

    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    rows: list[tuple[int, int, float]] = []
    axis = np.exp(2j * np.pi * np.arange(grid) / grid)
    zg, wg = np.meshgrid(axis, axis, indexing="ij")
    target = np.array([[complex(f(z, w)) for w in axis] for z in axis])
    for n in range(2, n_max + 1):
        if sources is None:
            eta = canonical_disk_leja(n + 1).points
            theta = eta
        else:
            eta, theta = sources
        arr = build_array(eta, theta, triangular_number(n))
        values = np.array([complex(f(*arr.node(j))) for j in range(1, arr.N + 1)])
        approx = _interp_grid(arr, values, axis, axis)
        err = float(np.max(np.abs(approx - target)))
        rows.append((n, arr.N, err))
    if require_decay:
        for (n0, _, e0), (n1, _, e1) in zip(rows, rows[1:]):
            if not e1 < e0:
                raise BoundViolation(f"sup error did not decrease from n={n0} ({e0}) to n={n1} ({e1})")
    return rows
