"""Leja sections for the unit disk and for sampled planar compacts.

The canonical construction places point k at ``origin * exp(i*pi*f(k-1))``
where ``f`` maps the binary digits of k-1 to a dyadic fraction, so every
prefix of length 2**s is a complete set of 2**s-th roots of unity (up to the
common rotation by ``origin``).  Greedy sections on arbitrary boundaries
maximize the distance product over a fixed sample set instead.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import binary_decompose

UNIT_TOL = 1e-12

UNIT_DISK = "unit_disk"
SAMPLED_COMPACT = "sampled_compact"


@dataclass(frozen=True)
class LejaSection:
    """Ordered node list; immutable after construction."""

    points: np.ndarray
    compact_tag: str = UNIT_DISK
    origin: complex = 1.0 + 0.0j

    def __post_init__(self):
        pts = np.array(self.points, dtype=complex)  # own copy; callers keep theirs writable
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("a section needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("section points must be finite")
        if self.compact_tag == UNIT_DISK:
            if np.max(np.abs(np.abs(pts) - 1.0)) > UNIT_TOL:
                raise ValueError("unit-disk section points must have modulus 1")
        if np.unique(pts).size != pts.size:
            raise ValueError("section points must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "origin", complex(pts[0]))

    def __len__(self) -> int:
        return self.points.size

    @property
    def n(self) -> int:
        return self.points.size

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "points": [{"re": float(z.real), "im": float(z.imag)} for z in self.points],
            "compact_tag": self.compact_tag,
        }

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "re", "im"])
            for i, z in enumerate(self.points, start=1):
                w.writerow([i, repr(float(z.real)), repr(float(z.imag))])


def section_from_json(data: dict | str | Path) -> LejaSection:
    if not isinstance(data, dict):
        data = json.loads(Path(data).read_text())
    pts = np.array([complex(p["re"], p["im"]) for p in data["points"]])
    return LejaSection(pts, compact_tag=data.get("compact_tag", UNIT_DISK))


@dataclass(frozen=True)
class SectionSplit:
    """Leading roots-of-unity block, its successor point, and the rescaled tail."""

    roots_block: np.ndarray
    rho1: complex
    remainder: LejaSection

    def __post_init__(self):
        if abs(self.rho1 ** self.roots_block.size + 1.0) > 1e-10:
            raise ValueError("first tail point is not a root of -1 of the block order")


@dataclass(frozen=True)
class BoundarySamples:
    """Discretization of a compact's boundary used for sup/argmax scans."""

    samples: np.ndarray
    description: str = ""

    def __post_init__(self):
        pts = np.array(self.samples, dtype=complex)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("boundary needs at least one sample")
        if np.unique(pts).size != pts.size:
            raise ValueError("boundary samples must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "samples", pts)

    def __len__(self) -> int:
        return self.samples.size


def circle_samples(count: int) -> BoundarySamples:
    """``count`` equispaced points on the unit circle, starting at 1."""
    if count < 1:
        raise ValueError("count must be positive")
    ang = 2.0 * np.pi * np.arange(count) / count
    return BoundarySamples(np.exp(1j * ang), f"{count} uniform unit-circle samples")


@dataclass(frozen=True)
class LejaValidation:
    """Worst relative shortfall of the greedy maximality property."""

    max_violation: float
    worst_k: int
    rel_tol: float

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.rel_tol


def canonical_disk_leja(n_points: int, origin: complex = 1.0 + 0.0j) -> LejaSection:
    """Explicit disk Leja section of length ``n_points`` starting at ``origin``.

    Point k sits at angle pi * sum_l j_l 2**(-l) relative to ``origin``, where
    the j_l are the binary digits of k-1.  Every prefix of length 2**s is a
    complete (rotated) set of 2**s-th roots of unity.
    """
    if n_points < 1:
        raise ValueError("n_points must be positive")
    origin = complex(origin)
    if abs(abs(origin) - 1.0) > UNIT_TOL:
        raise ValueError("origin must lie on the unit circle")
    k = np.arange(n_points, dtype=np.int64)
    frac = np.zeros(n_points)
    for bit in range(max(1, int(n_points - 1).bit_length())):
        frac += ((k >> bit) & 1) * 2.0 ** (-bit)
    return LejaSection(origin * np.exp(1j * np.pi * frac), compact_tag=UNIT_DISK)


def greedy_leja(boundary: BoundarySamples, n_points: int, seed_index: int = 0) -> LejaSection:
    """Greedy section over a boundary sample set.

    Each new point maximizes the product of distances to the previous points,
    restricted to the samples; ties break toward the lowest sample index.
    """
    samples = boundary.samples
    if n_points < 1:
        raise ValueError("n_points must be positive")
    if n_points > samples.size:
        raise ValueError("n_points exceeds the number of boundary samples")
    if not 0 <= seed_index < samples.size:
        raise ValueError("seed_index out of range")
    chosen = np.empty(n_points, dtype=np.int64)
    chosen[0] = seed_index
    # running log of prod_{j<k} |s - eta_j|; chosen samples drop to -inf
    with np.errstate(divide="ignore"):
        logp = np.log(np.abs(samples - samples[seed_index]))
        for k in range(1, n_points):
            idx = int(np.argmax(logp))
            chosen[k] = idx
            logp = logp + np.log(np.abs(samples - samples[idx]))
    on_circle = np.max(np.abs(np.abs(samples[chosen]) - 1.0)) <= UNIT_TOL
    tag = UNIT_DISK if on_circle else SAMPLED_COMPACT
    return LejaSection(samples[chosen], compact_tag=tag)


def validate_leja(section: LejaSection, boundary: BoundarySamples, rel_tol: float) -> LejaValidation:
    """Compare each node's distance product against the sampled boundary maximum.

    For every k >= 2 the section value prod_{j<k} |eta_k - eta_j| is measured
    against max over samples of prod_{j<k} |z - eta_j|; the report carries the
    largest relative shortfall and the k where it occurs.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    pts = section.points
    samples = boundary.samples
    worst, worst_k = 0.0, 0
    logp = np.zeros(samples.size)
    with np.errstate(divide="ignore"):
        for k in range(2, pts.size + 1):
            logp = logp + np.log(np.abs(samples - pts[k - 2]))
            own = float(np.sum(np.log(np.abs(pts[k - 1] - pts[: k - 1]))))
            best = float(np.max(logp))
            if best > own:
                shortfall = 1.0 - float(np.exp(own - best))
                if shortfall > worst:
                    worst, worst_k = shortfall, k
    return LejaValidation(worst, worst_k, rel_tol)


def split_section(section: LejaSection) -> SectionSplit:
    """Peel off the leading power-of-two block.

    Requires the length not to be a pure power of two.  The first tail point
    ``rho1`` satisfies rho1**(2**p1) = -1 and rescales the tail back to a
    section starting at 1.
    """
    pts = section.points
    n_points = pts.size
    p1 = binary_decompose(n_points)[0]
    block = 1 << p1
    if n_points == block:
        raise ValueError("section length is a power of two; nothing to split")
    rho1 = complex(pts[block])
    remainder = LejaSection(pts[block:] / rho1, compact_tag=section.compact_tag)
    return SectionSplit(pts[:block].copy(), rho1, remainder)


def omega0_of_section(section: LejaSection) -> complex:
    """Root of -1 of order 2**p1 attached to the section's block structure.

    Computed as the product of the observed leading point of each recursive
    tail block; the final block is a complete set of roots of unity, so its
    factor is fixed to exp(i*pi/2**p_n), which leaves every derived quantity
    (the powers used in structured evaluation and the admissible successor
    set) unchanged.
    """
    pts = section.points
    exps = binary_decompose(pts.size)
    if len(exps) < 2:
        raise ValueError("section length is a power of two; omega0 is undefined")
    omega = 1.0 + 0.0j
    cur = pts
    for p in exps[:-1]:
        block = 1 << p
        rho = complex(cur[block])
        omega *= rho
        cur = cur[block:] / rho
    omega *= complex(np.exp(1j * np.pi / (1 << exps[-1])))
    return omega
