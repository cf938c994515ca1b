import numpy as np
import pytest
from scipy.special import ellipk

from lejaflip import (
    boundary_samples,
    canonical_disk_leja,
    chord_ratio,
    circle_flip_stats,
    compact_flip_stats,
    ellipse_exterior_map,
    estimate_alper_constant,
    flip_sup_on_compact,
    greedy_leja,
    lebesgue_constant,
    lebesgue_on_compact,
    sup_norm_on_circle,
    transport_sequence,
)


def alper_closed_form(a, b):
    """Independent quadrature oracle for the ellipse kernel integral.

    For Phi(z) = c1 z + c2/z the integrand collapses to c2 / |c1 e^it - c2|
    (independent of w), whose integral is a complete elliptic integral.
    """
    c1, c2 = (a + b) / 2, (a - b) / 2
    if c2 == 0:
        return 0.0
    m = 4 * c1 * c2 / (c1 + c2) ** 2
    return float(4 * c2 / (c1 + c2) * ellipk(m))


class TestEllipseMap:
    def test_identity_case(self):
        mp = ellipse_exterior_map(1.0, 1.0)
        assert mp(1j) == pytest.approx(1j, abs=1e-15)

    def test_axis_images(self):
        mp = ellipse_exterior_map(1.2, 0.8)
        assert mp(1.0) == pytest.approx(1.2, abs=1e-15)
        assert mp(1j) == pytest.approx(0.8j, abs=1e-15)

    def test_boundary_parametrization(self):
        mp = ellipse_exterior_map(2.0, 1.0)
        t = 2 * np.pi * np.arange(256) / 256
        img = mp(np.exp(1j * t))
        assert np.max(np.abs((img.real / 2.0) ** 2 + img.imag**2 - 1.0)) <= 1e-12

    def test_rejects_bad_axes(self):
        with pytest.raises(ValueError):
            ellipse_exterior_map(0.8, 1.2)
        with pytest.raises(ValueError):
            ellipse_exterior_map(1.0, 0.0)

    def test_json(self):
        assert ellipse_exterior_map(1.2, 0.8).to_json() == {"kind": "ellipse", "a": 1.2, "b": 0.8}


class TestTransport:
    def test_identity_images(self):
        mp = ellipse_exterior_map(1.0, 1.0)
        section = canonical_disk_leja(8)
        ts = transport_sequence(mp, section)
        assert np.allclose(ts.images, section.points, atol=1e-15)

    def test_canonical_four(self):
        mp = ellipse_exterior_map(1.2, 0.8)
        ts = transport_sequence(mp, canonical_disk_leja(4))
        assert np.allclose(ts.images, [1.2, -1.2, 0.8j, -0.8j], atol=1e-14)

    def test_single_point(self):
        mp = ellipse_exterior_map(1.5, 1.0)
        ts = transport_sequence(mp, canonical_disk_leja(1))
        assert ts.images.shape == (1,)

    def test_json_carries_map(self):
        ts = transport_sequence(ellipse_exterior_map(1.2, 0.8), canonical_disk_leja(2))
        data = ts.to_json()
        assert data["map"]["a"] == 1.2 and len(data["points"]) == 2


class TestDistortion:
    def test_chord_ratio_window(self):
        # the measured constants for this family are the semi-axes themselves
        a, b = 1.2, 0.8
        mp = ellipse_exterior_map(a, b)
        rng = np.random.default_rng(0)
        z = np.exp(2j * np.pi * rng.random(10_000))
        w = np.exp(2j * np.pi * rng.random(10_000))
        keep = np.abs(z - w) > 1e-12
        ratios = chord_ratio(mp, z[keep], w[keep])
        assert ratios.min() >= b * (1 - 1e-9)
        assert ratios.max() <= a * (1 + 1e-9)


class TestSupOnCompact:
    def test_identity_matches_circle(self):
        section = canonical_disk_leja(12)
        ts = transport_sequence(ellipse_exterior_map(1.0, 1.0), section)
        for p in (1, 5, 12):
            compact = flip_sup_on_compact(ts, p)
            circle = sup_norm_on_circle(section, p)
            assert compact.value == pytest.approx(circle.value, abs=1e-9)

    def test_identity_roots_of_unity(self):
        ts = transport_sequence(ellipse_exterior_map(1.0, 1.0), canonical_disk_leja(16))
        for p in (1, 9):
            assert flip_sup_on_compact(ts, p).value == pytest.approx(1.0, abs=1e-9)

    def test_own_node_floor(self):
        ts = transport_sequence(ellipse_exterior_map(1.3, 0.7), canonical_disk_leja(9))
        for p in (1, 4, 9):
            assert flip_sup_on_compact(ts, p).value >= 1.0

    def test_growth_slope_below_one(self):
        mp = ellipse_exterior_map(1.2, 0.8)
        sizes = [4, 8, 16, 32, 64, 128]
        worst = []
        for n in sizes:
            ts = transport_sequence(mp, canonical_disk_leja(n))
            sups, _ = compact_flip_stats(ts, refine_iters=0)
            assert np.all(np.isfinite(sups))
            worst.append(sups.max())
        slope = np.polyfit(np.log(sizes), np.log(worst), 1)[0]
        assert slope < 1.0


class TestLebesgueOnCompact:
    def test_identity_matches_circle(self):
        section = canonical_disk_leja(9)
        ts = transport_sequence(ellipse_exterior_map(1.0, 1.0), section)
        compact = lebesgue_on_compact(ts)
        circle = lebesgue_constant(section)
        assert compact.constant == pytest.approx(circle.constant, abs=1e-9)

    def test_single_node(self):
        ts = transport_sequence(ellipse_exterior_map(1.2, 0.8), canonical_disk_leja(1))
        assert lebesgue_on_compact(ts).constant == 1.0

    def test_increasing_in_n(self):
        mp = ellipse_exterior_map(1.2, 0.8)
        values = []
        for p in (3, 4, 5, 6):
            ts = transport_sequence(mp, canonical_disk_leja(2**p - 1))
            values.append(lebesgue_on_compact(ts, refine_iters=10).constant)
        assert np.all(np.isfinite(values))
        assert all(v1 > v0 for v0, v1 in zip(values, values[1:]))


class TestAlperConstant:
    def test_circle_is_zero(self):
        assert estimate_alper_constant(ellipse_exterior_map(1.0, 1.0), 256, 256) <= 1e-6

    def test_matches_quadrature_oracle(self):
        a, b = 1.2, 0.8
        est = estimate_alper_constant(ellipse_exterior_map(a, b), 256, 512)
        assert est == pytest.approx(alper_closed_form(a, b), abs=1e-5)

    def test_grid_doubling_stability(self):
        mp = ellipse_exterior_map(1.2, 0.8)
        coarse = estimate_alper_constant(mp, 256, 256)
        fine = estimate_alper_constant(mp, 512, 512)
        assert abs(fine - coarse) <= 1e-3

    def test_monotone_in_eccentricity(self):
        mild = estimate_alper_constant(ellipse_exterior_map(1.2, 0.8), 256, 256)
        strong = estimate_alper_constant(ellipse_exterior_map(2.0, 1.0), 256, 256)
        assert 0.0 < mild < strong

    def test_rejects_tiny_grids(self):
        with pytest.raises(ValueError):
            estimate_alper_constant(ellipse_exterior_map(1.2, 0.8), 128, 512)


class TestRatioEnvelope:
    def test_transport_ratio_bounded_by_product_envelope(self):
        # transported/source FLIP ratio at matched parameters stays below
        # (a/b) * (sup/inf over the grid of the full chord-product ratio)
        mp = ellipse_exterior_map(1.2, 0.8)
        base_grid = np.exp(2j * np.pi * (np.arange(700) + 0.5) / 700)
        for n in (3, 7, 16, 33, 64, 128):
            section = canonical_disk_leja(n)
            src = section.points
            img = np.asarray(mp(src))
            # drop samples that (nearly) coincide with a node; the chord
            # quotient has a removable singularity there
            grid = base_grid[np.min(np.abs(base_grid[:, None] - src[None, :]), axis=1) > 1e-9]
            prod_ratio = np.prod(np.abs((mp(grid)[:, None] - img[None, :]) / (grid[:, None] - src[None, :])), axis=1)
            envelope = prod_ratio.max() / prod_ratio.min()
            worst = 0.0
            for p in (1, max(1, n // 2), n):
                num = np.prod(np.abs(mp(grid)[:, None] - np.delete(img, p - 1)[None, :]), axis=1)
                den = np.prod(np.abs(grid[:, None] - np.delete(src, p - 1)[None, :]), axis=1)
                src_w = np.prod(np.abs(src[p - 1] - np.delete(src, p - 1)))
                img_w = np.prod(np.abs(img[p - 1] - np.delete(img, p - 1)))
                ratio = (num / img_w) / (den / src_w)
                worst = max(worst, float(ratio.max()))
            assert np.isfinite(worst)
            assert worst <= (1.2 / 0.8) * envelope * (1 + 1e-9)


class TestGreedyOnEllipse:
    def test_single_seed_point(self):
        boundary = boundary_samples(ellipse_exterior_map(1.2, 0.8), 512)
        section = greedy_leja(boundary, 1, seed_index=0)
        assert section.points[0] == boundary.samples[0]

    def test_greedy_section_on_ellipse_boundary(self):
        mp = ellipse_exterior_map(1.2, 0.8)
        boundary = boundary_samples(mp, 4096)
        section = greedy_leja(boundary, 32)
        from lejaflip import validate_leja

        assert validate_leja(section, boundary, 10.0 / 4096).passed
        # images live on the ellipse
        pts = section.points
        assert np.max(np.abs((pts.real / 1.2) ** 2 + (pts.imag / 0.8) ** 2 - 1)) <= 1e-10
