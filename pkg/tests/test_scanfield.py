import numpy as np
import pytest

from searchtrack import _scanfield_py
from searchtrack.scanfield import (
    ScanField,
    beam_sigma,
    diffusion_rate,
    peak_field_value,
    scan_pdf,
)

BEAM_9_DEG = np.deg2rad(9.0)


def make_field(capacity=8, rate=0.0, sigma=None, **kw):
    return ScanField(capacity, sigma or beam_sigma(BEAM_9_DEG), rate, **kw)


class TestBeamSigma:
    def test_nine_degree_beam(self):
        assert beam_sigma(BEAM_9_DEG) == pytest.approx(0.040072, abs=1e-6)

    def test_unit_output(self):
        assert beam_sigma(3.92) == pytest.approx(1.0)

    def test_one_degree(self):
        assert beam_sigma(np.deg2rad(1.0)) == pytest.approx(0.004453, abs=1e-6)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            beam_sigma(0.0)


class TestDiffusionRate:
    def test_no_decay(self):
        assert diffusion_rate(1.0, 100) == 0.0

    def test_half_after_100(self):
        assert diffusion_rate(0.5, 100) == pytest.approx(2.0 ** (1 / 200) - 1, rel=1e-12)
        assert diffusion_rate(0.5, 100) == pytest.approx(3.4717e-3, abs=1e-7)

    def test_hundredth_after_600(self):
        assert diffusion_rate(0.01, 600) == pytest.approx(100.0 ** (1 / 1200) - 1, rel=1e-12)
        assert diffusion_rate(0.01, 600) == pytest.approx(3.845e-3, abs=1e-6)

    def test_round_trip(self):
        for ratio, horizon in [(0.5, 100), (0.01, 600), (0.9, 10)]:
            rate = diffusion_rate(ratio, horizon)
            assert (1 + rate) ** (-2 * horizon) == pytest.approx(ratio, rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            diffusion_rate(0.0, 10)
        with pytest.raises(ValueError):
            diffusion_rate(1.5, 10)


class TestScanPdf:
    def test_unit_peak(self):
        assert scan_pdf((0, 0), (0, 0), 1.0) == pytest.approx(1 / (2 * np.pi))

    def test_one_sigma_offset(self):
        peak = scan_pdf((0, 0), (0, 0), 1.0)
        assert scan_pdf((1, 0), (0, 0), 1.0) == pytest.approx(peak * np.exp(-0.5))

    def test_beam_sigma_peak(self):
        sigma = 0.040072
        assert scan_pdf((0, 0), (0, 0), sigma) == pytest.approx(
            1 / (2 * np.pi * sigma**2), rel=1e-12
        )
        assert scan_pdf((0, 0), (0, 0), sigma) == pytest.approx(99.11, abs=0.01)


class TestPeakFieldValue:
    def test_single_term(self):
        assert peak_field_value(0, 1.0, 0.1) == pytest.approx(1 / (2 * np.pi))

    def test_five_equal_terms(self):
        assert peak_field_value(4, 1.0, 0.0) == pytest.approx(5 / (2 * np.pi), rel=1e-12)

    def test_term_by_term_oracle(self):
        sigma, rate = 0.040072, 0.01
        expected = sum(
            1.0 / (2 * np.pi * sigma**2 * (1 + rate) ** (2 * t)) for t in range(5)
        )
        assert peak_field_value(4, sigma, rate) == pytest.approx(expected, rel=1e-12)
        # The decayed peaks shrink the sum below five undecayed ones.
        assert peak_field_value(4, sigma, rate) < 5 / (2 * np.pi * sigma**2)

    def test_monotone_in_window(self):
        values = [peak_field_value(t, 0.05, 0.01) for t in range(10)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestFifo:
    def test_push_grows_to_capacity(self):
        f = make_field(capacity=3)
        f.push((0, 0), 0)
        assert len(f) == 1
        for t in range(1, 5):
            f.push((0.01 * t, 0), t)
        assert len(f) == 3
        # Oldest two were evicted.
        assert [r.step for r in f.records] == [2, 3, 4]

    def test_records_keep_insertion_steps(self):
        f = make_field(capacity=5)
        for t in (0, 1, 2):
            f.push((0.1 * t, -0.1 * t), t)
        assert [r.step for r in f.records] == [0, 1, 2]

    def test_non_monotone_step_rejected(self):
        f = make_field()
        f.push((0, 0), 5)
        with pytest.raises(ValueError):
            f.push((0, 0), 4)

    def test_equal_steps_allowed(self):
        f = make_field()
        f.push((0, 0), 3)
        f.push((0.1, 0), 3)
        assert len(f) == 2


class TestFieldValue:
    def test_empty_history_zero(self):
        f = make_field()
        assert f.value((0.2, -0.1), 7) == 0.0
        assert f.normalized((0.2, -0.1), 7) == 0.0

    def test_undiffused_peak(self):
        f = make_field(rate=0.01)
        f.push((0.1, 0.2), 4)
        assert f.value((0.1, 0.2), 4) == pytest.approx(
            1 / (2 * np.pi * f.sigma**2), rel=1e-12
        )

    def test_additive_over_records(self):
        f = make_field()
        f.push((0.0, 0.0), 0)
        f.push((0.0, 0.0), 0)
        single = 1 / (2 * np.pi * f.sigma**2)
        assert f.value((0, 0), 0) == pytest.approx(2 * single, rel=1e-12)

    def test_union_equals_sum_of_parts(self):
        rate = diffusion_rate(0.5, 50)
        scans = [((0.1, -0.2), 0), ((-0.3, 0.4), 1), ((0.0, 0.0), 3), ((0.2, 0.2), 4)]
        whole = make_field(rate=rate)
        part_a = make_field(rate=rate)
        part_b = make_field(rate=rate)
        for i, (mu, t) in enumerate(scans):
            whole.push(mu, t)
            (part_a if i % 2 == 0 else part_b).push(mu, t)
        for point in [(0, 0), (0.1, -0.2), (-0.5, 0.5)]:
            assert whole.value(point, 6) == pytest.approx(
                part_a.value(point, 6) + part_b.value(point, 6), rel=1e-12
            )

    def test_peak_decay_identity(self):
        # One scan evaluated at its center decays by exactly (1+rate)^(-2 dt).
        rate = diffusion_rate(0.01, 600)
        f = make_field(rate=rate)
        f.push((0.05, -0.05), 0)
        base = f.value((0.05, -0.05), 0)
        for elapsed in (1, 10, 250):
            ratio = f.value((0.05, -0.05), elapsed) / base
            assert ratio == pytest.approx((1 + rate) ** (-2 * elapsed), rel=1e-12)

    def test_non_increasing_at_center(self):
        f = make_field(rate=1e-3)
        f.push((0, 0), 0)
        values = [f.value((0, 0), t) for t in range(40)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_eval_before_stored_step_rejected(self):
        f = make_field()
        f.push((0, 0), 5)
        with pytest.raises(ValueError):
            f.value((0, 0), 4)


class TestNormalized:
    def test_fresh_scan_ratio_no_decay(self):
        # With no diffusion the normalizer is five equal peaks.
        f = make_field(rate=0.0)
        f.push((0.1, 0.1), 0)
        assert f.normalized((0.1, 0.1), 0) == pytest.approx(0.2, rel=1e-12)

    def test_scales_linearly_with_duplicates(self):
        f = make_field(rate=0.0)
        for _ in range(3):
            f.push((0.1, 0.1), 0)
        assert f.normalized((0.1, 0.1), 0) == pytest.approx(0.6, rel=1e-12)


class TestRaster:
    def test_empty_all_zero(self):
        f = make_field()
        grid = f.raster(0, 48)
        assert grid.shape == (48, 48)
        assert not grid.any()

    def test_central_peak_for_centered_scan(self):
        f = make_field()
        f.push((0.0, 0.0), 0)
        grid = f.raster(0, 48)
        i, j = np.unravel_index(np.argmax(grid), grid.shape)
        assert i in (23, 24) and j in (23, 24)

    def test_corner_equals_pointwise(self):
        f = make_field(rate=1e-3)
        for t, mu in enumerate([(-0.9, -0.9), (-1.0, -1.0), (0.2, 0.3)]):
            f.push(mu, t)
        grid = f.raster(5, 48)
        assert grid[0, 0] == f.normalized((-np.pi / 3, -np.pi / 3), 5)

    def test_every_cell_equals_pointwise(self):
        f = make_field(capacity=16, rate=2e-3)
        rng = np.random.default_rng(3)
        for t in range(16):
            f.push(rng.uniform(-np.pi / 3, np.pi / 3, 2), t)
        n = 16
        grid = f.raster(20, n)
        axis = np.linspace(-np.pi / 3, np.pi / 3, n)
        for i in range(n):
            for j in range(n):
                assert grid[i, j] == f.normalized((axis[i], axis[j]), 20)

    def test_size_validation(self):
        with pytest.raises(ValueError):
            make_field().raster(0, 1)


class TestBackendParity:
    def test_kernel_matches_numpy_fallback(self):
        rng = np.random.default_rng(4)
        centers = rng.uniform(-1, 1, (32, 2))
        sigmas = rng.uniform(0.02, 0.3, 32)
        points = rng.uniform(-1.2, 1.2, (100, 2))
        axis = np.linspace(-1.0, 1.0, 40)
        from searchtrack import scanfield

        for cutoff in (6.0, 0.0):
            want_pts = _scanfield_py.field_values(centers, sigmas, points, cutoff)
            got_pts = scanfield._kernel.field_values(centers, sigmas, points, cutoff)
            np.testing.assert_allclose(got_pts, want_pts, rtol=1e-12)
            want_grid = _scanfield_py.field_raster(centers, sigmas, axis, axis, cutoff)
            got_grid = scanfield._kernel.field_raster(centers, sigmas, axis, axis, cutoff)
            np.testing.assert_allclose(got_grid, want_grid, rtol=1e-12)

    def test_truncation_error_is_negligible(self):
        f_exact = make_field(cutoff=0.0)
        f_cut = make_field(cutoff=6.0)
        for t, mu in enumerate([(0.0, 0.0), (0.3, -0.2), (-0.5, 0.1)]):
            f_exact.push(mu, t)
            f_cut.push(mu, t)
        pts = np.array([[0.0, 0.0], [0.25, -0.15], [1.0, 1.0]])
        exact = f_exact.values(pts, 3)
        cut = f_cut.values(pts, 3)
        np.testing.assert_allclose(cut, exact, rtol=2e-8, atol=1e-12)
