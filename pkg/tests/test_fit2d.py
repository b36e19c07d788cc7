import numpy as np
import pytest

from brute import brute_fit_image_pixel
from fitkit.core import Image
from fitkit.fit2d import (directional_derivative, fit_image_nonoverlap,
                          fit_image_overlap, segmental_masks,
                          smoothing_denominator, square_masks)

TWO_PI = 2.0 * np.pi


def step_image(rows=16, cols=16, edge_col=8, height=100.0):
    data = np.zeros((rows, cols))
    data[:, edge_col:] = height
    return Image(data)


class TestMasks:
    def test_segmental_m3(self):
        n_h, d_h = segmental_masks(3)
        assert n_h.tolist() == [[-0.5, 0.0, 0.5]]
        assert d_h.tolist() == [[1 / 3, 1 / 3, 1 / 3]]

    def test_square_m3_matches_published_taps(self):
        n, d = square_masks(3)
        assert np.allclose(n * 6.0, [[-1, -1, 0], [-1, 0, 1], [0, 1, 1]])
        assert np.allclose(d, np.full((3, 3), 1 / 9))

    def test_square_general_m_element_counts(self):
        for m in (5, 7, 9):
            n, _ = square_masks(m)
            scaled = n * ((m - 1) * m)
            assert int(np.sum(scaled == -1)) == m * (m - 1) // 2
            assert int(np.sum(scaled == 0)) == m
            assert int(np.sum(scaled == 1)) == m * (m - 1) // 2

    def test_even_m_rejected(self):
        with pytest.raises(ValueError):
            segmental_masks(4)
        with pytest.raises(ValueError):
            square_masks(6)


class TestDirectionalDerivative:
    def test_constant_image_zero_everywhere_interior(self):
        img = Image(np.full((8, 8), 9.0))
        _, _, mag = directional_derivative(img, "segmental", 3)
        assert np.max(np.abs(mag[0, 1:-1, 1:-1])) == 0.0

    def test_vertical_step_hand_convolution(self):
        h = 100.0
        img = step_image(height=h)
        i_h, i_v, mag = directional_derivative(img, "segmental", 3)
        # columns adjacent to the edge see half the step height
        assert np.allclose(i_h[0, 1:-1, 7], h / 2)
        assert np.allclose(i_h[0, 1:-1, 8], h / 2)
        assert np.allclose(i_v[0, 1:-1, 1:-1], 0.0)
        assert np.allclose(mag[0, 1:-1, 7], h / 2)

    def test_square_kind_uses_single_mask(self):
        img = step_image()
        i_h, i_v, mag = directional_derivative(img, "square", 3)
        assert i_h is None and i_v is None
        assert mag.shape == img.data.shape


class TestSmoothingDenominator:
    def test_square_constant_box_mean(self):
        img = Image(np.full((8, 8), 7.0))
        bm = smoothing_denominator(img, "square", 3)
        assert np.allclose(bm[0, 1:-1, 1:-1], 7.0)

    def test_segmental_constant_is_sqrt2_scaled(self):
        img = Image(np.full((8, 8), 7.0))
        bm = smoothing_denominator(img, "segmental", 3)
        assert np.allclose(bm[0, 1:-1, 1:-1], np.sqrt(2.0) * 7.0)


class TestOverlap:
    @pytest.mark.parametrize("variant", ["equalized", "averaged", "mask"])
    @pytest.mark.parametrize("mask_kind", ["segmental", "square"])
    def test_constant_image_gives_zero(self, variant, mask_kind):
        img = Image(np.full((8, 8), 5.0))
        fit = fit_image_overlap(img, mask_kind, 3, variant)
        assert np.max(fit.values[:, 1:-1, 1:-1]) < 1e-15

    def test_raw_zero_pixel_error_names_coordinates(self):
        img = Image(np.array([[1.0, 0.0], [1.0, 1.0]]))
        with pytest.raises(ZeroDivisionError, match=r"\(0, 1\)"):
            fit_image_overlap(img, "segmental", 3, "raw")

    @pytest.mark.parametrize("mask_kind", ["segmental", "square"])
    def test_equalized_matches_per_pixel_oracle(self, mask_kind):
        rng = np.random.default_rng(3)
        data = rng.uniform(0.0, 255.0, size=(10, 12))
        img = Image(data)
        fit = fit_image_overlap(img, mask_kind, 3, "equalized")
        pixels = [(0, 0), (3, 4), (5, 11), (9, 6), (9, 11)]
        for r, c in pixels:
            want = brute_fit_image_pixel(data.tolist(), r, c, mask_kind, 3, "equalized")
            assert fit.values[0, r, c] == pytest.approx(want, abs=1e-10)

    def test_equalized_ramp_denominator(self):
        ramp = np.tile(np.linspace(0.0, 255.0, 16), (8, 1))
        img = Image(ramp)
        fit = fit_image_overlap(img, "segmental", 3, "equalized")
        for r, c in ((2, 3), (4, 8), (6, 14)):
            want = brute_fit_image_pixel(ramp.tolist(), r, c, "segmental", 3, "equalized")
            assert fit.values[0, r, c] == pytest.approx(want, abs=1e-12)

    def test_averaged_divides_by_channel_mean(self):
        rng = np.random.default_rng(4)
        data = rng.uniform(1.0, 255.0, size=(8, 8))
        img = Image(data)
        fit = fit_image_overlap(img, "segmental", 3, "averaged")
        _, _, mag = directional_derivative(img, "segmental", 3)
        assert np.allclose(fit.values, mag / data.mean() / TWO_PI)

    def test_mask_variant_denominator_from_equalized_channel(self):
        rng = np.random.default_rng(5)
        data = rng.uniform(0.0, 255.0, size=(8, 8))
        img = Image(data)
        fit = fit_image_overlap(img, "square", 3, "mask")
        assert np.all(np.isfinite(fit.values))
        assert np.all(fit.values >= 0.0)

    def test_channel_independence(self):
        rng = np.random.default_rng(6)
        data = rng.uniform(0.0, 255.0, size=(3, 8, 8))
        fit = fit_image_overlap(Image(data), "segmental", 3, "equalized")
        permuted = fit_image_overlap(Image(data[::-1].copy()), "segmental", 3, "equalized")
        assert np.allclose(fit.values[::-1], permuted.values)

    def test_transpose_swaps_directional_responses(self):
        rng = np.random.default_rng(7)
        data = rng.uniform(0.0, 255.0, size=(12, 12))
        i_h, i_v, mag = directional_derivative(Image(data), "segmental", 5)
        t_h, t_v, t_mag = directional_derivative(Image(data.T.copy()), "segmental", 5)
        assert np.max(np.abs(t_h[0] - i_v[0].T)) < 1e-12
        assert np.max(np.abs(t_v[0] - i_h[0].T)) < 1e-12
        assert np.max(np.abs(t_mag[0] - mag[0].T)) < 1e-12

    def test_all_values_finite_and_nonnegative_any_8bit_input(self):
        rng = np.random.default_rng(8)
        data = rng.integers(0, 256, size=(16, 16)).astype(np.float64)
        for variant in ("equalized", "averaged", "mask"):
            for kind in ("segmental", "square"):
                fit = fit_image_overlap(Image(data), kind, 3, variant)
                assert np.all(np.isfinite(fit.values))
                assert np.all(fit.values >= 0.0)


class TestNonOverlap:
    def test_constant_gives_three_zero_arrays(self):
        img = Image(np.full((8, 8), 3.0))
        fit = fit_image_nonoverlap(img, "eq")
        for band in (fit.horizontal, fit.vertical, fit.diagonal):
            assert np.all(band == 0.0)
            assert band.shape == (1, 4, 4)

    def test_2x2_block_formulas_raw(self):
        a, b, c, d = 8.0, 4.0, 2.0, 6.0
        img = Image(np.array([[a, b], [c, d]]))
        fit = fit_image_nonoverlap(img, "raw")
        ll = (a + b + c + d) / 4.0
        assert fit.horizontal[0, 0, 0] == pytest.approx(abs((-a + b - c + d) / 4.0) / ll / TWO_PI)
        assert fit.vertical[0, 0, 0] == pytest.approx(abs((-a - b + c + d) / 4.0) / ll / TWO_PI)
        assert fit.diagonal[0, 0, 0] == pytest.approx(abs((a - b - c + d) / 4.0) / ll / TWO_PI)

    def test_checkerboard_is_purely_diagonal(self):
        tile = np.array([[0.0, 255.0], [255.0, 0.0]])
        img = Image(np.tile(tile, (4, 4)))
        fit = fit_image_nonoverlap(img, "eq")
        assert np.all(fit.horizontal == 0.0)
        assert np.all(fit.vertical == 0.0)
        assert np.min(fit.diagonal) > 0.0

    def test_forms_agree(self):
        rng = np.random.default_rng(9)
        img = Image(rng.uniform(0.0, 255.0, size=(8, 10)))
        for variant in ("eq", "av"):
            a = fit_image_nonoverlap(img, variant, "sqrt_conj")
            b = fit_image_nonoverlap(img, variant, "abs")
            for band in ("horizontal", "vertical", "diagonal"):
                assert np.max(np.abs(getattr(a, band) - getattr(b, band))) <= 1e-12

    def test_odd_dims_rejected(self):
        with pytest.raises(ValueError):
            fit_image_nonoverlap(Image(np.ones((5, 8))), "eq")

    def test_haar_rebuild_reproduces_fit(self):
        from fitkit.multires import haar2d_forward, haar2d_inverse
        rng = np.random.default_rng(10)
        data = rng.uniform(0.0, 255.0, size=(8, 8))
        rebuilt = haar2d_inverse(haar2d_forward(data))
        a = fit_image_nonoverlap(Image(data), "eq")
        b = fit_image_nonoverlap(Image(rebuilt), "eq")
        for band in ("horizontal", "vertical", "diagonal"):
            assert np.max(np.abs(getattr(a, band) - getattr(b, band))) < 1e-12
