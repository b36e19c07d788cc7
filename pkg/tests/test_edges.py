import numpy as np
import pytest

from fitkit.core import Image
from fitkit.edges import (PREWITT_X, canny, fit_edges, gradient_edges,
                          to_gray)


def step_image(rows=24, cols=24, edge_col=12, height=200.0, base=20.0):
    data = np.full((rows, cols), base)
    data[:, edge_col:] = height
    return Image(data)


class TestGray:
    def test_luminance_weights(self):
        img = Image(np.stack([np.full((2, 2), 255.0), np.zeros((2, 2)), np.zeros((2, 2))]))
        assert np.allclose(to_gray(img), 0.299 * 255.0)

    def test_channel_max(self):
        img = Image(np.stack([np.full((2, 2), 10.0), np.full((2, 2), 90.0), np.zeros((2, 2))]))
        assert np.allclose(to_gray(img, "channel_max"), 90.0)


class TestGradientOperators:
    @pytest.mark.parametrize("op", ["roberts", "sobel", "prewitt"])
    def test_constant_image_zero_map(self, op):
        edge = gradient_edges(Image(np.full((8, 8), 33.0)), op)
        assert np.max(edge.magnitude[1:-1, 1:-1]) < 1e-12

    def test_sobel_step_peak_is_4h(self):
        h = 180.0
        img = step_image(height=h, base=0.0)
        edge = gradient_edges(img, "sobel", "l2")
        interior = edge.magnitude[2:-2, :]
        assert interior.max() == pytest.approx(4.0 * h)
        peaks = np.argmax(interior, axis=1)
        assert np.all((peaks == 11) | (peaks == 12))

    def test_prewitt_taps(self):
        assert PREWITT_X.tolist() == [[-1, 0, 1], [-1, 0, 1], [-1, 0, 1]]

    @pytest.mark.parametrize("op", ["sobel", "prewitt"])
    def test_l2_magnitude_rotation_invariant(self, op):
        rng = np.random.default_rng(3)
        img_data = rng.uniform(0.0, 255.0, size=(16, 16))
        mag = gradient_edges(Image(img_data), op, "l2").magnitude
        rot = gradient_edges(Image(np.rot90(img_data).copy()), op, "l2").magnitude
        assert np.max(np.abs(rot - np.rot90(mag))) < 1e-9

    def test_roberts_rotation_invariant_up_to_support_shift(self):
        # the 2x2 support sits between pixels, so a 90 degree rotation
        # relocates the map by exactly one sample along one axis
        rng = np.random.default_rng(4)
        img_data = rng.uniform(0.0, 255.0, size=(16, 16))
        mag = gradient_edges(Image(img_data), "roberts", "l2").magnitude
        rot = gradient_edges(Image(np.rot90(img_data).copy()), "roberts", "l2").magnitude
        expect = np.rot90(mag)
        assert np.max(np.abs(rot[1:, :-1] - expect[:-1, :-1])) < 1e-9

    def test_magnitude_modes(self):
        img = step_image()
        l1 = gradient_edges(img, "sobel", "l1").magnitude
        l2 = gradient_edges(img, "sobel", "l2").magnitude
        mx = gradient_edges(img, "sobel", "max").magnitude
        assert np.all(l1 + 1e-12 >= l2)
        assert np.all(l2 + 1e-12 >= mx)

    def test_unknown_operator(self):
        with pytest.raises(ValueError):
            gradient_edges(step_image(), "scharr")


class TestCanny:
    def test_constant_image_empty(self):
        edge = canny(Image(np.full((16, 16), 80.0)), 1.0, 5.0, 15.0)
        assert edge.binary.sum() == 0

    def test_step_edge_single_pixel_line(self):
        img = step_image(rows=32, cols=32, edge_col=16)
        edge = canny(img, 1.0, 10.0, 40.0)
        rows = edge.binary[4:-4, :]
        cols = np.flatnonzero(rows.any(axis=0))
        assert cols.size >= 1
        assert np.all(np.abs(cols - 15.5) <= 1.0)  # within a pixel of the step
        per_row = rows.sum(axis=1)
        assert np.all(per_row <= 2)

    def test_raising_t_high_never_adds_pixels(self):
        rng = np.random.default_rng(5)
        img = Image(np.cumsum(rng.uniform(0.0, 8.0, size=(24, 24)), axis=1))
        previous = None
        for t_high in (10.0, 20.0, 40.0, 80.0):
            edge = canny(img, 1.2, 5.0, t_high)
            count = int(edge.binary.sum())
            if previous is not None:
                assert count <= previous
            previous = count

    def test_binary_is_subset_of_low_threshold_set(self):
        rng = np.random.default_rng(6)
        img = Image(rng.uniform(0.0, 255.0, size=(20, 20)))
        t_low = 8.0
        edge = canny(img, 1.0, t_low, 24.0)
        assert np.all(edge.magnitude[edge.binary] >= t_low)

    def test_threshold_order_enforced(self):
        with pytest.raises(ValueError):
            canny(step_image(), 1.0, 10.0, 5.0)

    def test_sigma_positive(self):
        with pytest.raises(ValueError):
            canny(step_image(), 0.0, 1.0, 2.0)


class TestFitEdges:
    def test_constant_zero(self):
        edge = fit_edges(Image(np.full((8, 8), 44.0)))
        assert np.max(edge.magnitude[1:-1, 1:-1]) < 1e-12

    def test_step_localization_matches_gradient(self):
        img = step_image()
        fit_peak = np.argmax(fit_edges(img, "segmental", 3).magnitude[8])
        sobel_peak = np.argmax(gradient_edges(img, "sobel").magnitude[8])
        assert abs(int(fit_peak) - int(sobel_peak)) <= 1

    def test_wider_mask_widens_response_band(self):
        img = step_image(rows=32, cols=32, edge_col=16)
        row = 10
        narrow = fit_edges(img, "segmental", 3).magnitude[row]
        wide = fit_edges(img, "segmental", 7).magnitude[row]
        width = lambda v: int(np.count_nonzero(v[2:-2] > 1e-12 * v.max()))
        assert width(wide) > width(narrow)

    def test_binary_threshold(self):
        edge = fit_edges(step_image(), "segmental", 3, threshold_frac=0.5)
        assert edge.binary is not None
        assert edge.binary.dtype == bool
        assert 0 < edge.binary.sum() < edge.binary.size
