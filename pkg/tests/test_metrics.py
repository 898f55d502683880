"""Reconstruction quality scores."""

import numpy as np
import pytest

from dgopt.problems.images import ImageGrid, synthetic_pair
from dgopt.problems.metrics import SSIM_C1, SSIM_C2, l2_error, ssim


class TestL2Error:
    def test_frozen_value(self):
        u = ImageGrid(np.ones((2, 2)))
        v = ImageGrid(np.zeros((2, 2)))
        assert l2_error(u, v) == pytest.approx(2.0)  # 0.5 * 4 * 1^2

    def test_zero_on_identical(self):
        img = ImageGrid(np.random.default_rng(0).uniform(0, 1, (5, 5)))
        assert l2_error(img, img) == 0.0

    def test_symmetric(self):
        rng = np.random.default_rng(1)
        u = ImageGrid(rng.uniform(0, 1, (4, 4)))
        v = ImageGrid(rng.uniform(0, 1, (4, 4)))
        assert l2_error(u, v) == l2_error(v, u)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            l2_error(ImageGrid(np.zeros((2, 2))), ImageGrid(np.zeros((2, 3))))


class TestSSIM:
    def test_identical_images_score_one(self):
        img = ImageGrid(np.random.default_rng(2).uniform(0, 1, (8, 8)))
        assert ssim(img, img) == pytest.approx(1.0, abs=1e-15)

    def test_symmetric(self):
        rng = np.random.default_rng(3)
        u = ImageGrid(rng.uniform(0, 1, (6, 6)))
        v = ImageGrid(rng.uniform(0, 1, (6, 6)))
        assert ssim(u, v) == pytest.approx(ssim(v, u), rel=1e-14)

    def test_constant_images_closed_form(self):
        # zero variances and covariance: score reduces to
        # c1 c2 / ((mu_u^2 + mu_v^2 + c1) c2)
        u = ImageGrid(np.zeros((4, 4)))
        v = ImageGrid(np.ones((4, 4)))
        expected = SSIM_C1 / (1.0 + SSIM_C1)
        assert ssim(u, v) == pytest.approx(expected, rel=1e-12)

    def test_bounded_on_unit_range_images(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            u = ImageGrid(rng.uniform(0, 1, (5, 5)))
            v = ImageGrid(rng.uniform(0, 1, (5, 5)))
            assert -1.0 <= ssim(u, v) <= 1.0

    def test_noise_lowers_score(self):
        clean, noisy = synthetic_pair(seed=0)
        assert ssim(clean, noisy) < ssim(clean, clean)

    def test_anticorrelated_images_score_negative(self):
        base = np.random.default_rng(5).uniform(0.2, 0.8, (8, 8))
        u = ImageGrid(base)
        v = ImageGrid(2.0 * base.mean() - base)  # mirror about the mean
        assert ssim(u, v) < 0.0

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            ssim(ImageGrid(np.zeros((2, 2))), ImageGrid(np.zeros((3, 2))))

    def test_single_pixel_rejected(self):
        one = ImageGrid(np.zeros((1, 1)))
        with pytest.raises(ValueError):
            ssim(one, one)
