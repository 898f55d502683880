"""Image similarity scores for reconstruction quality."""

from __future__ import annotations

import numpy as np

from .images import ImageGrid

# stability constants for unit dynamic range: (0.01 * L)^2 and (0.03 * L)^2 with L = 1
SSIM_C1 = 1e-4
SSIM_C2 = 9e-4


def l2_error(u: ImageGrid, reference: ImageGrid) -> float:
    """Half squared pixel distance 0.5 ||u - reference||^2."""
    if u.pixels.shape != reference.pixels.shape:
        raise ValueError(
            f"image shapes differ: {u.pixels.shape} vs {reference.pixels.shape}"
        )
    return 0.5 * float(((u.pixels - reference.pixels) ** 2).sum())


def ssim(u: ImageGrid, v: ImageGrid) -> float:
    """Single global structural-similarity index (no sliding window).

    Means, unbiased variances and covariance are taken over all pixels:

        (2 mu_u mu_v + c1) (2 cov_uv + c2)
        ----------------------------------------------
        (mu_u^2 + mu_v^2 + c1) (var_u + var_v + c2)

    Equals 1 exactly for identical images and is symmetric.
    """
    if u.pixels.shape != v.pixels.shape:
        raise ValueError(f"image shapes differ: {u.pixels.shape} vs {v.pixels.shape}")
    a = u.pixels.ravel()
    b = v.pixels.ravel()
    if a.size < 2:
        raise ValueError("ssim needs at least two pixels for unbiased variances")
    mu_a = a.mean()
    mu_b = b.mean()
    da = a - mu_a
    db = b - mu_b
    var_a = float(da @ da) / (a.size - 1)
    var_b = float(db @ db) / (a.size - 1)
    cov = float(da @ db) / (a.size - 1)
    return ((2.0 * mu_a * mu_b + SSIM_C1) * (2.0 * cov + SSIM_C2)) / (
        (mu_a * mu_a + mu_b * mu_b + SSIM_C1) * (var_a + var_b + SSIM_C2)
    )
