"""Grayscale image container, binary PGM (P5) I/O and synthetic test pairs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ImageGrid:
    """A 2-D grid of real intensities, nominally in [0, 1].

    Row-major float pixels.  Intermediate processing results (denoiser
    output, residuals) may leave [0, 1]; the range is enforced only when
    quantising to 8-bit PGM.
    """

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=float)
        if p.ndim != 2 or p.size == 0:
            raise ValueError(f"pixels must be a non-empty 2-D array, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("pixels must be finite")
        self.pixels = p

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


def read_pgm(path) -> ImageGrid:
    """Read a binary (P5) PGM file with maxval <= 255 into [0, 1]."""
    with open(path, "rb") as fh:
        data = fh.read()

    # header: magic, width, height, maxval; '#' comments allowed between tokens
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise ValueError(f"{path}: truncated PGM header")
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    pos += 1  # single whitespace byte after maxval precedes the raster

    magic, width, height, maxval = tokens[0], int(tokens[1]), int(tokens[2]), int(tokens[3])
    if magic != b"P5":
        raise ValueError(f"{path}: not a binary PGM (magic {magic!r})")
    if not (0 < maxval <= 255):
        raise ValueError(f"{path}: unsupported maxval {maxval}, expected 1..255")
    raster = np.frombuffer(data, dtype=np.uint8, offset=min(pos, len(data)))
    if raster.size < width * height:
        raise ValueError(f"{path}: raster truncated, expected {width * height} bytes")
    pixels = raster[: width * height].reshape(height, width).astype(float) / float(maxval)
    return ImageGrid(pixels)


def write_pgm(image: ImageGrid, path) -> None:
    """Write as binary (P5) 8-bit PGM; intensities are clipped to [0, 1]."""
    quantised = np.clip(np.rint(np.clip(image.pixels, 0.0, 1.0) * 255.0), 0, 255)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{image.width} {image.height}\n255\n".encode("ascii"))
        fh.write(quantised.astype(np.uint8).tobytes())


def synthetic_pair(
    width: int = 32,
    height: int = 32,
    noise_sigma: float = 0.1,
    seed: int = 0,
) -> tuple[ImageGrid, ImageGrid]:
    """Piecewise-constant squares plus Gaussian noise, deterministically seeded.

    Returns (clean, noisy); the noisy image is clipped back to [0, 1].
    """
    clean = np.full((height, width), 0.2)
    h, w = height, width
    clean[h // 8 : h // 2, w // 8 : w // 2] = 0.85
    clean[h // 2 : h - h // 8, w // 2 : w - w // 8] = 0.55
    clean[h // 3 : 2 * h // 3, w // 3 : 2 * w // 3] = 0.4
    rng = np.random.default_rng(seed)
    noisy = np.clip(clean + noise_sigma * rng.standard_normal(clean.shape), 0.0, 1.0)
    return ImageGrid(clean), ImageGrid(noisy)
