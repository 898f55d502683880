"""Search-direction strategies for the outer descent loop.

Four interchangeable generators, all emitting unit vectors:

* ``CyclicCoordinates``: the standard basis, cycled deterministically.
* ``RandomPursuit``: i.i.d. directions uniform on the unit sphere.
* ``RotatedBlocks``: a fresh uniformly random orthonormal basis every
  block of n draws, emitted column by column.
* ``DeterministicDense2D``: a fixed, randomness-free sequence of planar
  directions whose angles equidistribute over the half-circle, so the
  emitted lines are dense in the set of 2-D directions.

Randomised strategies own a numpy ``Generator`` seeded at construction
(PCG64 under the hood), so the same seed always reproduces the same
direction sequence bit for bit.
"""

from __future__ import annotations

import math

import numpy as np

from .core import ConfigError

# Fractional part of the golden ratio; the classic maximally-irrational
# rotation constant for equidistributed angle sequences.
GOLDEN_FRACTION = (1.0 + math.sqrt(5.0)) / 2.0 - 1.0


def uniform_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    """One draw from the uniform distribution on the unit sphere in R^n.

    Normalised i.i.d. Gaussians; rotation invariance of the Gaussian makes
    the result uniform.  The zero draw has probability zero but is redrawn
    anyway so the postcondition is unconditional.
    """
    while True:
        g = rng.standard_normal(n)
        norm = np.linalg.norm(g)
        if norm > 0.0:
            return g / norm


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniformly random (Haar) orthogonal n x n matrix.

    QR of a Gaussian matrix, with column signs fixed so the triangular
    factor has a positive diagonal; without the sign fix the QR
    convention would bias the distribution.
    """
    g = rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return q * signs


def deterministic_dense_2d(k: int, sigma_irr: float = GOLDEN_FRACTION) -> np.ndarray:
    """k-th direction of the irrational-rotation sequence in the plane.

    Angle theta_k = pi * frac(sigma_irr * k); since sigma_irr is
    irrational the angles equidistribute modulo pi, which is exactly
    density of the corresponding lines (a direction and its negation
    span the same line, and the step solver probes both signs).
    """
    theta = math.pi * math.fmod(sigma_irr * k, 1.0)
    return np.array([math.cos(theta), math.sin(theta)])


class DirectionStrategy:
    """Base interface: ``direction(k)`` for k = 0, 1, 2, ...

    ``direction_index(k)`` is the within-sequence index recorded in run
    traces (coordinate / column number for block strategies, k itself
    otherwise).  ``reseeded(seed)`` returns a fresh strategy of the same
    kind for ensemble runs.
    """

    kind = "base"

    def __init__(self, n: int):
        if n < 1:
            raise ConfigError(f"dimension must be >= 1, got {n}")
        self.n = int(n)

    def direction(self, k: int) -> np.ndarray:
        raise NotImplementedError

    def direction_index(self, k: int) -> int:
        return k

    def reseeded(self, seed: int) -> "DirectionStrategy":
        return self


class CyclicCoordinates(DirectionStrategy):
    """Standard basis vectors in fixed cyclic order: e_1, e_2, ..., e_n, e_1, ..."""

    kind = "cyclic"

    def direction(self, k: int) -> np.ndarray:
        d = np.zeros(self.n)
        d[k % self.n] = 1.0
        return d

    def direction_index(self, k: int) -> int:
        return k % self.n


class RandomPursuit(DirectionStrategy):
    """Independent uniformly distributed directions on the unit sphere."""

    kind = "random"

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n)
        self.seed = int(seed)
        self._rng = np.random.default_rng(self.seed)

    def direction(self, k: int) -> np.ndarray:
        return uniform_sphere(self._rng, self.n)

    def reseeded(self, seed: int) -> "RandomPursuit":
        return RandomPursuit(self.n, seed)


class RotatedBlocks(DirectionStrategy):
    """Columns of a fresh Haar-random orthonormal basis, one basis per block.

    Draw k uses column (k mod n) of the current basis; a new basis is
    drawn whenever k mod n == 0.  Calls are expected in sequential order
    k = 0, 1, 2, ...
    """

    kind = "rotated"

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n)
        self.seed = int(seed)
        self._rng = np.random.default_rng(self.seed)
        self._block: np.ndarray | None = None

    def direction(self, k: int) -> np.ndarray:
        if k % self.n == 0 or self._block is None:
            self._block = random_orthogonal(self._rng, self.n)
        return self._block[:, k % self.n].copy()

    def direction_index(self, k: int) -> int:
        return k % self.n

    def reseeded(self, seed: int) -> "RotatedBlocks":
        return RotatedBlocks(self.n, seed)


class DeterministicDense2D(DirectionStrategy):
    """Randomness-free dense direction sequence; only defined in the plane."""

    kind = "dense2d"

    def __init__(self, n: int = 2, sigma_irr: float = GOLDEN_FRACTION):
        if n != 2:
            raise ConfigError(
                f"dense2d directions are only defined for dimension 2, got {n}"
            )
        super().__init__(n)
        self.sigma_irr = float(sigma_irr)

    def direction(self, k: int) -> np.ndarray:
        return deterministic_dense_2d(k, self.sigma_irr)


STRATEGY_KINDS = ("cyclic", "random", "rotated", "dense2d")


def make_strategy(kind: str, n: int, seed: int = 0) -> DirectionStrategy:
    """Build a strategy by name; raises :class:`ConfigError` on unknown kind."""
    if kind == "cyclic":
        return CyclicCoordinates(n)
    if kind == "random":
        return RandomPursuit(n, seed)
    if kind == "rotated":
        return RotatedBlocks(n, seed)
    if kind == "dense2d":
        return DeterministicDense2D(n)
    raise ConfigError(
        f"unknown direction strategy {kind!r}, expected one of {STRATEGY_KINDS}"
    )
