"""Vector discrete gradients built from one-coordinate increments.

These are diagnostic companions to the scalar line-step solver: the
solver only ever solves scalar secant equations, but those equations
are exactly the components of the coordinate-incremental discrete
gradient below, which satisfies the mean-value identity

    <G(x, y), y - x> = V(y) - V(x)

exactly (up to rounding).  The rotated variant evaluates the increments
along an arbitrary orthonormal frame instead of the coordinate axes.
The descent loop never calls these; they exist for verification and
for inspecting a run's implicit gradient information.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# one-sided finite-difference step used where an increment is zero and
# the difference quotient is undefined
SURROGATE_STEP = 1e-8


def itoh_abe_dg(fn, x, y) -> np.ndarray:
    """Coordinate-incremental discrete gradient of fn between x and y.

    Component i is the difference quotient of updating coordinate i from
    x_i to y_i with coordinates below i already updated; costs n + 1
    evaluations.  A zero increment has no difference quotient, so that
    component falls back to a one-sided finite difference (the
    mean-value identity is unaffected because the term multiplies zero).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"points must be equal-length vectors, got {x.shape} and {y.shape}")
    n = x.size
    z = x.copy()
    prev = float(fn(z))
    g = np.zeros(n)
    for i in range(n):
        dy = y[i] - x[i]
        if dy == 0.0:
            zs = z.copy()
            zs[i] += SURROGATE_STEP
            g[i] = (float(fn(zs)) - prev) / SURROGATE_STEP
        else:
            z[i] = y[i]
            cur = float(fn(z))
            g[i] = (cur - prev) / dy
            prev = cur
    return g


@dataclass(frozen=True)
class RotatedFrame:
    """Orthonormal frame given by the rows of a rotation matrix.

    Frame vector i is row i of ``matrix``; for an orthogonal matrix R
    this means R maps frame vector i to the i-th coordinate axis.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"frame matrix must be square, got shape {m.shape}")
        defect = np.abs(m @ m.T - np.eye(m.shape[0])).max()
        if defect > 1e-10:
            raise ValueError(f"frame matrix is not orthonormal (defect {defect:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def vector(self, i: int) -> np.ndarray:
        return self.matrix[i]


def rotated_itoh_abe_dg(fn, x, y, frame: RotatedFrame) -> np.ndarray:
    """Discrete gradient of fn between x and y along a rotated frame.

    Increments y - x are resolved into the frame's coordinates and
    applied one frame vector at a time; the raw difference quotients are
    then rotated back to the ambient coordinates.  With the identity
    frame this reduces exactly to :func:`itoh_abe_dg`.  Costs n + 1
    evaluations and satisfies the same mean-value identity.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    R = frame.matrix
    if x.shape != y.shape or x.shape != (frame.n,):
        raise ValueError(
            f"points of shape {x.shape}, {y.shape} do not match frame dimension {frame.n}"
        )
    gamma = R @ (y - x)
    acc = x.copy()
    prev = float(fn(acc))
    ghat = np.zeros(frame.n)
    for i in range(frame.n):
        if gamma[i] == 0.0:
            probe = acc + SURROGATE_STEP * R[i]
            ghat[i] = (float(fn(probe)) - prev) / SURROGATE_STEP
        else:
            acc = acc + gamma[i] * R[i]
            cur = float(fn(acc))
            ghat[i] = (cur - prev) / gamma[i]
            prev = cur
    return R.T @ ghat
