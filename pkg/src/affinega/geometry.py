"""2-D affine transforms in the six-parameter homogeneous form.

A transform maps ``(x, y)`` to ``(t0*x + t1*y + t2, t3*x + t4*y + t5)``.
``t2`` and ``t5`` are the translation; the other four carry rotation,
scaling, stretching and shearing together.

Point-sets are plain ``(n, 2)`` float64 arrays whose row order is the point
identity. See :func:`affinega.validation.check_pointset`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .validation import check_pointset

__all__ = [
    "AffineParams",
    "IDENTITY",
    "apply_affine",
    "warp",
    "from_elementary",
    "compose",
]


@dataclass(frozen=True)
class AffineParams:
    """Immutable six-gene affine transform ``(t0, t1, t2, t3, t4, t5)``."""

    theta: tuple[float, float, float, float, float, float]

    def __post_init__(self):
        theta = tuple(float(v) for v in self.theta)
        if len(theta) != 6:
            raise ValueError(f"affine transform needs 6 parameters, got {len(theta)}")
        if not all(math.isfinite(v) for v in theta):
            raise ValueError(f"affine parameters must be finite, got {theta}")
        object.__setattr__(self, "theta", theta)

    @classmethod
    def identity(cls) -> AffineParams:
        return cls((1.0, 0.0, 0.0, 0.0, 1.0, 0.0))

    @classmethod
    def from_array(cls, values) -> AffineParams:
        return cls(tuple(np.asarray(values, dtype=np.float64).ravel()))

    def to_array(self) -> np.ndarray:
        return np.array(self.theta, dtype=np.float64)

    def matrix(self) -> np.ndarray:
        """3x3 homogeneous matrix."""
        t0, t1, t2, t3, t4, t5 = self.theta
        return np.array([[t0, t1, t2], [t3, t4, t5], [0.0, 0.0, 1.0]])

    @property
    def linear(self) -> np.ndarray:
        t0, t1, _, t3, t4, _ = self.theta
        return np.array([[t0, t1], [t3, t4]])

    @property
    def translation(self) -> np.ndarray:
        return np.array([self.theta[2], self.theta[5]])

    @property
    def scale(self) -> float:
        """Scale of the first column; exact for similarity transforms."""
        return math.hypot(self.theta[0], self.theta[3])

    def __iter__(self):
        return iter(self.theta)


IDENTITY = AffineParams.identity()


def apply_affine(params: AffineParams, p) -> tuple[float, float]:
    """Map a single point ``p = (x, y)``."""
    t0, t1, t2, t3, t4, t5 = params.theta
    x, y = float(p[0]), float(p[1])
    return (t0 * x + t1 * y + t2, t3 * x + t4 * y + t5)


def warp(params: AffineParams, points) -> np.ndarray:
    """Apply ``params`` to every row of ``points``; row order is preserved.

    Parameters
    ----------
    params : AffineParams or array-like of shape (6,)
    points : array-like of shape (n, 2)

    Returns
    -------
    ndarray of shape (n, 2)
    """
    points = check_pointset(points)
    if not isinstance(params, AffineParams):
        params = AffineParams.from_array(params)
    t0, t1, t2, t3, t4, t5 = params.theta
    x = points[:, 0]
    y = points[:, 1]
    # same operation order as apply_affine so the two agree bit-for-bit
    out = np.empty_like(points)
    out[:, 0] = t0 * x + t1 * y + t2
    out[:, 1] = t3 * x + t4 * y + t5
    return out


def from_elementary(scale: float, rotation: float, tx: float = 0.0, ty: float = 0.0) -> AffineParams:
    """Build a similarity transform from scale, rotation (radians) and translation.

    Raises
    ------
    ValueError
        If ``scale <= 0``.
    """
    if not scale > 0:
        raise ValueError(f"scale must be > 0, got {scale}")
    c = scale * math.cos(rotation)
    s = scale * math.sin(rotation)
    return AffineParams((c, -s, tx, s, c, ty))


def compose(a: AffineParams, b: AffineParams) -> AffineParams:
    """Transform equivalent to applying ``b`` first, then ``a``."""
    a0, a1, a2, a3, a4, a5 = a.theta
    b0, b1, b2, b3, b4, b5 = b.theta
    return AffineParams(
        (
            a0 * b0 + a1 * b3,
            a0 * b1 + a1 * b4,
            a0 * b2 + a1 * b5 + a2,
            a3 * b0 + a4 * b3,
            a3 * b1 + a4 * b4,
            a3 * b2 + a4 * b5 + a5,
        )
    )
