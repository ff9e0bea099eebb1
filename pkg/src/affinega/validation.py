"""Input validation helpers shared by the library and the estimator."""

from __future__ import annotations

import numpy as np

__all__ = ["check_pointset", "check_random_state", "bbox_diagonal"]


def check_pointset(points, name: str = "points") -> np.ndarray:
    """Return ``points`` as a C-contiguous ``(n, 2)`` float64 array.

    Raises ``ValueError`` for empty input, wrong shape, or non-finite values.
    """
    arr = np.ascontiguousarray(points, dtype=np.float64)
    if arr.ndim == 1 and arr.shape[0] == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{name} must have shape (n, 2), got {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError(f"{name} must contain at least one point")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite coordinates")
    return arr


def check_random_state(seed) -> np.random.Generator:
    """Turn ``seed`` into a ``numpy.random.Generator``.

    An existing Generator is returned as-is so callers can share one stream.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None or isinstance(seed, (int, np.integer)):
        return np.random.default_rng(seed)
    raise TypeError(f"cannot build a random generator from {seed!r}")


def bbox_diagonal(points) -> float:
    """Length of the diagonal of the axis-aligned bounding box."""
    points = check_pointset(points)
    extent = points.max(axis=0) - points.min(axis=0)
    return float(np.hypot(extent[0], extent[1]))
