"""Synthetic deformed point-sets with known ground truth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ga import ConfigError
from ..geometry import AffineParams, from_elementary, warp
from ..validation import check_pointset

AFFINE = "affine"
PERTURBED_AFFINE = "perturbed-affine"


@dataclass(frozen=True)
class DistortionSpec:
    """How to deform a static set.

    ``affine`` applies a similarity transform only. ``perturbed-affine``
    adds isotropic Gaussian noise of ``noise_sigma`` to every mapped point,
    a stand-in for free-form deformations.
    """

    kind: str = AFFINE
    scale: float = 1.0
    rotation: float = 0.0
    tx: float = 0.0
    ty: float = 0.0
    noise_sigma: float = 0.0
    seed: int = 0

    def validate(self) -> DistortionSpec:
        if self.kind not in (AFFINE, PERTURBED_AFFINE):
            raise ConfigError(f"unknown distortion kind {self.kind!r}")
        if not self.scale > 0:
            raise ConfigError(f"scale must be > 0, got {self.scale}")
        if self.noise_sigma < 0:
            raise ConfigError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.kind == AFFINE and self.noise_sigma != 0:
            raise ConfigError("an affine distortion cannot carry noise; use kind='perturbed-affine'")
        return self

    @property
    def truth(self) -> AffineParams:
        return from_elementary(self.scale, self.rotation, self.tx, self.ty)


def generate_distortion(s, spec: DistortionSpec) -> tuple[np.ndarray, AffineParams]:
    """Deform ``s``; returns the deformed points and the affine ground truth.

    The ground truth maps static onto deformed. Registration recovers its
    inverse.
    """
    spec.validate()
    s = check_pointset(s, "s")
    truth = spec.truth
    out = warp(truth, s)
    if spec.kind == PERTURBED_AFFINE and spec.noise_sigma > 0:
        rng = np.random.default_rng(spec.seed)
        out = out + rng.normal(0.0, spec.noise_sigma, size=out.shape)
    return out, truth


def uniform_pointset(n: int, low: float = 0.0, high: float = 100.0, seed: int = 0) -> np.ndarray:
    """``n`` points uniform in the square ``[low, high]^2``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return np.random.default_rng(seed).uniform(low, high, size=(n, 2))


def rmse(a, b) -> float:
    """Root-mean-square distance between index-aligned point-sets."""
    a = check_pointset(a, "a")
    b = check_pointset(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"point-sets differ in size: {a.shape[0]} vs {b.shape[0]}")
    return float(np.sqrt(np.mean(np.sum((a - b) ** 2, axis=1))))
