"""Sphere-cover variant of the constructor, for small input domains.

When the input domain sits inside N_x spheres of radius eps/(3L), the grid
anchors can be replaced by the sphere centers with no other change to the
construction.  The payoff is the parameter count: only 4*d*n*N_x + 2*d*N_x + n
entries of the synthesized network depend on the target function and domain.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construct_self import (
    ConstructedApproximator,
    TargetFunction,
    build_from_centers,
)


@dataclass(frozen=True)
class SphereCover:
    """Centers and common radius (2-norm) of a finite sphere cover."""

    centers: np.ndarray
    radius: float

    def __post_init__(self):
        centers = np.atleast_2d(np.asarray(self.centers, dtype=np.float64))
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if centers.shape[0] < 1:
            raise ValueError("cover needs at least one center")
        if len(np.unique(centers, axis=0)) != len(centers):
            raise ValueError("cover centers must be pairwise distinct")
        object.__setattr__(self, "centers", centers)

    @property
    def num_centers(self) -> int:
        return self.centers.shape[0]

    def distance_to_nearest(self, point: np.ndarray) -> float:
        point = np.asarray(point, dtype=np.float64).reshape(-1)
        return float(np.min(np.linalg.norm(self.centers - point, axis=1)))

    def contains(self, point: np.ndarray) -> bool:
        return self.distance_to_nearest(point) <= self.radius


def greedy_cover(points: np.ndarray, radius: float) -> SphereCover:
    """Greedy sphere cover of a point cloud: keep each point not yet covered.

    Utility for demo data; the constructions themselves take the cover as
    given.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    chosen: list[np.ndarray] = []
    for p in points:
        if not chosen or min(np.linalg.norm(p - c) for c in chosen) > radius:
            chosen.append(p)
    return SphereCover(centers=np.array(chosen), radius=radius)


def build_small_region(f: TargetFunction, cover: SphereCover, d: int, n: int,
                       temperature: float) -> ConstructedApproximator:
    """Same weight synthesis as the grid constructor, anchored on the cover."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    return build_from_centers(f, cover.centers, d, n, temperature,
                              "lipschitz-cover")


def count_trainable_params(approx: ConstructedApproximator) -> int:
    """Number of network entries that depend on the target or its domain.

    Per-layer tally: the lifting layer wires each of the d*n anchor
    coordinates once per T/E half (2*d*n*N_x); W_K holds the d-fold repeated
    squared-norm row in both halves (2*d*N_x) plus the ln T / ln E tables
    (2*d*n*N_x); W_O holds the n-entry output-scale diagonal.  Everything in
    W_Q and W_V is a constant or the shared temperature.
    """
    if approx.kind != "lipschitz-cover":
        raise ValueError(f"parameter count is defined for covers, got {approx.kind!r}")
    n_x = approx.centers.shape[0]
    d, n = approx.d, approx.n
    linear_params = 2 * d * n * n_x
    wk_params = 2 * d * n_x + 2 * d * n * n_x
    wo_params = n
    return linear_params + wk_params + wo_params
