"""Closed-form evaluators and Monte Carlo error estimators.

The constructions in this package provably collapse to a softmax-weighted
average of target values at the anchor points.  This module computes that
average directly from the anchors, without any attention matrices, and
provides the seeded samplers and sup/L_p error estimates used to check the
matrix pipeline against it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .construct_cover import SphereCover
from .construct_self import TargetFunction, center_to_matrix
from .linalg import softmax_columns


@dataclass(frozen=True)
class ErrorReport:
    """Result of one Monte Carlo error run."""

    sup_error: float
    lp_error: float
    p: float
    samples: int
    out_of_cover: int
    seed: int
    runtime_ms: float
    lp_standard_error: float = 0.0


def _flatten(z: np.ndarray) -> np.ndarray:
    return np.asarray(z, dtype=np.float64).reshape(-1, order="F")


def softmax_anchor_weights(centers: np.ndarray, temperature: float,
                           z_flat: np.ndarray) -> np.ndarray:
    """Softmax over anchors of temperature * (v_j . z - |v_j|^2 / 2)."""
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    z_flat = np.asarray(z_flat, dtype=np.float64).reshape(-1)
    logits = temperature * (centers @ z_flat - 0.5 * np.sum(centers**2, axis=1))
    return softmax_columns(logits.reshape(-1, 1)).reshape(-1)


def target_values_at_centers(f: TargetFunction, centers: np.ndarray,
                             d: int, n: int) -> np.ndarray:
    """f evaluated at every anchor, as a (G, d, n) table."""
    centers = np.atleast_2d(centers)
    return np.array([f(center_to_matrix(c, d, n)) for c in centers])


def target_values_at_center_pairs(f: TargetFunction, centers: np.ndarray,
                                  d: int, n: int) -> np.ndarray:
    """f evaluated at every anchor pair, as a (G, G, d, n) table."""
    centers = np.atleast_2d(centers)
    g = centers.shape[0]
    anchors = [center_to_matrix(c, d, n) for c in centers]
    out = np.empty((g, g, d, n))
    for i in range(g):
        for j in range(g):
            out[i, j] = f(anchors[i], anchors[j])
    return out


def closed_form_self(f: TargetFunction, centers: np.ndarray, temperature: float,
                     z: np.ndarray, center_values: np.ndarray | None = None
                     ) -> np.ndarray:
    """Sum_j w_j(Z) f(v_j~) with softmax anchor weights w."""
    z = np.asarray(z, dtype=np.float64)
    d, n = z.shape
    if center_values is None:
        center_values = target_values_at_centers(f, centers, d, n)
    w = softmax_anchor_weights(centers, temperature, _flatten(z))
    return np.tensordot(w, center_values, axes=(0, 0))


def closed_form_self_batch(centers: np.ndarray, center_values: np.ndarray,
                           temperature: float, zs: np.ndarray) -> np.ndarray:
    """Vectorized closed form over a batch of inputs (S, d, n)."""
    centers = np.atleast_2d(centers)
    zs = np.asarray(zs, dtype=np.float64)
    flat = zs.transpose(0, 2, 1).reshape(zs.shape[0], -1)
    logits = temperature * (centers @ flat.T
                            - 0.5 * np.sum(centers**2, axis=1)[:, None])
    w = softmax_columns(logits)
    return np.einsum("gs,gdn->sdn", w, center_values)


def pair_anchor_weights(centers: np.ndarray, temperature: float,
                        zk_flat: np.ndarray, zq_flat: np.ndarray) -> np.ndarray:
    """Softmax weights over anchor pairs, returned as a (G, G) array.

    The pair logit is the sum of the two per-side affine scores, so the
    weights factor exactly into the outer product of two per-side softmaxes.
    """
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    half = 0.5 * np.sum(centers**2, axis=1)
    lk = temperature * (centers @ np.asarray(zk_flat, dtype=np.float64) - half)
    lq = temperature * (centers @ np.asarray(zq_flat, dtype=np.float64) - half)
    logits = lk[:, None] + lq[None, :]
    g = centers.shape[0]
    return softmax_columns(logits.reshape(-1, 1)).reshape(g, g)


def closed_form_cross(f: TargetFunction, centers: np.ndarray, temperature: float,
                      z_k: np.ndarray, z_q: np.ndarray,
                      center_values: np.ndarray | None = None) -> np.ndarray:
    """Sum_ij w_ij(Z_K, Z_Q) f(v_i~, v_j~) with pair softmax weights."""
    z_k = np.asarray(z_k, dtype=np.float64)
    d, n = z_k.shape
    if center_values is None:
        center_values = target_values_at_center_pairs(f, centers, d, n)
    w = pair_anchor_weights(centers, temperature, _flatten(z_k), _flatten(z_q))
    return np.tensordot(w, center_values, axes=([0, 1], [0, 1]))


def nearest_center(centers: np.ndarray, z_flat: np.ndarray) -> int:
    """Smallest index attaining the minimum 2-norm distance to z."""
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    z_flat = np.asarray(z_flat, dtype=np.float64).reshape(-1)
    return int(np.argmin(np.sum((centers - z_flat)**2, axis=1)))


@dataclass(frozen=True)
class UniformSampler:
    """Uniform draws from [-D, D]^(d x n)."""

    half_width: float
    d: int
    n: int
    arity: int = 1

    @property
    def volume(self) -> float:
        return (2.0 * self.half_width) ** (self.d * self.n)

    def sample(self, rng: np.random.Generator, count: int):
        return rng.uniform(-self.half_width, self.half_width,
                           size=(count, self.d, self.n))


@dataclass(frozen=True)
class UniformPairSampler:
    """Independent uniform draws for both inputs of a paired target."""

    half_width: float
    d: int
    n: int
    arity: int = 2

    @property
    def volume(self) -> float:
        return (2.0 * self.half_width) ** (2 * self.d * self.n)

    def sample(self, rng: np.random.Generator, count: int):
        shape = (count, self.d, self.n)
        return (rng.uniform(-self.half_width, self.half_width, size=shape),
                rng.uniform(-self.half_width, self.half_width, size=shape))


@dataclass(frozen=True)
class CoverSampler:
    """Uniform-per-sphere draws restricted to a sphere cover.

    Picks a sphere uniformly, then a point uniformly inside it, so every
    sample lies in the cover.  The union volume is not tracked; use this for
    sup-norm runs only.
    """

    cover: SphereCover
    d: int
    n: int
    arity: int = 1

    @property
    def volume(self) -> None:
        return None

    def sample(self, rng: np.random.Generator, count: int):
        dn = self.d * self.n
        idx = rng.integers(0, self.cover.num_centers, size=count)
        direction = rng.normal(size=(count, dn))
        direction /= np.linalg.norm(direction, axis=1, keepdims=True)
        radii = self.cover.radius * rng.uniform(size=count) ** (1.0 / dn)
        flat = self.cover.centers[idx] + radii[:, None] * direction
        return flat.reshape(count, self.n, self.d).transpose(0, 2, 1)


def _sample_args(sampler, rng, count):
    drawn = sampler.sample(rng, count)
    if getattr(sampler, "arity", 1) == 2:
        return list(zip(drawn[0], drawn[1]))
    return [(z,) for z in drawn]


def sup_error_estimate(f: TargetFunction, evaluator, sampler, num_samples: int,
                       seed: int, cover: SphereCover | None = None) -> ErrorReport:
    """Max over seeded samples of the entrywise deviation |f - evaluator|.

    With a cover given, samples outside every sphere are excluded from the
    max and counted separately (the bound being checked says nothing there).
    """
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    sup = 0.0
    skipped = 0
    for args in _sample_args(sampler, rng, num_samples):
        if cover is not None and not cover.contains(_flatten(args[0])):
            skipped += 1
            continue
        diff = f(*args) - evaluator(*args)
        sup = max(sup, float(np.max(np.abs(diff))) if diff.size else 0.0)
    runtime_ms = 1e3 * (time.perf_counter() - start)
    return ErrorReport(sup_error=sup, lp_error=float("nan"), p=float("nan"),
                       samples=num_samples, out_of_cover=skipped, seed=seed,
                       runtime_ms=runtime_ms)


def lp_error_estimate(f: TargetFunction, evaluator, sampler, num_samples: int,
                      p: float, seed: int) -> ErrorReport:
    """Monte Carlo (volume * mean |f - evaluator|_p^p)^(1/p).

    The entrywise p-th powers are accumulated per sample and reduced with
    numpy's pairwise summation.  A delta-method standard error for the final
    estimate is attached to the report.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    volume = sampler.volume
    if volume is None:
        raise ValueError("sampler does not track a domain volume")
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    powers = np.empty(num_samples)
    for i, args in enumerate(_sample_args(sampler, rng, num_samples)):
        diff = f(*args) - evaluator(*args)
        powers[i] = np.sum(np.abs(diff) ** p)
    mean = float(np.sum(powers) / num_samples)
    lp = (volume * mean) ** (1.0 / p)
    if mean > 0 and num_samples > 1:
        se_mean = float(np.std(powers, ddof=1)) / np.sqrt(num_samples)
        se_lp = volume ** (1.0 / p) * mean ** (1.0 / p - 1.0) * se_mean / p
    else:
        se_lp = 0.0
    runtime_ms = 1e3 * (time.perf_counter() - start)
    return ErrorReport(sup_error=float("nan"), lp_error=float(lp), p=p,
                       samples=num_samples, out_of_cover=0, seed=seed,
                       runtime_ms=runtime_ms, lp_standard_error=float(se_lp))
