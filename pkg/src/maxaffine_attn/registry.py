"""Built-in target functions for construction runs and demos.

Every entry builds a :class:`TargetFunction` whose sup bound is inflated by a
factor 1 + 1e-3 over the tightest analytic bound (with a 1e-6 floor for the
identically-zero case), so the log tables of the constructions stay finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .construct_self import TargetFunction
from .maxaffine import MaxAffine

BOUND_INFLATION = 1.0 + 1e-3
BOUND_FLOOR = 1e-6

STEP1D_BREAKPOINTS = (-0.5, 0.25)
STEP1D_LEVELS = (-0.75, 0.5, -0.25)


def _inflate(bound: float) -> float:
    return max(BOUND_INFLATION * bound, BOUND_FLOOR)


@dataclass(frozen=True)
class FunctionRegistryEntry:
    """A named target-function family."""

    name: str
    arity: int
    description: str
    builder: Callable
    required_d: int | None = None
    required_n: int | None = None
    lipschitz: float | None = None


def _build_const(d, n, seed, arg, half_width):
    c = float(arg) if arg is not None else 0.0
    return TargetFunction(
        evaluator=lambda z: np.full_like(np.asarray(z, dtype=np.float64), c),
        bound_b0=_inflate(abs(c)),
        descriptor=f"const:{c}", lipschitz=0.0)


def _build_linear(d, n, seed, arg, half_width):
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-0.5, 0.5, size=(d, n, d * n))
    offsets = rng.uniform(-0.5, 0.5, size=(d, n))
    bound = float(np.max(np.sum(np.abs(coeffs), axis=2) * half_width
                         + np.abs(offsets)))
    lip = float(np.max(np.linalg.norm(coeffs, axis=2)))

    def evaluator(z):
        zt = np.asarray(z, dtype=np.float64).reshape(-1, order="F")
        return coeffs @ zt + offsets

    return TargetFunction(evaluator=evaluator, bound_b0=_inflate(bound),
                          descriptor=f"linear:seed{seed}", lipschitz=lip)


def _build_sinprod(d, n, seed, arg, half_width):
    def evaluator(z):
        z = np.asarray(z, dtype=np.float64)
        value = math.sin(math.pi * z[0, 0]) * math.cos(math.pi * z[0, 1])
        return np.full((1, 2), value)

    return TargetFunction(evaluator=evaluator, bound_b0=_inflate(1.0),
                          descriptor="sinprod",
                          lipschitz=math.pi * math.sqrt(2.0))


def _step1d_value(x: float) -> float:
    # breakpoints belong to the left piece, matching the smallest-index
    # tie-break of the max-affine partition in step1d_maxaffine
    idx = sum(x > t for t in STEP1D_BREAKPOINTS)
    return STEP1D_LEVELS[idx]


def _build_step1d(d, n, seed, arg, half_width):
    def evaluator(z):
        return np.array([[_step1d_value(float(np.asarray(z).reshape(-1)[0]))]])

    return TargetFunction(evaluator=evaluator,
                          bound_b0=_inflate(max(abs(v) for v in STEP1D_LEVELS)),
                          descriptor="step1d", lipschitz=math.inf)


def step1d_maxaffine() -> tuple[MaxAffine, np.ndarray]:
    """A max-affine function whose partition cells are the step1d pieces.

    Consecutive components have increasing slopes and cross exactly at the
    step breakpoints, so cell i of the induced partition is the i-th constant
    piece.  Returns the function and the per-cell levels.
    """
    slopes = np.arange(len(STEP1D_LEVELS), dtype=np.float64)
    offsets = np.zeros(len(STEP1D_LEVELS))
    for i, t in enumerate(STEP1D_BREAKPOINTS):
        offsets[i + 1] = offsets[i] + (slopes[i] - slopes[i + 1]) * t
    ma = MaxAffine(slopes.reshape(-1, 1), offsets)
    return ma, np.asarray(STEP1D_LEVELS, dtype=np.float64).reshape(-1, 1)


def _build_randlip(d, n, seed, arg, half_width):
    rng = np.random.default_rng(seed)
    waves = 4
    amps = rng.uniform(-0.5, 0.5, size=(d, n, waves)) / waves
    freqs = rng.uniform(-2.0, 2.0, size=(d, n, waves, d * n))
    phases = rng.uniform(0.0, 2.0 * math.pi, size=(d, n, waves))
    bound = float(np.max(np.sum(np.abs(amps), axis=2)))
    lip = float(np.max(np.sum(np.abs(amps) * np.linalg.norm(freqs, axis=3),
                              axis=2)))

    def evaluator(z):
        zt = np.asarray(z, dtype=np.float64).reshape(-1, order="F")
        return np.sum(amps * np.sin(freqs @ zt + phases), axis=2)

    return TargetFunction(evaluator=evaluator, bound_b0=_inflate(bound),
                          descriptor=f"randlip:seed{seed}", lipschitz=lip)


def _build_addpair(d, n, seed, arg, half_width):
    return TargetFunction(
        evaluator=lambda zk, zq: np.asarray(zk, dtype=np.float64)
        + np.asarray(zq, dtype=np.float64),
        bound_b0=_inflate(2.0 * half_width),
        descriptor="addpair", arity=2, lipschitz=math.sqrt(2.0))


_ENTRIES = (
    FunctionRegistryEntry(
        name="const", arity=1, builder=_build_const, lipschitz=0.0,
        description="constant function const:c, exactly reproducible"),
    FunctionRegistryEntry(
        name="linear", arity=1, builder=_build_linear,
        description="seeded affine map of the flattened input"),
    FunctionRegistryEntry(
        name="sinprod", arity=1, builder=_build_sinprod,
        required_d=1, required_n=2, lipschitz=math.pi * math.sqrt(2.0),
        description="sin(pi z11) cos(pi z12) on d=1, n=2"),
    FunctionRegistryEntry(
        name="step1d", arity=1, builder=_build_step1d,
        required_d=1, required_n=1, lipschitz=math.inf,
        description="1-D three-level step function for the indicator demo"),
    FunctionRegistryEntry(
        name="randlip", arity=1, builder=_build_randlip,
        description="seeded random Fourier sum with computable Lipschitz bound"),
    FunctionRegistryEntry(
        name="addpair", arity=2, builder=_build_addpair,
        lipschitz=math.sqrt(2.0),
        description="entrywise sum of the two input sequences"),
)


def registry_functions() -> list[FunctionRegistryEntry]:
    """All built-in target-function families."""
    return list(_ENTRIES)


def get_function(spec_string: str, d: int, n: int, seed: int,
                 half_width: float) -> tuple[TargetFunction, FunctionRegistryEntry]:
    """Resolve "name" or "name:arg" into a built TargetFunction.

    Raises KeyError for unknown names and ValueError when the entry pins a
    dimension combination that disagrees with (d, n).
    """
    name, _, arg = spec_string.partition(":")
    for entry in _ENTRIES:
        if entry.name == name:
            if entry.required_d is not None and entry.required_d != d:
                raise ValueError(f"{name} requires d={entry.required_d}, got {d}")
            if entry.required_n is not None and entry.required_n != n:
                raise ValueError(f"{name} requires n={entry.required_n}, got {n}")
            f = entry.builder(d, n, seed, arg if arg else None, half_width)
            return f, entry
    raise KeyError(f"unknown function {name!r}; known: "
                   + ", ".join(e.name for e in _ENTRIES))
