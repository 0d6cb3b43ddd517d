"""Max-affine functions and the domain partitions they induce.

A max-affine function is the pointwise maximum of finitely many affine
components a_i . x + b_i.  Each input point is assigned to the cell of the
component attaining the maximum (ties broken to the smallest index), and the
margin records the gap to the runner-up component.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class MaxAffine:
    """Coefficients of a max-affine function.

    ``coeffs`` has one row per affine component, ``offsets`` one scalar each.
    """

    coeffs: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=np.float64))
        offsets = np.asarray(self.offsets, dtype=np.float64).reshape(-1)
        if coeffs.shape[0] != offsets.size:
            raise ValueError(
                f"{coeffs.shape[0]} coefficient rows but {offsets.size} offsets")
        if coeffs.shape[0] < 1:
            raise ValueError("need at least one affine component")
        if not (np.all(np.isfinite(coeffs)) and np.all(np.isfinite(offsets))):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "offsets", offsets)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def n_components(self) -> int:
        return self.coeffs.shape[0]

    def component_values(self, x: np.ndarray) -> np.ndarray:
        """All affine component values at ``x`` (length ``n_components``)."""
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.size != self.dim:
            raise ValueError(f"point has dimension {x.size}, expected {self.dim}")
        return self.coeffs @ x + self.offsets


@dataclass(frozen=True)
class PartitionReport:
    """Evaluation of a max-affine function at one point."""

    value: float
    cell_index: int
    margin: float = field(default=0.0)


def evaluate(ma: MaxAffine, x: np.ndarray) -> PartitionReport:
    """Value, active cell (smallest maximizing index) and margin at ``x``.

    The margin is the gap between the largest and second-largest component
    values; it is defined as 0 for a single-component function.
    """
    values = ma.component_values(x)
    cell = int(np.argmax(values))
    if values.size == 1:
        return PartitionReport(float(values[0]), 0, 0.0)
    top = values[cell]
    rest = np.delete(values, cell)
    return PartitionReport(float(top), cell, float(top - rest.max()))


def indicator(ma: MaxAffine, x: np.ndarray) -> np.ndarray:
    """One-hot vector marking the active cell at ``x``."""
    report = evaluate(ma, x)
    e = np.zeros(ma.n_components)
    e[report.cell_index] = 1.0
    return e


def random_maxaffine(seed: int, n_components: int, dim: int,
                     coeff_range: float) -> MaxAffine:
    """Seeded max-affine instance with coefficients uniform in +-coeff_range."""
    if n_components < 1:
        raise ValueError("n_components must be >= 1")
    if coeff_range < 0:
        raise ValueError("coeff_range must be >= 0")
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-coeff_range, coeff_range, size=(n_components, dim))
    offsets = rng.uniform(-coeff_range, coeff_range, size=n_components)
    return MaxAffine(coeffs, offsets)
