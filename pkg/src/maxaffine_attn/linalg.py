"""Dense real matrix helpers: products, block assembly, stable column softmax.

All public functions accept and return 2-D float64 ``numpy.ndarray`` objects
and reject non-finite values, so downstream code can assume clean inputs.
"""

from __future__ import annotations

import numpy as np


class ShapeError(ValueError):
    """Raised when operand shapes are not conformable."""


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D float64 array and check finiteness."""
    m = np.asarray(values, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got ndim={m.ndim}")
    # one-pass screen: a non-finite entry makes the sum non-finite; a
    # non-finite sum of finite entries (overflow) is ruled out by the rescan
    if m.size and not np.isfinite(m.sum()) and not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit conformability check."""
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def softmax_columns(m: np.ndarray) -> np.ndarray:
    """Column-wise softmax with max-subtraction.

    Each output column is a probability vector; entries as large as +-1e6
    are safe because the per-column maximum is subtracted before exp.
    """
    m = as_matrix(m, "softmax input")
    shifted = m - m.max(axis=0, keepdims=True)
    np.exp(shifted, out=shifted)
    shifted /= shifted.sum(axis=0, keepdims=True)
    return shifted


def flatten_sequence(z: np.ndarray) -> np.ndarray:
    """Stack the columns of a d x n matrix into a (dn) x 1 column vector."""
    z = as_matrix(z, "sequence")
    return z.reshape(-1, order="F").reshape(-1, 1)


def unflatten_sequence(zt: np.ndarray, d: int, n: int) -> np.ndarray:
    """Inverse of :func:`flatten_sequence`."""
    zt = np.asarray(zt, dtype=np.float64).reshape(-1)
    if zt.size != d * n:
        raise ShapeError(f"cannot reshape length {zt.size} into {d}x{n}")
    return zt.reshape(d, n, order="F")


def assemble_blocks(layout) -> np.ndarray:
    """Concatenate a 2-D grid of blocks into one matrix.

    Blocks in each layout row must share row counts and blocks in each layout
    column must share column counts; the offending block is named otherwise.
    """
    rows = [[as_matrix(b, f"block ({i},{j})") for j, b in enumerate(row)]
            for i, row in enumerate(layout)]
    if not rows or not rows[0]:
        raise ShapeError("layout must contain at least one block")
    ncols = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise ShapeError(f"layout row {i} has {len(row)} blocks, expected {ncols}")
        for j, b in enumerate(row):
            if b.shape[0] != row[0].shape[0]:
                raise ShapeError(
                    f"block ({i},{j}) has {b.shape[0]} rows, "
                    f"expected {row[0].shape[0]} from block ({i},0)")
            if b.shape[1] != rows[0][j].shape[1]:
                raise ShapeError(
                    f"block ({i},{j}) has {b.shape[1]} cols, "
                    f"expected {rows[0][j].shape[1]} from block (0,{j})")
    return np.block([[b for b in row] for row in rows])
