"""Single-head softmax attention and the prepended sum-of-linear layer.

The attention here is the bare map

    W_V Z . Softmax((W_K Z)^T W_Q Z) . W_O

with column-wise softmax and no 1/sqrt(d) scaling: sharpness is controlled
by a temperature coefficient embedded in the weights themselves.  The score
matrix is exposed separately because several constructions make claims about
Softmax(K^T Q) rather than about the final output.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import ShapeError, as_matrix, softmax_columns


@dataclass(frozen=True)
class SumLinear:
    """Layer Z -> sum_i P_i Z Q_i + bias."""

    terms: tuple
    bias: np.ndarray

    def __post_init__(self):
        terms = tuple((as_matrix(p, f"P[{i}]"), as_matrix(q, f"Q[{i}]"))
                      for i, (p, q) in enumerate(self.terms))
        bias = as_matrix(self.bias, "bias")
        for i, (p, q) in enumerate(terms):
            if p.shape[0] != bias.shape[0] or q.shape[1] != bias.shape[1]:
                raise ShapeError(
                    f"term {i} maps to {p.shape[0]}x{q.shape[1]}, "
                    f"bias is {bias.shape[0]}x{bias.shape[1]}")
            if p.shape[1] != terms[0][0].shape[1] or q.shape[0] != terms[0][1].shape[0]:
                raise ShapeError(f"term {i} does not share the input shape of term 0")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "bias", bias)


@dataclass(frozen=True)
class AttentionWeights:
    """The four weight matrices of one single-head attention.

    w_k and w_q share the attention dimension (their row count).  w_v may be
    rectangular; w_o has one column per output token.
    """

    w_k: np.ndarray
    w_q: np.ndarray
    w_v: np.ndarray
    w_o: np.ndarray

    def __post_init__(self):
        for name in ("w_k", "w_q", "w_v", "w_o"):
            object.__setattr__(self, name, as_matrix(getattr(self, name), name))
        if self.w_k.shape[0] != self.w_q.shape[0]:
            raise ShapeError(
                f"w_k rows {self.w_k.shape[0]} != w_q rows {self.w_q.shape[0]}")


def _conformable(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")


def apply_sum_linear(layer: SumLinear, z: np.ndarray) -> np.ndarray:
    """Evaluate sum_i P_i Z Q_i + bias."""
    z = as_matrix(z, "input")
    out = layer.bias.copy()
    for p, q in layer.terms:
        _conformable(p, z)
        _conformable(z, q)
        out += (p @ z) @ q
    return as_matrix(out, "sum-linear output")


def attention_scores(w: AttentionWeights, z_k: np.ndarray,
                     z_q: np.ndarray) -> np.ndarray:
    """Softmax((W_K Z_K)^T W_Q Z_Q), every column a probability vector."""
    z_k = as_matrix(z_k, "key input")
    z_q = as_matrix(z_q, "query input")
    _conformable(w.w_k, z_k)
    _conformable(w.w_q, z_q)
    return softmax_columns((w.w_k @ z_k).T @ (w.w_q @ z_q))


def self_attention(w: AttentionWeights, z: np.ndarray) -> np.ndarray:
    """W_V Z Softmax((W_K Z)^T W_Q Z) W_O."""
    return cross_attention(w, z, z)


def cross_attention(w: AttentionWeights, z_k: np.ndarray,
                    z_q: np.ndarray) -> np.ndarray:
    """W_V Z_K Softmax((W_K Z_K)^T W_Q Z_Q) W_O."""
    z_k = as_matrix(z_k, "key input")
    z_q = as_matrix(z_q, "query input")
    scores = attention_scores(w, z_k, z_q)
    _conformable(w.w_v, z_k)
    _conformable(scores, w.w_o)
    out = ((w.w_v @ z_k) @ scores) @ w.w_o
    return as_matrix(out, "attention output")
