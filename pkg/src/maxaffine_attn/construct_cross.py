"""Exact weight synthesis for the cross-attention approximator.

The paired-input construction merges one grid partition per input domain into
a product partition: the score matrix is indexed by anchor pairs (i, j), the
pair logit is the sum of the two per-side affine scores, and the value table
holds the target evaluated on every anchor pair.  Two separate sum-of-linear
layers lift the key-side and query-side sequences; everything else mirrors
the self-attention construction.
"""

from __future__ import annotations

import numpy as np

from .attention import AttentionWeights, SumLinear, apply_sum_linear, cross_attention
from .construct_self import (
    ConstructedApproximator,
    GridSpec,
    TargetFunction,
    center_to_matrix,
    compute_et,
    grid_centers,
)
from .linalg import ShapeError

CROSS_GRID_CAP = 256


def build_universal_cross(f: TargetFunction, spec: GridSpec,
                          temperature: float) -> ConstructedApproximator:
    """Universal approximator for a two-argument f on paired grid domains.

    Both arguments share the domain [-D, D]^(d x n) and the same grid.  The
    network output collapses to the softmax average of f over anchor pairs,
    with pair logits R(v_i . Zk~ - |v_i|^2/2 + v_j . Zq~ - |v_j|^2/2).
    """
    if f.arity != 2:
        raise ValueError("cross constructor needs a two-argument target")
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    d, n = spec.d, spec.n
    centers = grid_centers(spec, cap=CROSS_GRID_CAP)
    g = centers.shape[0]
    dg2 = d * g * g
    width = 2 * dg2
    if width < n:
        raise ShapeError(f"score width {width} cannot host n={n} output tokens")

    anchors = [center_to_matrix(c, d, n) for c in centers]
    ln_t = np.empty((g, g, d, n))
    ln_e = np.empty((g, g, d, n))
    for i in range(g):
        for j in range(g):
            e_ij, t_ij = compute_et(f, anchors[i], anchors[j])
            ln_t[i, j] = np.log(t_ij)
            ln_e[i, j] = np.log(e_ij)

    # Key-side layer: identity on top, the row [X_K X_K] of d*g-fold repeated
    # dot products v_i . Zk~ at the bottom.
    terms_k = []
    for m in range(d):
        p = np.zeros((1 + width, d))
        p[width, m] = 1.0
        q = np.zeros((n, width))
        for k in range(n):
            row = np.repeat(centers[:, k * d + m], d * g)
            q[k, :dg2] = row
            q[k, dg2:] = row
        terms_k.append((p, q))
    bias_k = np.zeros((1 + width, width))
    bias_k[:width, :] = np.eye(width)
    linear_k = SumLinear(terms=tuple(terms_k), bias=bias_k)

    # Query-side layer: the G x n block of dot products v_j . Zq~ on top of an
    # identity block, one P Z Q term per token.
    terms_q = []
    for k in range(n):
        p = np.zeros((g + n, d))
        p[:g, :] = centers[:, k * d:(k + 1) * d]
        q = np.zeros((n, width))
        q[k, :n] = 1.0
        terms_q.append((p, q))
    bias_q = np.zeros((g + n, width))
    bias_q[g:, :n] = np.eye(n)
    linear_q = SumLinear(terms=tuple(terms_q), bias=bias_q)

    # Column c of the score matrix decodes to (key anchor i, query anchor j,
    # coordinate s) with i the slowest index, identically in both halves.
    cols = np.arange(dg2)
    i_idx = cols // (d * g)
    j_idx = (cols % (d * g)) // d
    s_idx = cols % d

    w_k = np.zeros((2 + g + n, 1 + width))
    w_k[0, width] = 1.0
    half_sqnorm = 0.5 * np.sum(centers**2, axis=1)
    pair_norms = -(half_sqnorm[i_idx] + half_sqnorm[j_idx])
    w_k[1, :dg2] = pair_norms
    w_k[1, dg2:width] = pair_norms
    w_k[2 + j_idx, cols] = temperature
    w_k[2 + j_idx, dg2 + cols] = temperature
    w_k[2 + g:2 + g + n, :dg2] = ln_t[i_idx, j_idx, s_idx, :].T
    w_k[2 + g:2 + g + n, dg2:width] = ln_e[i_idx, j_idx, s_idx, :].T

    w_q = np.zeros((2 + g + n, g + n))
    w_q[0, g:] = temperature
    w_q[1, g:] = temperature
    w_q[2:2 + g, :g] = np.eye(g)
    w_q[2 + g:, g:] = np.eye(n)

    x2 = np.tile(np.eye(d), g * g)
    w_v = np.zeros((d, 1 + width))
    w_v[:, :dg2] = x2
    w_v[:, dg2:width] = -x2

    w_o = np.zeros((width, n))
    w_o[:n, :] = d * f.bound_b0 * np.eye(n)

    weights = AttentionWeights(w_k=w_k, w_q=w_q, w_v=w_v, w_o=w_o)
    return ConstructedApproximator(
        linear=linear_k, weights=weights, centers=centers, b0=f.bound_b0,
        temperature=temperature, kind="cross", d=d, n=n, linear_q=linear_q)


def evaluate_approximator_cross(approx: ConstructedApproximator, z_k: np.ndarray,
                                z_q: np.ndarray) -> np.ndarray:
    """Run both lifting layers, then the cross-attention matrix pipeline."""
    if approx.kind != "cross":
        raise ValueError("approximator was not built for cross-attention")
    lifted_k = apply_sum_linear(approx.linear, z_k)
    lifted_q = apply_sum_linear(approx.linear_q, z_q)
    return cross_attention(approx.weights, lifted_k, lifted_q)
