"""How a single attention head reads off a max-affine partition.

A max-affine function (the upper envelope of a few affine pieces) carves its
domain into cells.  This script builds, with pencil-and-paper weights and no
training, an attention head whose score columns point at the cell containing
each input token, and a second head that outputs a chosen value per cell.
"""

import numpy as np

from maxaffine_attn import (
    apply_sum_linear,
    build_indicator_attention,
    build_reassign_attention,
    evaluate,
    indicator,
    random_maxaffine,
    self_attention,
)

rng = np.random.default_rng(7)

# a random upper envelope of 5 affine pieces on the plane
ma = random_maxaffine(seed=7, n_components=5, dim=2, coeff_range=1.0)
print("max-affine components (a_i | b_i):")
for a, b in zip(ma.coeffs, ma.offsets):
    print(f"  {a[0]:+.3f} x1 {a[1]:+.3f} x2 {b:+.3f}")

# pick tokens that sit safely inside a cell (margin keeps us off boundaries)
tokens = []
while len(tokens) < 4:
    x = rng.uniform(-1, 1, size=2)
    if evaluate(ma, x).margin >= 0.2:
        tokens.append(x)
x_mat = np.array(tokens).T

# the indicator head: score column i ~ one-hot cell marker of token i
linear, weights, temp = build_indicator_attention(ma, n=4, epsilon=1e-3,
                                                  delta_min=0.2)
scores = self_attention(weights, apply_sum_linear(linear, x_mat))
print(f"\nindicator head (temperature {temp:.2f}); columns vs true cells:")
for i, x in enumerate(tokens):
    true_cell = evaluate(ma, x).cell_index
    print(f"  token {i}: cell {true_cell}, score column "
          f"{np.array2string(scores[:, i], precision=3, suppress_small=True)}, "
          f"max dev {np.max(np.abs(scores[:, i] - indicator(ma, x))):.1e}")

# the reassignment head: route an arbitrary value vector to each cell
cell_values = rng.uniform(-2, 2, size=(5, 3))
linear, weights, _ = build_reassign_attention(ma, cell_values, n=4,
                                              epsilon=1e-3, delta_min=0.2)
out = self_attention(weights, apply_sum_linear(linear, x_mat))
print("\nreassignment head: output column vs the cell's assigned value:")
for i, x in enumerate(tokens):
    want = cell_values[evaluate(ma, x).cell_index]
    print(f"  token {i}: max dev {np.max(np.abs(out[:, i] - want)):.1e}")
