"""Constructive single-head attention approximators over max-affine partitions.

The package synthesizes exact attention weights (no training) that make a
single softmax attention layer, prepended with a sum-of-linear layer,
approximate a given target function, and verifies the synthesized networks
against independent closed-form oracles.
"""

from .attention import (
    AttentionWeights,
    SumLinear,
    apply_sum_linear,
    attention_scores,
    cross_attention,
    self_attention,
)
from .construct_cover import (
    SphereCover,
    build_small_region,
    count_trainable_params,
    greedy_cover,
)
from .construct_cross import build_universal_cross, evaluate_approximator_cross
from .construct_self import (
    BoundViolation,
    CapExceeded,
    ConstructedApproximator,
    GridSpec,
    TargetFunction,
    build_indicator_attention,
    build_reassign_attention,
    build_universal_self,
    center_to_matrix,
    choose_temperature,
    compute_et,
    evaluate_approximator,
    grid_centers,
    indicator_temperature,
)
from .linalg import (
    ShapeError,
    assemble_blocks,
    flatten_sequence,
    matmul,
    softmax_columns,
    unflatten_sequence,
)
from .maxaffine import MaxAffine, PartitionReport, evaluate, indicator, random_maxaffine
from .oracle import (
    CoverSampler,
    ErrorReport,
    UniformPairSampler,
    UniformSampler,
    closed_form_cross,
    closed_form_self,
    closed_form_self_batch,
    lp_error_estimate,
    nearest_center,
    pair_anchor_weights,
    softmax_anchor_weights,
    sup_error_estimate,
    target_values_at_center_pairs,
    target_values_at_centers,
)
from .registry import FunctionRegistryEntry, get_function, registry_functions

__version__ = "0.1.0"
