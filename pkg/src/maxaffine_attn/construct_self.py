"""Exact weight synthesis for self-attention approximators.

Three constructions live here, all sharing the same skeleton: a sum-of-linear
preprocessing layer tiles per-anchor dot products and an identity block into
the token matrix, W_K/W_Q turn the score matrix into a temperature-scaled
max-affine layout, and softmax then acts as a soft argmax over anchors.

* ``build_indicator_attention`` makes the score columns approximate the
  one-hot cell indicator of a given max-affine partition.
* ``build_reassign_attention`` additionally routes a per-cell value vector to
  the output.
* ``build_universal_self`` targets an arbitrary bounded function: anchors are
  uniform grid centers, and the network output provably collapses to the
  softmax-weighted average of the target values at those centers.  The log of
  the value table is embedded in W_K via the T/E split (T = 1 + f/B0,
  E = 2 - T), whose constant sum keeps every softmax denominator
  input-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .attention import AttentionWeights, SumLinear
from .linalg import ShapeError
from .maxaffine import MaxAffine

GRID_CAP = 65536


class CapExceeded(RuntimeError):
    """Anchor count exceeds the configured desk-scale cap."""

    def __init__(self, requested: int, limit: int):
        super().__init__(f"grid of {requested} centers exceeds cap {limit}")
        self.requested = requested
        self.limit = limit


class BoundViolation(ValueError):
    """A target function reached or exceeded its declared sup bound."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid over the input domain [-D, D]^(d x n).

    ``points_per_axis`` subdivides each of the d*n flattened coordinates, so
    the grid has points_per_axis**(d*n) centers.
    """

    half_width: float
    points_per_axis: int
    d: int
    n: int

    def __post_init__(self):
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.points_per_axis < 1 or self.d < 1 or self.n < 1:
            raise ValueError("points_per_axis, d and n must be >= 1")

    @property
    def num_centers(self) -> int:
        return self.points_per_axis ** (self.d * self.n)

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis


@dataclass(frozen=True)
class TargetFunction:
    """A bounded target map together with its strict sup bound.

    ``evaluator`` maps one d x n array (arity 1) or a pair of them (arity 2)
    to a d x n array.  ``bound_b0`` must strictly dominate the sup of |f|;
    every call re-checks this so a too-small bound fails loudly.
    """

    evaluator: Callable
    bound_b0: float
    descriptor: str
    arity: int = 1
    lipschitz: float | None = None

    def __post_init__(self):
        if self.bound_b0 <= 0:
            raise ValueError("bound_b0 must be positive")
        if self.arity not in (1, 2):
            raise ValueError("arity must be 1 or 2")

    def __call__(self, *zs: np.ndarray) -> np.ndarray:
        if len(zs) != self.arity:
            raise ValueError(f"{self.descriptor} takes {self.arity} inputs, got {len(zs)}")
        out = np.asarray(self.evaluator(*zs), dtype=np.float64)
        if out.shape != np.shape(zs[0]):
            raise ShapeError(
                f"{self.descriptor} returned shape {out.shape}, expected {np.shape(zs[0])}")
        if out.size and np.max(np.abs(out)) >= self.bound_b0:
            raise BoundViolation(
                f"|{self.descriptor}| reached {np.max(np.abs(out))} >= bound {self.bound_b0}")
        return out


@dataclass(frozen=True)
class ConstructedApproximator:
    """A synthesized network plus the anchor metadata its oracle needs."""

    linear: SumLinear
    weights: AttentionWeights
    centers: np.ndarray
    b0: float
    temperature: float
    kind: str
    d: int
    n: int
    linear_q: SumLinear | None = field(default=None)

    def __post_init__(self):
        centers = np.atleast_2d(np.asarray(self.centers, dtype=np.float64))
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.kind not in ("self", "cross", "lipschitz-cover"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if len(np.unique(centers, axis=0)) != len(centers):
            raise ValueError("centers must be pairwise distinct")
        object.__setattr__(self, "centers", centers)


def grid_centers(spec: GridSpec, cap: int = GRID_CAP) -> np.ndarray:
    """All grid centers as a (G, d*n) array.

    Center s has coordinates (2*D*k_i - D*P)/P where (k_1, ..., k_dn) are the
    base-P digits of s, k_1 least significant.
    """
    dn = spec.d * spec.n
    g = spec.num_centers
    if g > cap:
        raise CapExceeded(g, cap)
    p = spec.points_per_axis
    s = np.arange(g)
    digits = np.empty((g, dn), dtype=np.int64)
    for i in range(dn):
        digits[:, i] = (s // p**i) % p
    return (2.0 * spec.half_width * digits - spec.half_width * p) / p


def center_to_matrix(center: np.ndarray, d: int, n: int) -> np.ndarray:
    """Reshape a flat dn-vector anchor back into token-matrix form."""
    return np.asarray(center, dtype=np.float64).reshape(d, n, order="F")


def compute_et(f: TargetFunction, *anchor) -> tuple[np.ndarray, np.ndarray]:
    """The pair E = 1 - f/B0, T = 1 + f/B0 at one anchor, both positive.

    Takes one d x n anchor matrix, or two for a paired-input target.  E is
    computed as 2 - T so the sum E + T is exactly the constant 2 in floating
    point; that constant is what makes the softmax denominators of the full
    construction column-invariant.
    """
    fv = f(*anchor)
    t = 1.0 + fv / f.bound_b0
    e = 2.0 - t
    if np.any(t <= 0) or np.any(e <= 0):
        raise BoundViolation(
            f"E/T not strictly positive at anchor; |f| too close to bound {f.bound_b0}")
    return e, t


def choose_temperature(delta: float, b0: float, num_centers: int,
                       epsilon: float) -> float:
    """Smallest R with 2 * b0 * G * exp(-3 R delta^2 / 8) <= epsilon / 3."""
    if delta <= 0 or b0 <= 0 or num_centers <= 0 or epsilon <= 0:
        raise ValueError("all arguments must be positive")
    if epsilon >= 1:
        raise ValueError("epsilon must be < 1")
    return 8.0 / (3.0 * delta**2) * np.log(6.0 * b0 * num_centers / epsilon)


def indicator_temperature(n_components: int, epsilon: float, delta_min: float) -> float:
    """Temperature making every score column epsilon-close to one-hot.

    Derived from the two-logit tail bound (N-1) * exp(-R * margin) <= epsilon
    for tokens whose margin is at least ``delta_min``.  A single-component
    function needs no sharpening, so R = 1 there.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if delta_min <= 0:
        raise ValueError("delta_min must be positive")
    if n_components == 1:
        return 1.0
    return (np.log(n_components - 1) - np.log(epsilon)) / delta_min


def _indicator_parts(ma: MaxAffine, n: int, temperature: float):
    """Shared Linear/W_K/W_Q/W_O of the indicator and reassign constructions."""
    d = ma.dim
    nc = ma.n_components
    if nc < n:
        raise ValueError(f"need at least n={n} components, got {nc}")
    # Linear(X) = [[X, 0], [I_nc]]: one P Z Q term plus a constant block.
    p = np.zeros((d + nc, d))
    p[:d, :] = np.eye(d)
    q = np.zeros((n, nc))
    q[:, :n] = np.eye(n)
    bias = np.zeros((d + nc, nc))
    bias[d:, :] = np.eye(nc)
    linear = SumLinear(terms=((p, q),), bias=bias)

    # K = R [a_i; b_i] per column, Q = [x_i; 1] per token column.
    w_k = np.zeros((d + 1, d + nc))
    w_k[:d, d:] = ma.coeffs.T
    w_k[d, d:] = ma.offsets
    w_k *= temperature
    w_q = np.zeros((d + 1, d + nc))
    w_q[:d, :d] = np.eye(d)
    w_q[d, d:d + n] = 1.0
    w_o = np.zeros((nc, n))
    w_o[:n, :] = np.eye(n)
    return linear, w_k, w_q, w_o


def build_indicator_attention(ma: MaxAffine, n: int, epsilon: float,
                              delta_min: float):
    """Attention whose score columns approximate the partition indicator.

    For token sequences whose per-token margin is at least ``delta_min``,
    column i of Softmax(K^T Q) W_O is entrywise within ``epsilon`` of the
    one-hot indicator of the cell containing token i.  W_V is set to read the
    score block straight through, so ``self_attention`` returns exactly those
    indicator columns.
    """
    chosen_r = indicator_temperature(ma.n_components, epsilon, delta_min)
    linear, w_k, w_q, w_o = _indicator_parts(ma, n, chosen_r)
    w_v = np.zeros((ma.n_components, ma.dim + ma.n_components))
    w_v[:, ma.dim:] = np.eye(ma.n_components)
    weights = AttentionWeights(w_k=w_k, w_q=w_q, w_v=w_v, w_o=w_o)
    return linear, weights, chosen_r


def build_reassign_attention(ma: MaxAffine, cell_values, n: int, epsilon: float,
                             delta_min: float):
    """Attention mapping each token to the value assigned to its cell.

    ``cell_values`` lists one output vector per partition cell; outputs land
    within ``epsilon`` scaled by twice the value magnitude of the looked-up
    vector, so the indicator tolerance is tightened by max |V| internally.
    """
    values = np.atleast_2d(np.asarray(cell_values, dtype=np.float64))
    if values.shape[0] != ma.n_components:
        raise ValueError(
            f"{values.shape[0]} cell values for {ma.n_components} components")
    if values.size == 0:
        raise ValueError("cell_values must be non-empty")
    vmax = np.max(np.abs(values))
    inner_epsilon = epsilon / max(vmax, 1e-12) if vmax > 0 else epsilon
    inner_epsilon = min(inner_epsilon, 0.5)
    chosen_r = indicator_temperature(ma.n_components, inner_epsilon, delta_min)
    linear, w_k, w_q, w_o = _indicator_parts(ma, n, chosen_r)
    w_v = np.zeros((values.shape[1], ma.dim + ma.n_components))
    w_v[:, ma.dim:] = values.T
    weights = AttentionWeights(w_k=w_k, w_q=w_q, w_v=w_v, w_o=w_o)
    return linear, weights, chosen_r


def build_from_centers(f: TargetFunction, centers: np.ndarray, d: int, n: int,
                       temperature: float, kind: str) -> ConstructedApproximator:
    """Weight synthesis shared by the grid and sphere-cover constructors."""
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    g = centers.shape[0]
    if centers.shape[1] != d * n:
        raise ShapeError(f"centers have length {centers.shape[1]}, expected {d * n}")
    dg = d * g
    width = 2 * dg
    if width < n:
        raise ShapeError(f"score width {width} cannot host n={n} output tokens")

    e_tab = np.empty((g, d, n))
    t_tab = np.empty((g, d, n))
    for j in range(g):
        e_tab[j], t_tab[j] = compute_et(f, center_to_matrix(centers[j], d, n))
    ln_t = np.log(t_tab)
    ln_e = np.log(e_tab)

    # Linear(Z) = [[X0, X0], [I, 0], [0, I]] with X0 the per-center dot
    # products v_j . Z~ repeated d-fold; one P Z Q term per token row of Z.
    terms = []
    for m in range(d):
        p = np.zeros((1 + width, d))
        p[0, m] = 1.0
        q = np.zeros((n, width))
        for k in range(n):
            row = np.repeat(centers[:, k * d + m], d)
            q[k, :dg] = row
            q[k, dg:] = row
        terms.append((p, q))
    bias = np.zeros((1 + width, width))
    bias[1:, :] = np.eye(width)
    linear = SumLinear(terms=tuple(terms), bias=bias)

    # W_K rows: [1, 0...], the -|v|^2/2 row, then n rows of ln T / ln E.
    w_k = np.zeros((2 + n, 1 + width))
    w_k[0, 0] = 1.0
    half_sqnorm = np.repeat(0.5 * np.sum(centers**2, axis=1), d)
    w_k[1, 1:1 + dg] = -half_sqnorm
    w_k[1, 1 + dg:] = -half_sqnorm
    w_k[2:, 1:1 + dg] = ln_t.transpose(2, 0, 1).reshape(n, dg)
    w_k[2:, 1 + dg:] = ln_e.transpose(2, 0, 1).reshape(n, dg)

    # W_Q broadcasts the temperature onto the first n columns and injects I_n.
    w_q = np.zeros((2 + n, 1 + width))
    w_q[0, 1:1 + n] = temperature
    w_q[1, 1:1 + n] = temperature
    w_q[2:, 1:1 + n] = np.eye(n)

    # W_V = [0 | X1 | -X1] pairs the T and E halves with opposite signs.
    x1 = np.tile(np.eye(d), g)
    w_v = np.zeros((d, 1 + width))
    w_v[:, 1:1 + dg] = x1
    w_v[:, 1 + dg:] = -x1

    w_o = np.zeros((width, n))
    w_o[:n, :] = d * f.bound_b0 * np.eye(n)

    weights = AttentionWeights(w_k=w_k, w_q=w_q, w_v=w_v, w_o=w_o)
    return ConstructedApproximator(
        linear=linear, weights=weights, centers=centers, b0=f.bound_b0,
        temperature=temperature, kind=kind, d=d, n=n)


def build_universal_self(f: TargetFunction, spec: GridSpec,
                         temperature: float) -> ConstructedApproximator:
    """Universal approximator for f on [-D, D]^(d x n) over a uniform grid."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    centers = grid_centers(spec)
    return build_from_centers(f, centers, spec.d, spec.n, temperature, "self")


def evaluate_approximator(approx: ConstructedApproximator,
                          z: np.ndarray) -> np.ndarray:
    """Run the full matrix pipeline: sum-of-linear layer, then attention."""
    from .attention import apply_sum_linear, self_attention

    if approx.kind == "cross":
        raise ValueError("use evaluate_approximator_cross for cross-attention")
    lifted = apply_sum_linear(approx.linear, z)
    return self_attention(approx.weights, lifted)
