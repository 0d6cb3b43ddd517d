import numpy as np
import pytest

from maxaffine_attn import (
    BoundViolation,
    CapExceeded,
    GridSpec,
    MaxAffine,
    TargetFunction,
    apply_sum_linear,
    assemble_blocks,
    attention_scores,
    build_indicator_attention,
    build_reassign_attention,
    build_universal_self,
    choose_temperature,
    closed_form_self,
    compute_et,
    evaluate,
    evaluate_approximator,
    flatten_sequence,
    grid_centers,
    indicator,
    indicator_temperature,
    random_maxaffine,
    self_attention,
    softmax_anchor_weights,
)
from maxaffine_attn.registry import get_function


def identity_target(bound=1.5):
    return TargetFunction(evaluator=lambda z: np.asarray(z, dtype=float),
                          bound_b0=bound, descriptor="identity")


# ---------------------------------------------------------------- grid centers

def test_grid_centers_one_axis():
    # Def-style oracle: (2*D*k - D*P)/P for k = 0..P-1
    spec = GridSpec(1.0, 2, 1, 1)
    np.testing.assert_array_equal(grid_centers(spec), [[-1.0], [0.0]])


def test_grid_centers_two_axes_digit_order():
    spec = GridSpec(1.0, 2, 1, 2)
    want = [[-1.0, -1.0], [0.0, -1.0], [-1.0, 0.0], [0.0, 0.0]]
    np.testing.assert_array_equal(grid_centers(spec), want)


def test_grid_single_point():
    spec = GridSpec(2.5, 1, 2, 2)
    np.testing.assert_array_equal(grid_centers(spec), [[-2.5] * 4])


def test_grid_cap():
    with pytest.raises(CapExceeded):
        grid_centers(GridSpec(1.0, 17, 2, 2))  # 17^4 = 83521 > 65536


# ------------------------------------------------------------------------ E/T

def test_et_zero_function():
    f = TargetFunction(lambda z: np.zeros_like(z), 1e-6, "zero")
    e, t = compute_et(f, np.zeros((2, 3)))
    np.testing.assert_array_equal(e, np.ones((2, 3)))
    np.testing.assert_array_equal(t, np.ones((2, 3)))


def test_et_half():
    f = TargetFunction(lambda z: np.full_like(z, 0.5), 1.0, "half")
    e, t = compute_et(f, np.zeros((1, 1)))
    assert (e[0, 0], t[0, 0]) == (0.5, 1.5)


def test_et_sum_exactly_two():
    rng = np.random.default_rng(0)
    f, _ = get_function("randlip", 2, 2, 11, 1.0)
    for _ in range(100):
        e, t = compute_et(f, rng.uniform(-1, 1, size=(2, 2)))
        assert np.all(e + t == 2.0)
        assert np.all(e > 0) and np.all(t > 0)


def test_et_bound_violation():
    f = TargetFunction(lambda z: np.full_like(z, 2.0), 1.0, "too-big")
    with pytest.raises(BoundViolation):
        compute_et(f, np.zeros((1, 1)))


# ---------------------------------------------------------------- temperature

def bisection_temperature(delta, b0, g, epsilon):
    """Oracle: numeric solve of 2 b0 G exp(-3 R delta^2 / 8) = epsilon / 3."""
    lo, hi = 0.0, 1.0
    while 2 * b0 * g * np.exp(-3 * hi * delta**2 / 8) > epsilon / 3:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 2 * b0 * g * np.exp(-3 * mid * delta**2 / 8) > epsilon / 3:
            lo = mid
        else:
            hi = mid
    return hi


def test_choose_temperature_example():
    got = choose_temperature(0.1, 1.0, 256, 0.1)
    assert abs(got - bisection_temperature(0.1, 1.0, 256, 0.1)) < 1e-6
    assert got == pytest.approx(8.0 / 0.03 * np.log(15360.0))
    assert got == pytest.approx(2.57e3, rel=1e-2)


def test_choose_temperature_doubling_g():
    base = choose_temperature(0.2, 1.0, 64, 0.05)
    doubled = choose_temperature(0.2, 1.0, 128, 0.05)
    assert doubled - base == pytest.approx(8.0 / (3 * 0.04) * np.log(2.0))


def test_choose_temperature_monotone_in_epsilon():
    assert choose_temperature(0.1, 1.0, 64, 0.2) < choose_temperature(0.1, 1.0, 64, 0.1)


def test_choose_temperature_rejects_bad_args():
    with pytest.raises(ValueError):
        choose_temperature(-0.1, 1.0, 64, 0.1)
    with pytest.raises(ValueError):
        choose_temperature(0.1, 1.0, 64, 1.5)


# ------------------------------------------------------------------ indicator

def test_indicator_two_logit_example():
    ma = MaxAffine([[1.0], [-1.0]], [0.0, 0.0])
    linear, weights, chosen_r = build_indicator_attention(ma, 1, 1e-3, 1.0)
    assert chosen_r == pytest.approx(np.log(1.0) - np.log(1e-3))
    assert chosen_r == pytest.approx(6.908, abs=1e-3)
    lifted = apply_sum_linear(linear, np.array([[0.5]]))
    col = self_attention(weights, lifted)[:, 0]
    assert col[0] >= 0.999 and col[1] <= 0.001


def test_indicator_single_component():
    ma = MaxAffine([[2.0]], [0.3])
    linear, weights, _ = build_indicator_attention(ma, 1, 0.5, 1.0)
    lifted = apply_sum_linear(linear, np.array([[0.7]]))
    np.testing.assert_allclose(self_attention(weights, lifted), [[1.0]],
                               rtol=0, atol=1e-15)


def test_indicator_random_instances_hit_one_hot():
    rng = np.random.default_rng(8)
    epsilon, margin = 1e-3, 0.2
    ma = random_maxaffine(101, 6, 2, 1.0)
    tokens = []
    while len(tokens) < 100:
        x = rng.uniform(-1, 1, size=2)
        if evaluate(ma, x).margin >= margin:
            tokens.append(x)
    linear, weights, _ = build_indicator_attention(ma, 1, epsilon, margin)
    for x in tokens:
        lifted = apply_sum_linear(linear, x.reshape(2, 1))
        col = self_attention(weights, lifted)[:, 0]
        np.testing.assert_allclose(col, indicator(ma, x), rtol=0, atol=epsilon)


def test_indicator_multi_token_columns():
    ma = random_maxaffine(55, 5, 2, 1.0)
    rng = np.random.default_rng(9)
    tokens = []
    while len(tokens) < 3:
        x = rng.uniform(-1, 1, size=2)
        if evaluate(ma, x).margin >= 0.2:
            tokens.append(x)
    x_mat = np.array(tokens).T
    linear, weights, _ = build_indicator_attention(ma, 3, 1e-3, 0.2)
    got = self_attention(weights, apply_sum_linear(linear, x_mat))
    assert got.shape == (5, 3)
    for i, x in enumerate(tokens):
        np.testing.assert_allclose(got[:, i], indicator(ma, x), rtol=0, atol=1e-3)


def test_indicator_requires_enough_components():
    ma = random_maxaffine(1, 2, 1, 1.0)
    with pytest.raises(ValueError):
        build_indicator_attention(ma, 3, 1e-3, 0.2)
    with pytest.raises(ValueError):
        build_indicator_attention(ma, 1, 1.5, 0.2)


def test_indicator_temperature_formula():
    # corrected orientation: R = (ln(N-1) - ln eps) / margin
    assert indicator_temperature(8, 1e-3, 0.2) == pytest.approx(
        (np.log(7.0) + np.log(1e3)) / 0.2)
    assert indicator_temperature(1, 1e-3, 0.2) == 1.0


# ------------------------------------------------------------------- reassign

def test_reassign_constant_values():
    ma = random_maxaffine(2, 4, 2, 1.0)
    values = np.tile([[0.3, -0.7]], (4, 1))
    linear, weights, _ = build_reassign_attention(ma, values, 1, 1e-3, 0.2)
    x = np.array([[0.4], [-0.1]])
    got = self_attention(weights, apply_sum_linear(linear, x))
    np.testing.assert_allclose(got, [[0.3], [-0.7]], rtol=0, atol=1e-12)


def test_reassign_two_cells():
    ma = MaxAffine([[1.0], [-1.0]], [0.0, 0.0])
    linear, weights, _ = build_reassign_attention(
        ma, [[1.0], [-1.0]], 1, 1e-3, 1.0)
    got = self_attention(weights, apply_sum_linear(linear, np.array([[0.5]])))
    assert abs(got[0, 0] - 1.0) <= 2e-3


def test_reassign_matches_lookup_on_margin_grid():
    ma = random_maxaffine(77, 3, 1, 1.0)
    values = np.array([[0.5], [-1.0], [1.5]])
    linear, weights, _ = build_reassign_attention(ma, values, 1, 1e-3, 0.2)
    count = 0
    for x in np.linspace(-1, 1, 50):
        rep = evaluate(ma, [x])
        if rep.margin < 0.2:
            continue
        count += 1
        got = self_attention(weights, apply_sum_linear(linear, np.array([[x]])))
        assert abs(got[0, 0] - values[rep.cell_index, 0]) <= 1e-3
    assert count > 10


def test_reassign_validates_values():
    ma = random_maxaffine(3, 3, 1, 1.0)
    with pytest.raises(ValueError):
        build_reassign_attention(ma, np.ones((2, 1)), 1, 1e-3, 0.2)


# ------------------------------------------------------------- universal self

def test_universal_shapes():
    f = identity_target()
    spec = GridSpec(1.0, 2, 1, 2)  # G = 4, 2dG = 8
    approx = build_universal_self(f, spec, 5.0)
    assert approx.weights.w_k.shape == (4, 9)
    assert approx.weights.w_q.shape == (4, 9)
    assert approx.weights.w_v.shape == (1, 9)
    assert approx.weights.w_o.shape == (8, 2)
    lifted = apply_sum_linear(approx.linear, np.zeros((1, 2)))
    assert lifted.shape == (9, 8)
    scores = attention_scores(approx.weights, lifted, lifted)
    assert scores.shape == (8, 8)
    assert evaluate_approximator(approx, np.zeros((1, 2))).shape == (1, 2)


def test_linear_layer_structure():
    # oracle: assemble [[X0, X0], [I, 0], [0, I]] from the definition
    f = identity_target()
    spec = GridSpec(1.0, 2, 2, 1)
    approx = build_universal_self(f, spec, 3.0)
    rng = np.random.default_rng(10)
    z = rng.uniform(-1, 1, size=(2, 1))
    centers = approx.centers
    zt = flatten_sequence(z).ravel()
    x0 = np.repeat(centers @ zt, 2).reshape(1, -1)
    dg = centers.shape[0] * 2
    want = assemble_blocks([
        [x0, x0],
        [np.eye(dg), np.zeros((dg, dg))],
        [np.zeros((dg, dg)), np.eye(dg)],
    ])
    np.testing.assert_allclose(apply_sum_linear(approx.linear, z), want,
                               rtol=0, atol=1e-14)


def test_constant_function_exact():
    f, _ = get_function("const:0.7", 1, 2, 0, 1.0)
    approx = build_universal_self(f, GridSpec(1.0, 3, 1, 2), 40.0)
    rng = np.random.default_rng(11)
    for _ in range(50):
        z = rng.uniform(-1, 1, size=(1, 2))
        np.testing.assert_allclose(evaluate_approximator(approx, z), 0.7,
                                   rtol=0, atol=1e-12)


def test_midpoint_between_centers():
    # centers -1 and 0 give equal affine scores at z = -0.5, so the output is
    # the plain average of f there, for any temperature
    f = identity_target()
    approx = build_universal_self(f, GridSpec(1.0, 2, 1, 1), 123.4)
    got = evaluate_approximator(approx, np.array([[-0.5]]))
    np.testing.assert_allclose(got, [[-0.5]], rtol=0, atol=1e-12)


def test_pipeline_matches_closed_form():
    rng = np.random.default_rng(12)
    for d, n, p in [(1, 1, 4), (1, 2, 3), (2, 1, 2), (2, 2, 2)]:
        f, _ = get_function("randlip", d, n, int(rng.integers(1 << 30)), 1.0)
        temp = float(rng.uniform(0.5, 100.0))
        approx = build_universal_self(f, GridSpec(1.0, p, d, n), temp)
        for _ in range(20):
            z = rng.uniform(-1, 1, size=(d, n))
            pipe = evaluate_approximator(approx, z)
            orac = closed_form_self(f, approx.centers, temp, z)
            scale = max(1.0, float(np.max(np.abs(orac))))
            assert np.max(np.abs(pipe - orac)) / scale <= 1e-8


def test_concentration_at_grid_center():
    f, _ = get_function("randlip", 1, 2, 21, 1.0)
    approx = build_universal_self(f, GridSpec(1.0, 2, 1, 2), 1e3)
    center = approx.centers[2]
    z = center.reshape(1, 2, order="F").astype(float)
    want = f(z)
    got = evaluate_approximator(approx, z)
    assert np.max(np.abs(got - want)) <= 1e-3


def test_score_block_weights_match_oracle_softmax():
    f, _ = get_function("randlip", 2, 1, 31, 1.0)
    approx = build_universal_self(f, GridSpec(1.0, 2, 2, 1), 7.0)
    z = np.array([[0.3], [-0.6]])
    lifted = apply_sum_linear(approx.linear, z)
    scores = attention_scores(approx.weights, lifted, lifted)
    g = approx.centers.shape[0]
    d = 2
    col = scores[:, 0]
    per_center = col[:d * g].reshape(g, d).sum(axis=1) \
        + col[d * g:].reshape(g, d).sum(axis=1)
    ref = softmax_anchor_weights(approx.centers, 7.0, z.ravel(order="F"))
    assert abs(per_center.sum() - 1.0) <= 1e-10
    np.testing.assert_allclose(per_center, ref, rtol=0, atol=1e-10)


def test_bound_violation_detected_during_build():
    f = TargetFunction(lambda z: np.asarray(z, dtype=float), 0.5, "unbounded-id")
    with pytest.raises(BoundViolation):
        build_universal_self(f, GridSpec(1.0, 2, 1, 1), 5.0)


def test_universal_rejects_bad_temperature():
    with pytest.raises(ValueError):
        build_universal_self(identity_target(), GridSpec(1.0, 2, 1, 1), 0.0)
