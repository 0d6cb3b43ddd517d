import numpy as np
import pytest

from maxaffine_attn import (
    AttentionWeights,
    ShapeError,
    SumLinear,
    apply_sum_linear,
    attention_scores,
    cross_attention,
    self_attention,
)


def reference_attention(w, z_k, z_q):
    """Independent three-step oracle: form K, Q, V explicitly, softmax each
    column with plain numpy, then take the two products."""
    k = w.w_k @ z_k
    q = w.w_q @ z_q
    logits = k.T @ q
    e = np.exp(logits - logits.max(axis=0))
    scores = e / e.sum(axis=0)
    return (w.w_v @ z_k) @ scores @ w.w_o


def random_weights(rng, dim, n, n_out=None):
    return AttentionWeights(
        w_k=rng.normal(size=(3, dim)), w_q=rng.normal(size=(3, dim)),
        w_v=rng.normal(size=(2, dim)), w_o=rng.normal(size=(n, n_out or n)))


def test_sum_linear_identity_term():
    z = np.arange(6.0).reshape(2, 3)
    layer = SumLinear(terms=((np.eye(2), np.eye(3)),), bias=np.zeros((2, 3)))
    np.testing.assert_array_equal(apply_sum_linear(layer, z), z)


def test_sum_linear_no_terms_returns_bias():
    bias = np.array([[1.0, 2.0], [3.0, 4.0]])
    layer = SumLinear(terms=(), bias=bias)
    np.testing.assert_array_equal(apply_sum_linear(layer, np.ones((5, 7))), bias)


def test_sum_linear_two_terms():
    layer = SumLinear(terms=((2.0 * np.eye(2), np.eye(2)),
                             (np.eye(2), np.eye(2))), bias=np.zeros((2, 2)))
    np.testing.assert_array_equal(apply_sum_linear(layer, np.eye(2)), 3.0 * np.eye(2))


def test_sum_linear_shape_mismatch():
    layer = SumLinear(terms=((np.eye(2), np.eye(3)),), bias=np.zeros((2, 3)))
    with pytest.raises(ShapeError):
        apply_sum_linear(layer, np.ones((3, 3)))


def test_zero_key_query_gives_uniform_mixing():
    rng = np.random.default_rng(0)
    z = rng.normal(size=(2, 4))
    w = AttentionWeights(w_k=np.zeros((3, 2)), w_q=np.zeros((3, 2)),
                         w_v=rng.normal(size=(2, 2)), w_o=np.eye(4))
    want = (w.w_v @ z) @ np.full((4, 4), 0.25)
    np.testing.assert_allclose(self_attention(w, z), want, atol=1e-15)


def test_single_token_returns_value_projection():
    rng = np.random.default_rng(1)
    z = rng.normal(size=(3, 1))
    w = AttentionWeights(w_k=rng.normal(size=(2, 3)), w_q=rng.normal(size=(2, 3)),
                         w_v=rng.normal(size=(3, 3)), w_o=np.eye(1))
    np.testing.assert_allclose(self_attention(w, z), w.w_v @ z, atol=1e-14)


def test_self_attention_matches_step_by_step_oracle():
    rng = np.random.default_rng(2)
    for _ in range(25):
        z = rng.normal(size=(2, 2))
        w = random_weights(rng, 2, 2)
        np.testing.assert_allclose(self_attention(w, z),
                                   reference_attention(w, z, z), atol=1e-12)


def test_cross_attention_matches_oracle():
    rng = np.random.default_rng(3)
    for _ in range(25):
        z_k = rng.normal(size=(3, 2))
        z_q = rng.normal(size=(3, 2))
        w = random_weights(rng, 3, 2)
        np.testing.assert_allclose(cross_attention(w, z_k, z_q),
                                   reference_attention(w, z_k, z_q), atol=1e-12)


def test_cross_degenerates_to_self():
    rng = np.random.default_rng(4)
    z = rng.normal(size=(2, 3))
    w = random_weights(rng, 2, 3)
    np.testing.assert_allclose(cross_attention(w, z, z), self_attention(w, z),
                               rtol=0, atol=1e-12)


def test_cross_zero_logits_uniform():
    rng = np.random.default_rng(5)
    z_k = rng.normal(size=(2, 3))
    z_q = rng.normal(size=(2, 3))
    w = AttentionWeights(w_k=np.zeros((1, 2)), w_q=np.zeros((1, 2)),
                         w_v=rng.normal(size=(2, 2)), w_o=np.eye(3))
    want = (w.w_v @ z_k) @ np.full((3, 3), 1.0 / 3.0)
    np.testing.assert_allclose(cross_attention(w, z_k, z_q), want, atol=1e-15)


def test_scores_are_stochastic():
    rng = np.random.default_rng(6)
    for _ in range(50):
        z = rng.normal(size=(2, 4)) * 100
        w = random_weights(rng, 2, 4)
        s = attention_scores(w, z, z)
        np.testing.assert_allclose(s.sum(axis=0), 1.0, rtol=0, atol=1e-12)


def test_score_permutation_conjugation():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = 4
        z = rng.normal(size=(2, n))
        w = random_weights(rng, 2, n)
        pi = np.eye(n)[:, rng.permutation(n)]
        np.testing.assert_allclose(
            attention_scores(w, z @ pi, z @ pi),
            pi.T @ attention_scores(w, z, z) @ pi, rtol=0, atol=1e-12)


def test_attention_weight_shape_check():
    with pytest.raises(ShapeError):
        AttentionWeights(w_k=np.ones((2, 3)), w_q=np.ones((3, 3)),
                         w_v=np.ones((1, 3)), w_o=np.ones((2, 2)))


def test_attention_shape_mismatch_on_apply():
    w = AttentionWeights(w_k=np.ones((2, 3)), w_q=np.ones((2, 3)),
                         w_v=np.ones((1, 3)), w_o=np.ones((2, 2)))
    with pytest.raises(ShapeError):
        self_attention(w, np.ones((4, 2)))
