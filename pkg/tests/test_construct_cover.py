import numpy as np
import pytest

from maxaffine_attn import (
    CoverSampler,
    GridSpec,
    SphereCover,
    TargetFunction,
    UniformSampler,
    build_small_region,
    build_universal_self,
    choose_temperature,
    closed_form_self,
    count_trainable_params,
    evaluate_approximator,
    greedy_cover,
    grid_centers,
    sup_error_estimate,
    target_values_at_centers,
)
from maxaffine_attn.registry import get_function
from maxaffine_attn.verify import matrix_walk_param_count


def test_cover_validation():
    with pytest.raises(ValueError):
        SphereCover(np.array([[0.0], [0.0]]), 0.5)  # duplicate centers
    with pytest.raises(ValueError):
        SphereCover(np.array([[0.0]]), 0.0)


def test_full_grid_cover_reproduces_grid_constructor():
    f, _ = get_function("randlip", 1, 2, 17, 1.0)
    spec = GridSpec(1.0, 2, 1, 2)
    grid_approx = build_universal_self(f, spec, 9.0)
    cover = SphereCover(grid_centers(spec), radius=1.0)
    cover_approx = build_small_region(f, cover, 1, 2, 9.0)
    np.testing.assert_array_equal(grid_approx.weights.w_k, cover_approx.weights.w_k)
    np.testing.assert_array_equal(grid_approx.weights.w_q, cover_approx.weights.w_q)
    np.testing.assert_array_equal(grid_approx.weights.w_v, cover_approx.weights.w_v)
    np.testing.assert_array_equal(grid_approx.weights.w_o, cover_approx.weights.w_o)
    for (p_a, q_a), (p_b, q_b) in zip(grid_approx.linear.terms,
                                      cover_approx.linear.terms):
        np.testing.assert_array_equal(p_a, p_b)
        np.testing.assert_array_equal(q_a, q_b)
    np.testing.assert_array_equal(grid_approx.linear.bias, cover_approx.linear.bias)


def test_single_center_outputs_value_there():
    f, _ = get_function("randlip", 2, 1, 23, 1.0)
    center = np.array([[0.3, -0.4]])
    approx = build_small_region(f, SphereCover(center, 0.5), 2, 1, 3.0)
    want = f(center.reshape(2, 1, order="F"))
    rng = np.random.default_rng(0)
    for _ in range(20):
        z = rng.uniform(-1, 1, size=(2, 1))
        np.testing.assert_allclose(evaluate_approximator(approx, z), want,
                                   rtol=0, atol=1e-12)


def test_two_center_concentration():
    f, _ = get_function("randlip", 1, 1, 29, 1.0)
    cover = SphereCover(np.array([[-0.6], [0.6]]), 0.3)
    approx = build_small_region(f, cover, 1, 1, 5e3)
    z = np.array([[-0.55]])
    want = f(np.array([[-0.6]]))
    np.testing.assert_allclose(evaluate_approximator(approx, z), want,
                               rtol=0, atol=1e-3)


def test_param_count_examples():
    # formula instances: 4 d n Nx + 2 d Nx + n
    rng = np.random.default_rng(1)
    f, _ = get_function("const:0.2", 1, 1, 0, 1.0)
    approx = build_small_region(
        f, SphereCover(rng.uniform(-1, 1, (3, 1)), 0.5), 1, 1, 2.0)
    assert count_trainable_params(approx) == 19

    f2, _ = get_function("const:0.2", 2, 3, 0, 1.0)
    approx2 = build_small_region(
        f2, SphereCover(rng.uniform(-1, 1, (1, 6)), 0.5), 2, 3, 2.0)
    assert count_trainable_params(approx2) == 31


def test_param_count_linear_in_centers():
    rng = np.random.default_rng(2)
    d, n = 2, 2
    f, _ = get_function("const:0.2", d, n, 0, 1.0)

    def count_for(n_x):
        cover = SphereCover(rng.uniform(-1, 1, (n_x, d * n)), 0.5)
        return count_trainable_params(build_small_region(f, cover, d, n, 2.0))

    n_x = 5
    assert count_for(2 * n_x) - count_for(n_x) == (4 * d * n + 2 * d) * n_x


def test_param_count_matches_matrix_walk():
    rng = np.random.default_rng(3)
    for d, n, n_x in [(1, 1, 3), (2, 3, 1), (3, 2, 4), (2, 2, 5)]:
        f, _ = get_function("randlip", d, n, int(rng.integers(1 << 30)), 1.0)
        cover = SphereCover(rng.uniform(-1, 1, (n_x, d * n)), 0.5)
        approx = build_small_region(f, cover, d, n, 2.0)
        got = count_trainable_params(approx)
        assert got == matrix_walk_param_count(approx)
        assert got == 4 * d * n * n_x + 2 * d * n_x + n


def test_param_count_wrong_kind():
    f, _ = get_function("const:0.2", 1, 1, 0, 1.0)
    approx = build_universal_self(f, GridSpec(1.0, 2, 1, 1), 2.0)
    with pytest.raises(ValueError):
        count_trainable_params(approx)


def test_greedy_cover_covers_cloud():
    rng = np.random.default_rng(4)
    points = rng.uniform(-1, 1, size=(500, 2))
    cover = greedy_cover(points, 0.4)
    for p in points:
        assert cover.distance_to_nearest(p) <= 0.4


def test_cover_sampler_stays_in_cover():
    rng = np.random.default_rng(5)
    cover = SphereCover(np.array([[-0.5, 0.0], [0.5, 0.2]]), 0.25)
    sampler = CoverSampler(cover, 1, 2)
    for z in sampler.sample(np.random.default_rng(6), 200):
        assert cover.contains(z.ravel(order="F"))
    del rng


def test_small_region_bound_on_cover():
    """Desk-scale small-domain guarantee: L-Lipschitz target,
    radius eps/(3L), bound-driven temperature, sup error <= eps in-cover."""
    f, _ = get_function("randlip", 1, 2, 37, 1.0)
    epsilon = 0.5
    radius = epsilon / (3.0 * f.lipschitz)
    rng = np.random.default_rng(7)
    cover = greedy_cover(rng.uniform(-1, 1, size=(2000, 2)), radius)
    temp = choose_temperature(radius, f.bound_b0, cover.num_centers, epsilon)
    approx = build_small_region(f, cover, 1, 2, temp)
    values = target_values_at_centers(f, approx.centers, 1, 2)
    report = sup_error_estimate(
        f, lambda z: closed_form_self(f, approx.centers, temp, z, values),
        CoverSampler(cover, 1, 2), 1000, seed=8)
    assert report.sup_error <= epsilon
    assert report.out_of_cover == 0


def test_out_of_cover_points_reported_not_measured():
    f = TargetFunction(lambda z: np.asarray(z, dtype=float), 1.5, "identity")
    cover = SphereCover(np.array([[0.0]]), 0.1)
    approx = build_small_region(f, cover, 1, 1, 50.0)
    values = target_values_at_centers(f, approx.centers, 1, 1)
    report = sup_error_estimate(
        f, lambda z: closed_form_self(f, approx.centers, 50.0, z, values),
        UniformSampler(1.0, 1, 1), 400, seed=9, cover=cover)
    assert report.out_of_cover > 0
    assert report.out_of_cover < 400
    # in-cover points are within the cover radius of the only center
    assert report.sup_error <= 0.1 + 1e-9
