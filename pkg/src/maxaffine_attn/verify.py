"""Seeded property suite behind the ``verify`` CLI command.

Every invariant promised by the library modules is checked here with fixed
seeds, so a green run is reproducible.  Checks return (name, passed, detail)
tuples; the CLI exits nonzero if any check fails.
"""

from __future__ import annotations

import numpy as np

from . import (
    CoverSampler,
    GridSpec,
    MaxAffine,
    SphereCover,
    TargetFunction,
    UniformPairSampler,
    UniformSampler,
    apply_sum_linear,
    attention_scores,
    build_indicator_attention,
    build_small_region,
    build_universal_cross,
    build_universal_self,
    choose_temperature,
    closed_form_cross,
    closed_form_self,
    count_trainable_params,
    cross_attention,
    evaluate,
    evaluate_approximator,
    evaluate_approximator_cross,
    flatten_sequence,
    greedy_cover,
    indicator,
    lp_error_estimate,
    matmul,
    nearest_center,
    pair_anchor_weights,
    random_maxaffine,
    self_attention,
    softmax_anchor_weights,
    softmax_columns,
    sup_error_estimate,
    target_values_at_center_pairs,
    target_values_at_centers,
    unflatten_sequence,
)
from .attention import AttentionWeights
from .registry import get_function


def matrix_walk_param_count(approx) -> int:
    """Independent tally of target/domain-dependent slots in the weights.

    Walks the actual matrices: the lifting layer's anchor-coordinate wiring
    (once per T/E half), the repeated squared-norm row of W_K, the ln T/ln E
    blocks, and the output-scale diagonal of W_O.  Verifies the wired values
    along the way.
    """
    d, n = approx.d, approx.n
    centers = approx.centers
    n_x = centers.shape[0]
    dn_x = d * n_x
    count = 0

    assert len(approx.linear.terms) == d
    for m, (_, q) in enumerate(approx.linear.terms):
        assert q.shape == (n, 2 * dn_x)
        for k in range(n):
            for j in range(n_x):
                coord = centers[j, k * d + m]
                assert np.all(q[k, j * d:(j + 1) * d] == coord)
                assert np.all(q[k, dn_x + j * d:dn_x + (j + 1) * d] == coord)
                count += 2

    w_k = approx.weights.w_k
    assert w_k.shape == (2 + n, 1 + 2 * dn_x)
    half_sqnorm = 0.5 * np.sum(centers**2, axis=1)
    for j in range(n_x):
        for s in range(d):
            assert w_k[1, 1 + j * d + s] == -half_sqnorm[j]
            assert w_k[1, 1 + dn_x + j * d + s] == -half_sqnorm[j]
            count += 2
    count += 2 * d * n * n_x  # the ln T and ln E tables

    w_o = approx.weights.w_o
    assert w_o.shape == (2 * dn_x, n)
    assert np.allclose(np.diag(w_o[:n, :]), d * approx.b0)
    count += n
    return count


def _check_softmax_stochastic():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        rows = int(rng.integers(1, 8))
        cols = int(rng.integers(1, 8))
        m = rng.uniform(-1e4, 1e4, size=(rows, cols))
        s = softmax_columns(m)
        worst = max(worst, float(np.max(np.abs(s.sum(axis=0) - 1.0))))
        if np.any(s < 0):
            return False, "negative probability"
    return worst <= 1e-12, f"max column-sum deviation {worst:.2e}"


def _check_softmax_shift_invariance():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(200):
        m = rng.uniform(-50, 50, size=(6, 4))
        shift = rng.uniform(-1e3, 1e3, size=(1, 4))
        worst = max(worst, float(np.max(np.abs(
            softmax_columns(m + shift) - softmax_columns(m)))))
    return worst <= 1e-12, f"max shift deviation {worst:.2e}"


def _check_matmul_associativity():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(100):
        a = rng.normal(size=(int(rng.integers(1, 6)), int(rng.integers(1, 6))))
        b = rng.normal(size=(a.shape[1], int(rng.integers(1, 6))))
        c = rng.normal(size=(b.shape[1], int(rng.integers(1, 6))))
        left = matmul(matmul(a, b), c)
        right = matmul(a, matmul(b, c))
        scale = max(1.0, float(np.max(np.abs(left))))
        worst = max(worst, float(np.max(np.abs(left - right))) / scale)
    return worst <= 1e-9, f"max relative deviation {worst:.2e}"


def _check_flatten_roundtrip():
    rng = np.random.default_rng(14)
    for _ in range(100):
        d = int(rng.integers(1, 5))
        n = int(rng.integers(1, 5))
        z = rng.normal(size=(d, n))
        if not np.array_equal(unflatten_sequence(flatten_sequence(z), d, n), z):
            return False, "roundtrip mismatch"
    return True, "100 roundtrips exact"


def _check_partition_totality():
    rng = np.random.default_rng(15)
    for _ in range(10_000):
        ma = random_maxaffine(int(rng.integers(1 << 30)),
                              int(rng.integers(1, 9)), int(rng.integers(1, 4)), 2.0)
        x = rng.uniform(-2, 2, size=ma.dim)
        rep = evaluate(ma, x)
        values = ma.component_values(x)
        if values[rep.cell_index] != values.max():
            return False, "cell does not attain the max"
        one_hot = indicator(ma, x)
        if np.count_nonzero(one_hot) != 1 or one_hot[rep.cell_index] != 1.0:
            return False, "indicator inconsistent"
    return True, "10000 instances total"


def _check_argmax_scaling_invariance():
    rng = np.random.default_rng(16)
    for _ in range(500):
        ma = random_maxaffine(int(rng.integers(1 << 30)),
                              int(rng.integers(2, 7)), 2, 1.0)
        x = rng.uniform(-1, 1, size=2)
        rep = evaluate(ma, x)
        if rep.margin <= 0:
            continue
        lam = float(rng.uniform(0.1, 10))
        scaled = MaxAffine(lam * ma.coeffs, lam * ma.offsets)
        if evaluate(scaled, x).cell_index != rep.cell_index:
            return False, "cell changed under positive scaling"
    return True, "argmax invariant under positive scaling"


def _check_margin_brute_force():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(500):
        ma = random_maxaffine(int(rng.integers(1 << 30)),
                              int(rng.integers(2, 8)), 3, 1.5)
        x = rng.uniform(-1, 1, size=3)
        values = np.sort(ma.component_values(x))
        worst = max(worst, abs(evaluate(ma, x).margin - (values[-1] - values[-2])))
    return worst <= 1e-12, f"max margin deviation {worst:.2e}"


def _random_attention(rng, d_attn, dim, n, n_out):
    return AttentionWeights(
        w_k=rng.normal(size=(d_attn, dim)), w_q=rng.normal(size=(d_attn, dim)),
        w_v=rng.normal(size=(int(rng.integers(1, 4)), dim)),
        w_o=rng.normal(size=(n, n_out)))


def _check_score_stochasticity():
    rng = np.random.default_rng(18)
    worst = 0.0
    for _ in range(200):
        dim, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        w = _random_attention(rng, int(rng.integers(1, 5)), dim, n, n)
        z = rng.normal(size=(dim, n))
        s = attention_scores(w, z, z)
        worst = max(worst, float(np.max(np.abs(s.sum(axis=0) - 1.0))))
    return worst <= 1e-12, f"max column-sum deviation {worst:.2e}"


def _check_cross_self_consistency():
    rng = np.random.default_rng(19)
    worst = 0.0
    for _ in range(200):
        dim, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        w = _random_attention(rng, int(rng.integers(1, 5)), dim, n, n)
        z = rng.normal(size=(dim, n))
        worst = max(worst, float(np.max(np.abs(
            cross_attention(w, z, z) - self_attention(w, z)))))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def _check_score_permutation_conjugation():
    rng = np.random.default_rng(20)
    worst = 0.0
    for _ in range(200):
        dim, n = int(rng.integers(1, 5)), int(rng.integers(2, 5))
        w = _random_attention(rng, int(rng.integers(1, 5)), dim, n, n)
        z = rng.normal(size=(dim, n))
        perm = rng.permutation(n)
        pi = np.eye(n)[:, perm]
        lhs = attention_scores(w, z @ pi, z @ pi)
        rhs = pi.T @ attention_scores(w, z, z) @ pi
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst <= 1e-12, f"max conjugation deviation {worst:.2e}"


def _pipeline_oracle_self(samples_per_config=10):
    rng = np.random.default_rng(21)
    worst = 0.0
    for d in (1, 2):
        for n in (1, 2):
            for p in (1, 2, 3, 4):
                spec = GridSpec(1.0, p, d, n)
                f, _ = get_function(f"randlip", d, n, int(rng.integers(1 << 30)), 1.0)
                temp = float(rng.uniform(0.5, 100.0))
                approx = build_universal_self(f, spec, temp)
                values = target_values_at_centers(f, approx.centers, d, n)
                for _ in range(samples_per_config):
                    z = rng.uniform(-1, 1, size=(d, n))
                    pipe = evaluate_approximator(approx, z)
                    orac = closed_form_self(f, approx.centers, temp, z, values)
                    scale = max(1.0, float(np.max(np.abs(orac))))
                    worst = max(worst, float(np.max(np.abs(pipe - orac))) / scale)
    return worst, worst <= 1e-8


def _check_pipeline_oracle_self():
    worst, ok = _pipeline_oracle_self()
    return ok, f"max relative deviation {worst:.2e}"


def _check_partition_of_unity():
    rng = np.random.default_rng(22)
    worst = 0.0
    for _ in range(20):
        d, n, p = int(rng.integers(1, 3)), int(rng.integers(1, 3)), int(rng.integers(1, 4))
        f, _ = get_function("randlip", d, n, int(rng.integers(1 << 30)), 1.0)
        approx = build_universal_self(f, GridSpec(1.0, p, d, n),
                                      float(rng.uniform(1, 50)))
        z = rng.uniform(-1, 1, size=(d, n))
        lifted = apply_sum_linear(approx.linear, z)
        scores = attention_scores(approx.weights, lifted, lifted)
        g = approx.centers.shape[0]
        dg = d * g
        for c in range(n):
            col = scores[:, c]
            per_center = col[:dg].reshape(g, d).sum(axis=1) \
                + col[dg:].reshape(g, d).sum(axis=1)
            worst = max(worst, abs(float(per_center.sum()) - 1.0))
            ref = softmax_anchor_weights(approx.centers, approx.temperature,
                                         z.reshape(-1, order="F"))
            worst = max(worst, float(np.max(np.abs(per_center - ref))))
    return worst <= 1e-10, f"max unity deviation {worst:.2e}"


def _check_constant_exactness():
    rng = np.random.default_rng(23)
    worst = 0.0
    f, _ = get_function("const:0.7", 1, 2, 0, 1.0)
    approx = build_universal_self(f, GridSpec(1.0, 3, 1, 2), 25.0)
    cross = build_universal_cross(
        TargetFunction(lambda a, b: np.full_like(a, 0.7), 0.7007, "const-pair",
                       arity=2), GridSpec(1.0, 2, 1, 1), 25.0)
    cover = build_small_region(
        f, SphereCover(np.array([[-0.5, 0.1], [0.4, -0.2]]), 1.0), 1, 2, 25.0)
    for _ in range(200):
        z = rng.uniform(-1, 1, size=(1, 2))
        worst = max(worst, float(np.max(np.abs(evaluate_approximator(approx, z) - 0.7))))
        worst = max(worst, float(np.max(np.abs(evaluate_approximator(cover, z) - 0.7))))
        zk, zq = rng.uniform(-1, 1, size=(2, 1, 1))
        worst = max(worst, float(np.max(np.abs(
            evaluate_approximator_cross(cross, zk, zq) - 0.7))))
    return worst <= 1e-12, f"max deviation from constant {worst:.2e}"


def _check_desk_scale_self_bound():
    epsilon = 0.75
    f, entry = get_function("linear", 1, 1, seed=7, half_width=1.0)
    delta = epsilon / (3.0 * f.lipschitz)
    p = 1
    while 2.0 / p > delta:
        p *= 2
    spec = GridSpec(1.0, p, 1, 1)
    temp = choose_temperature(delta, f.bound_b0, spec.num_centers, epsilon)
    approx = build_universal_self(f, spec, temp)
    values = target_values_at_centers(f, approx.centers, 1, 1)
    report = sup_error_estimate(
        f, lambda z: closed_form_self(f, approx.centers, temp, z, values),
        UniformSampler(1.0, 1, 1), 10_000, seed=24)
    return report.sup_error <= epsilon, (
        f"sup {report.sup_error:.4f} vs epsilon {epsilon} at P={p}")


def _check_indicator_bound():
    rng = np.random.default_rng(25)
    epsilon, margin = 1e-3, 0.2
    worst = 0.0
    instances = 0
    while instances < 100:
        d = int(rng.integers(1, 4))
        nc = int(rng.integers(2, 9))
        ma = random_maxaffine(int(rng.integers(1 << 30)), nc, d, 1.0)
        tokens = []
        for _ in range(200):
            x = rng.uniform(-1, 1, size=d)
            if evaluate(ma, x).margin >= margin:
                tokens.append(x)
            if len(tokens) == min(4, nc):
                break
        if not tokens:
            continue
        instances += 1
        n = len(tokens)
        x_mat = np.array(tokens).T
        linear, weights, _ = build_indicator_attention(ma, n, epsilon, margin)
        lifted = apply_sum_linear(linear, x_mat)
        got = self_attention(weights, lifted)
        want = np.array([indicator(ma, t) for t in tokens]).T
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst <= epsilon, f"max one-hot deviation {worst:.2e} over 100 instances"


def _check_pipeline_oracle_cross():
    rng = np.random.default_rng(26)
    worst = 0.0
    for _ in range(10):
        d, n = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        p = 2 if d * n <= 2 else 1
        f, _ = get_function("addpair", d, n, 0, 1.0)
        temp = float(rng.uniform(0.5, 50.0))
        approx = build_universal_cross(f, GridSpec(1.0, p, d, n), temp)
        for _ in range(10):
            zk = rng.uniform(-1, 1, size=(d, n))
            zq = rng.uniform(-1, 1, size=(d, n))
            pipe = evaluate_approximator_cross(approx, zk, zq)
            orac = closed_form_cross(f, approx.centers, temp, zk, zq)
            scale = max(1.0, float(np.max(np.abs(orac))))
            worst = max(worst, float(np.max(np.abs(pipe - orac))) / scale)
    return worst <= 1e-8, f"max relative deviation {worst:.2e}"


def _check_pair_partition_of_unity():
    rng = np.random.default_rng(27)
    worst = 0.0
    for _ in range(20):
        zk = rng.uniform(-1, 1, size=3)
        zq = rng.uniform(-1, 1, size=3)
        centers = rng.uniform(-1, 1, size=(int(rng.integers(2, 7)), 3))
        w = pair_anchor_weights(centers, float(rng.uniform(0.5, 30)), zk, zq)
        worst = max(worst, abs(float(w.sum()) - 1.0))
    return worst <= 1e-10, f"max pair weight-sum deviation {worst:.2e}"


def _check_separable_concentration():
    rng = np.random.default_rng(28)
    for _ in range(200):
        centers = rng.uniform(-1, 1, size=(int(rng.integers(2, 8)), 2))
        zk = rng.uniform(-1, 1, size=2)
        zq = rng.uniform(-1, 1, size=2)
        w = pair_anchor_weights(centers, 40.0, zk, zq)
        i, j = np.unravel_index(int(np.argmax(w)), w.shape)
        if (i, j) != (nearest_center(centers, zk), nearest_center(centers, zq)):
            return False, "argmax pair is not the nearest-center pair"
        wk = softmax_anchor_weights(centers, 40.0, zk)
        wq = softmax_anchor_weights(centers, 40.0, zq)
        if np.max(np.abs(w - np.outer(wk, wq))) > 1e-12:
            return False, "pair weights do not factor"
    return True, "argmax separates and weights factor on 200 instances"


def _check_desk_scale_cross_bound():
    f, _ = get_function("addpair", 1, 1, 0, 1.0)
    epsilon = 3.0 * f.lipschitz * (2.0 / 16)
    delta = epsilon / (3.0 * f.lipschitz)
    spec = GridSpec(1.0, 16, 1, 1)
    temp = choose_temperature(delta, f.bound_b0, spec.num_centers, epsilon)
    approx = build_universal_cross(f, spec, temp)
    values = target_values_at_center_pairs(f, approx.centers, 1, 1)
    report = sup_error_estimate(
        f, lambda a, b: closed_form_cross(f, approx.centers, temp, a, b, values),
        UniformPairSampler(1.0, 1, 1), 10_000, seed=29)
    return report.sup_error <= epsilon, (
        f"sup {report.sup_error:.4f} vs epsilon {epsilon:.4f}")


def _check_param_count():
    rng = np.random.default_rng(30)
    done = 0
    while done < 20:
        d, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        n_x = int(rng.integers(1, 6))
        if 2 * d * n_x < n:  # score matrix must host n output tokens
            continue
        done += 1
        centers = rng.uniform(-1, 1, size=(n_x, d * n))
        f, _ = get_function("const:0.3", d, n, 0, 1.0)
        approx = build_small_region(f, SphereCover(centers, 0.5), d, n, 5.0)
        got = count_trainable_params(approx)
        formula = 4 * d * n * n_x + 2 * d * n_x + n
        walk = matrix_walk_param_count(approx)
        if got != formula or walk != formula:
            return False, f"count {got}, walk {walk}, formula {formula}"
    return True, "count == walk == 4dnNx + 2dNx + n on 20 triples"


def _check_desk_scale_cover_bound():
    rng = np.random.default_rng(31)
    f, _ = get_function("randlip", 1, 2, seed=5, half_width=1.0)
    epsilon = 0.4
    radius = epsilon / (3.0 * f.lipschitz)
    cloud = rng.uniform(-1, 1, size=(4000, 2))
    cover = greedy_cover(cloud, radius)
    temp = choose_temperature(radius, f.bound_b0, cover.num_centers, epsilon)
    approx = build_small_region(f, cover, 1, 2, temp)
    values = target_values_at_centers(f, approx.centers, 1, 2)
    report = sup_error_estimate(
        f, lambda z: closed_form_self(f, approx.centers, temp, z, values),
        CoverSampler(cover, 1, 2), 2000, seed=32)
    return report.sup_error <= epsilon, (
        f"sup {report.sup_error:.4f} vs epsilon {epsilon}, "
        f"{cover.num_centers} centers")


def _check_oracle_convexity():
    rng = np.random.default_rng(33)
    worst = 0.0
    for _ in range(500):
        centers = rng.uniform(-1, 1, size=(int(rng.integers(1, 9)), 2))
        w = softmax_anchor_weights(centers, float(rng.uniform(0.1, 1e4)),
                                   rng.uniform(-1, 1, size=2))
        if np.any(w < 0) or np.any(w > 1):
            return False, "weight outside [0, 1]"
        worst = max(worst, abs(float(w.sum()) - 1.0))
    return worst <= 1e-12, f"max weight-sum deviation {worst:.2e}"


def _check_temperature_limit():
    rng = np.random.default_rng(34)
    f, _ = get_function("randlip", 1, 2, seed=3, half_width=1.0)
    values = None
    worst = 0.0
    checked = 0
    while checked < 200:
        centers = rng.uniform(-1, 1, size=(int(rng.integers(2, 9)), 2))
        z = rng.uniform(-1, 1, size=(1, 2))
        zf = z.reshape(-1, order="F")
        scores = centers @ zf - 0.5 * np.sum(centers**2, axis=1)
        order = np.sort(scores)
        if order[-1] - order[-2] < 0.01:
            continue
        checked += 1
        values = target_values_at_centers(f, centers, 1, 2)
        jm = nearest_center(centers, zf)
        out = closed_form_self(f, centers, 1e4, z, values)
        worst = max(worst, float(np.max(np.abs(out - values[jm]))))
        if jm != int(np.argmax(scores)):
            return False, "nearest center disagrees with affine argmax"
    return worst <= 1e-6, f"max deviation from nearest-center value {worst:.2e}"


def _check_nearest_center_identity():
    rng = np.random.default_rng(35)
    for _ in range(10_000):
        centers = rng.uniform(-1, 1, size=(int(rng.integers(1, 9)),
                                           int(rng.integers(1, 4))))
        z = rng.uniform(-1, 1, size=centers.shape[1])
        scores = centers @ z - 0.5 * np.sum(centers**2, axis=1)
        if nearest_center(centers, z) != int(np.argmax(scores)):
            return False, "argmin distance != argmax affine score"
    return True, "identity holds on 10000 instances"


def _check_estimator_determinism():
    f, _ = get_function("randlip", 1, 2, seed=9, half_width=1.0)
    sampler = UniformSampler(1.0, 1, 2)
    evaluator = lambda z: np.zeros_like(z)  # noqa: E731
    a = sup_error_estimate(f, evaluator, sampler, 200, seed=40)
    b = sup_error_estimate(f, evaluator, sampler, 200, seed=40)
    c = lp_error_estimate(f, evaluator, sampler, 200, p=2.0, seed=40)
    d = lp_error_estimate(f, evaluator, sampler, 200, p=2.0, seed=40)
    ok = a.sup_error == b.sup_error and c.lp_error == d.lp_error
    return ok, "repeat runs byte-equal on error fields"


def _check_cli_report_determinism():
    from .cli import config_from_args, rows_to_csv, run

    def one_run():
        config = config_from_args(
            ["approximate", "--function", "randlip", "--d", "1", "--n", "1",
             "--P", "3", "--temperature", "15", "--samples", "60",
             "--seed", "51"])
        if run(config) != 0:
            return None
        text = rows_to_csv(config.rows)
        return "\n".join(",".join(line.split(",")[:-1])
                         for line in text.strip().splitlines())

    a, b = one_run(), one_run()
    return a is not None and a == b, "CSV byte-identical modulo runtime column"


def _check_lp_sup_relation():
    f, _ = get_function("randlip", 1, 2, seed=13, half_width=1.0)
    spec = GridSpec(1.0, 4, 1, 2)
    approx = build_universal_self(f, spec, 30.0)
    values = target_values_at_centers(f, approx.centers, 1, 2)
    evaluator = lambda z: closed_form_self(  # noqa: E731
        f, approx.centers, 30.0, z, values)
    sampler = UniformSampler(1.0, 1, 2)
    for seed in range(41, 51):
        sup = sup_error_estimate(f, evaluator, sampler, 500, seed=seed)
        lp = lp_error_estimate(f, evaluator, sampler, 500, p=2.0, seed=seed)
        bound = sup.sup_error * (2 * sampler.volume) ** 0.5 \
            + 3.0 * lp.lp_standard_error
        if lp.lp_error > bound:
            return False, f"seed {seed}: lp {lp.lp_error} > bound {bound}"
    return True, "lp <= sup (dn vol)^(1/p) + 3 SE on 10 seeded runs"


ALL_CHECKS = (
    ("linalg.softmax_columns_stochastic", _check_softmax_stochastic),
    ("linalg.softmax_shift_invariance", _check_softmax_shift_invariance),
    ("linalg.matmul_associativity", _check_matmul_associativity),
    ("linalg.flatten_roundtrip", _check_flatten_roundtrip),
    ("maxaffine.partition_totality", _check_partition_totality),
    ("maxaffine.argmax_scaling_invariance", _check_argmax_scaling_invariance),
    ("maxaffine.margin_brute_force", _check_margin_brute_force),
    ("attention.score_stochasticity", _check_score_stochasticity),
    ("attention.cross_self_consistency", _check_cross_self_consistency),
    ("attention.score_permutation_conjugation", _check_score_permutation_conjugation),
    ("construct_self.pipeline_oracle_equivalence", _check_pipeline_oracle_self),
    ("construct_self.partition_of_unity", _check_partition_of_unity),
    ("construct_self.constant_exactness", _check_constant_exactness),
    ("construct_self.desk_scale_bound", _check_desk_scale_self_bound),
    ("construct_self.indicator_bound", _check_indicator_bound),
    ("construct_cross.pipeline_oracle_equivalence", _check_pipeline_oracle_cross),
    ("construct_cross.pair_partition_of_unity", _check_pair_partition_of_unity),
    ("construct_cross.separable_concentration", _check_separable_concentration),
    ("construct_cross.desk_scale_bound", _check_desk_scale_cross_bound),
    ("construct_cover.param_count", _check_param_count),
    ("construct_cover.desk_scale_bound", _check_desk_scale_cover_bound),
    ("oracle.weights_convex_combination", _check_oracle_convexity),
    ("oracle.temperature_limit", _check_temperature_limit),
    ("oracle.nearest_center_identity", _check_nearest_center_identity),
    ("oracle.estimator_determinism", _check_estimator_determinism),
    ("oracle.lp_sup_relation", _check_lp_sup_relation),
    ("cli.report_determinism", _check_cli_report_determinism),
)


def verify_all() -> list[tuple[str, bool, str]]:
    """Run the full property suite; returns (name, passed, detail) per property."""
    results = []
    for name, check in ALL_CHECKS:
        try:
            passed, detail = check()
        except Exception as exc:  # a crashing property is a failing property
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, bool(passed), detail))
    return results
