"""Tests for the weighted discrimination measurements."""

import itertools

import numpy as np
import pytest

from usdsep import (
    NotPSDError,
    build_measurement,
    failure_probability,
    make_instance,
    optimal_measurement,
    oracle_optimize,
    q_values,
    reciprocal_set,
    verify_pairwise_bound,
)
from tests.test_instance import all_instances


def test_build_measurement_symmetric_point():
    inst = make_instance(5)
    m = optimal_measurement(inst)
    assert np.allclose(m.weights, 0.8, atol=1e-15)
    # The failure operator collapses onto the omitted projector.
    assert np.linalg.norm(m.failure_op - 0.8 * inst.projector(1)) <= 1e-12
    assert np.linalg.matrix_rank(m.failure_op, tol=1e-10) == 1
    closure = np.linalg.norm(
        m.elements.sum(axis=0) + m.failure_op - np.eye(4)
    )
    assert closure <= 1e-12


def test_build_measurement_zero_weights():
    inst = make_instance(5)
    m = build_measurement(inst, np.zeros(4))
    assert np.allclose(m.failure_op, np.eye(4), atol=1e-15)


def test_build_measurement_rejects_infeasible_and_malformed():
    inst = make_instance(5)
    with pytest.raises(NotPSDError):
        build_measurement(inst, [0.9, 0.9, 0.9, 0.9])
    with pytest.raises(ValueError):
        build_measurement(inst, [-0.1, 0.8, 0.8, 0.8])
    with pytest.raises(ValueError):
        build_measurement(inst, [0.8, 0.8, 0.8])


def test_failure_probability_values():
    inst = make_instance(5)
    r = reciprocal_set(inst)
    rep = failure_probability(optimal_measurement(inst), r)
    assert abs(rep.failure_probability - 0.5) <= 1e-12
    assert rep.optimal
    assert rep.psd_min_eigenvalue >= -1e-10
    assert np.allclose(rep.per_state_success, 0.5, atol=1e-12)

    rep0 = failure_probability(build_measurement(inst, np.zeros(4)), r)
    assert abs(rep0.failure_probability - 1.0) <= 1e-12
    assert not rep0.optimal

    rep_half = failure_probability(build_measurement(inst, np.full(4, 0.5)), r)
    assert abs(rep_half.failure_probability - 11.0 / 16.0) <= 1e-12


def test_failure_probability_closed_form_matches_born_rule():
    rng = np.random.default_rng(99)
    for inst in all_instances():
        r = reciprocal_set(inst)
        d = inst.total_dim
        for _ in range(10):
            w = rng.uniform(0.0, 2.0 * d / inst.n, size=d)
            try:
                m = build_measurement(inst, w)
            except NotPSDError:
                continue
            rep = failure_probability(m, r)
            closed = 1.0 - inst.n / (2.0 * d * d) * w.sum()
            assert abs(rep.failure_probability - closed) <= 1e-12


def test_failure_probability_rejects_mismatched_pairs():
    r5 = reciprocal_set(make_instance(5))
    m7 = optimal_measurement(make_instance(7))
    with pytest.raises(ValueError):
        failure_probability(m7, r5)


def test_optimal_is_half_for_all_families():
    for inst in all_instances():
        r = reciprocal_set(inst)
        rep = failure_probability(optimal_measurement(inst), r)
        assert abs(rep.failure_probability - 0.5) <= 1e-12, (inst.n, inst.dims)


def test_pairwise_bound_examples():
    inst = make_instance(5)
    assert verify_pairwise_bound(inst, [0.8, 0.8, 0.8, 0.8])
    assert verify_pairwise_bound(inst, [1.6, 0.0, 0.0, 0.0])
    assert not verify_pairwise_bound(inst, [1.0, 0.7, 0.0, 0.0])
    with pytest.raises(ValueError):
        verify_pairwise_bound(inst, [0.8, 0.8])


def test_psd_feasible_weights_respect_pairwise_bound():
    # Positivity of the failure operator forces every weight pair under
    # 2D/N.  Random rays scaled to (or near) the feasibility boundary
    # give feasible vectors well outside the trivial all-below-D/N box;
    # every one of them must still satisfy the pairwise bound.
    rng = np.random.default_rng(17)
    for inst in all_instances():
        d = inst.total_dim
        projs = inst.projectors[[j - 1 for j in inst.retained]]
        for _ in range(50):
            ray = rng.uniform(0.0, 1.0, size=d)
            top = np.linalg.eigvalsh(np.einsum("j,jab->ab", ray, projs))[-1]
            w = ray * rng.uniform(0.5, 1.0) / top
            build_measurement(inst, w)
            assert verify_pairwise_bound(inst, w)


def test_increasing_any_weight_lowers_failure():
    inst = make_instance(5)
    r = reciprocal_set(inst)
    rng = np.random.default_rng(31)
    for _ in range(20):
        w = rng.uniform(0.0, 0.7, size=4)
        base = failure_probability(build_measurement(inst, w), r).failure_probability
        k = int(rng.integers(0, 4))
        bumped = w.copy()
        bumped[k] += 0.05
        better = failure_probability(
            build_measurement(inst, bumped), r
        ).failure_probability
        assert better < base


def test_q_values_two_routes_agree():
    inst5 = make_instance(5)
    qa, qb = q_values(inst5, reciprocal_set(inst5))
    assert np.allclose(qa, 0.625, atol=1e-12)
    assert np.allclose(qb, 0.625, atol=1e-12)
    inst7 = make_instance(7)
    qa, qb = q_values(inst7, reciprocal_set(inst7))
    assert np.allclose(qa, 7.0 / 12.0, atol=1e-12)
    with pytest.raises(ValueError):
        q_values(inst5, reciprocal_set(inst7))


def test_oracle_optimize_never_beats_half():
    inst = make_instance(5)
    res = oracle_optimize(inst, samples=20_000, seed=5)
    assert res.best_failure >= 0.5 - 1e-9
    assert res.feasible_count > 0
    assert res.max_weight_sum <= 16.0 / 5.0 + 1e-9
    # Reproducible for a fixed seed.
    res2 = oracle_optimize(inst, samples=20_000, seed=5)
    assert res2.best_failure == res.best_failure
    assert np.array_equal(res2.best_weights, res.best_weights)


def test_oracle_optimize_with_exact_point_and_refinement():
    inst = make_instance(5)
    res = oracle_optimize(
        inst, samples=1_000, seed=2, extra_points=[np.full(4, 0.8)]
    )
    assert abs(res.best_failure - 0.5) <= 1e-12
    refined = oracle_optimize(inst, samples=5_000, seed=2, refine=True)
    assert 0.5 - 1e-9 <= refined.best_failure <= 0.51


def test_oracle_optimize_input_validation():
    inst = make_instance(5)
    with pytest.raises(ValueError):
        oracle_optimize(inst, samples=0)
    with pytest.raises(ValueError):
        oracle_optimize(inst, samples=10, extra_points=[[0.8, 0.8]])


def test_low_failure_needs_nearly_symmetric_weights():
    """Grid search: sub-0.51 failure only happens near the symmetric point.

    Pr(f) = 1 - (5/32) sum(w), so Pr(f) < 0.51 forces sum(w) > 3.136, and
    the pairwise cap w_k + w_l <= 1.6 then pins every coordinate inside
    [3.136 - 1.6 - 0.8, 1.6 - 0.736] = [0.736, 0.864].  Enumerating that box
    on the 0.01 grid and keeping the PSD-feasible points, the largest
    max-norm deviation from 0.8 is exactly 0.06 (e.g. (0.74, 0.8, 0.8, 0.8),
    whose failure operator 0.8 P_1 + 0.06 P_2 is PSD with Pr(f) = 0.509375).
    Random grid points outside the box must all be infeasible or >= 0.51.
    """
    inst = make_instance(5)
    projs = inst.projectors[[1, 2, 3, 4]]
    eye = np.eye(4, dtype=complex)
    sum_floor = 32.0 / 5.0 * (1.0 - 0.51)  # sum(w) above this iff Pr(f) < 0.51
    pair_cap = 1.6

    lo = sum_floor - pair_cap - 0.8  # one pair at the cap, one partner at most 0.8
    hi = pair_cap - lo
    grid = np.round(np.arange(np.floor(lo * 100) / 100, hi + 0.005, 0.01), 10)
    pts = np.array(list(itertools.product(grid, repeat=4)))
    pts = pts[pts.sum(axis=1) > sum_floor]
    pair_ok = np.ones(len(pts), dtype=bool)
    for a in range(4):
        for b in range(a + 1, 4):
            pair_ok &= pts[:, a] + pts[:, b] <= pair_cap + 1e-12
    cand = pts[pair_ok]
    fail_ops = eye[None] - np.einsum("sj,jab->sab", cand, projs)
    feasible = cand[np.linalg.eigvalsh(fail_ops)[:, 0] >= -1e-10]
    assert len(feasible) > 0
    deviation = np.abs(feasible - 0.8).max(axis=1)
    assert deviation.max() <= 0.06 + 1e-12

    rng = np.random.default_rng(823)
    outside = rng.integers(0, 161, size=(100_000, 4)) * 0.01
    outside = outside[np.abs(outside - 0.8).max(axis=1) > 0.06 + 1e-12]
    hot = outside[outside.sum(axis=1) > sum_floor]
    if len(hot):
        ops = eye[None] - np.einsum("sj,jab->sab", hot, projs)
        assert np.all(np.linalg.eigvalsh(ops)[:, 0] < -1e-10)


def test_measurement_annihilates_unpartnered_reciprocals():
    # Outcome k has zero Born weight on every reciprocal state but its own:
    # that is the unambiguous part of the discrimination.
    for inst in all_instances():
        r = reciprocal_set(inst)
        m = optimal_measurement(inst)
        for i, j in enumerate(m.indices):
            amps = np.abs(r.states.conj() @ inst.state(j)) ** 2 * m.weights[i]
            stray = np.delete(amps, i)
            assert stray.max() <= 1e-10
