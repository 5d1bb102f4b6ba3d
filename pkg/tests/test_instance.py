"""Tests for the product-state family construction and its dual structures."""

import numpy as np
import pytest

from usdsep import (
    ascending_factorizations,
    check_linear_independence,
    dual_basis_omit,
    instance_from_dict,
    instance_to_dict,
    is_prime,
    kron_all,
    make_instance,
    pairwise_overlaps,
    prime_factors,
    reciprocal_set,
    shift_unitary,
)

PRIMES = (5, 7, 11, 13)


def all_instances():
    """Every ascending factorization with at least two parties, plus defaults."""
    out = []
    for n in PRIMES:
        for dims in ascending_factorizations(n - 1):
            if len(dims) >= 2:
                out.append(make_instance(n, dims))
    return out


def test_prime_helpers():
    assert is_prime(5) and is_prime(13) and not is_prime(6) and not is_prime(1)
    assert prime_factors(12) == (2, 2, 3)
    assert sorted(ascending_factorizations(12)) == [(2, 2, 3), (2, 6), (3, 4), (12,)]


def test_make_instance_matches_closed_form_states():
    inst = make_instance(5)
    assert inst.dims == (2, 2)
    w = np.exp(2j * np.pi / 5.0)
    # State j has amplitude exp(2 pi i j (m1 + 2 m2)/5)/2 at |m1 m2>.
    expected = 0.5 * np.array(
        [[1.0, w ** (2 * j), w**j, w ** (3 * j)] for j in range(1, 6)]
    )
    assert np.max(np.abs(inst.states - expected)) <= 1e-12
    assert np.allclose(inst.state(5), 0.5 * np.ones(4), atol=1e-12)


def test_make_instance_default_dims_and_completeness():
    inst = make_instance(13)
    assert inst.dims == (2, 2, 3)
    for got in all_instances():
        d = got.total_dim
        resolution = (d / got.n) * got.projectors.sum(axis=0)
        assert np.linalg.norm(resolution - np.eye(d)) <= 1e-12
        assert np.max(np.abs(np.linalg.norm(got.states, axis=1) - 1.0)) <= 1e-12


def test_make_instance_rejects_bad_input():
    with pytest.raises(ValueError):
        make_instance(6)
    with pytest.raises(ValueError):
        make_instance(3)
    with pytest.raises(ValueError):
        make_instance(7, dims=(3, 2))
    with pytest.raises(ValueError):
        make_instance(7, dims=(2, 2))
    with pytest.raises(ValueError):
        make_instance(7, dims=(1, 6))
    with pytest.raises(ValueError):
        make_instance(5, omit=6)


def test_shift_unitary_advances_labels():
    inst = make_instance(5)
    u0 = shift_unitary(inst, 0)
    assert np.allclose(np.diag(u0), [1.0, np.exp(2j * np.pi / 5.0)])
    u = kron_all([shift_unitary(inst, a) for a in range(2)])
    for j in range(1, 6):
        succ = 1 if j == 5 else j + 1
        assert np.allclose(u @ inst.state(j), inst.state(succ), atol=1e-12)
    # N applications cycle back to the start exactly.
    assert np.allclose(np.linalg.matrix_power(u, 5), np.eye(4), atol=1e-12)
    with pytest.raises(ValueError):
        shift_unitary(inst, 2)


def test_linear_independence_examples():
    inst = make_instance(5)
    indep, sv_min = check_linear_independence(inst, [2, 3, 4, 5])
    assert indep
    # Frozen from the SVD oracle: the smallest singular value is exactly 1/2.
    assert abs(sv_min - 0.5) <= 1e-9
    assert sv_min > 0.1

    full, _ = check_linear_independence(inst, range(1, 6))
    assert not full

    with pytest.raises(ValueError):
        check_linear_independence(inst, [])
    with pytest.raises(ValueError):
        check_linear_independence(inst, [1, 1])
    with pytest.raises(ValueError):
        check_linear_independence(inst, [0, 1])


def test_any_basis_sized_subset_is_independent():
    rng = np.random.default_rng(2026)
    for inst in all_instances():
        d = inst.total_dim
        for _ in range(50):
            size = int(rng.integers(1, d + 1))
            subset = rng.choice(np.arange(1, inst.n + 1), size=size, replace=False)
            indep, sv_min = check_linear_independence(inst, subset)
            assert indep, f"dependent subset {sorted(subset)} at n={inst.n} dims={inst.dims}"
            assert sv_min > 1e-6
        full, _ = check_linear_independence(inst, range(1, inst.n + 1))
        assert not full


def test_pairwise_overlaps_magnitude_and_phase():
    inst = make_instance(5)
    g = pairwise_overlaps(inst)
    assert np.allclose(np.diag(g), 1.0, atol=1e-12)
    off = g[~np.eye(5, dtype=bool)]
    assert np.max(np.abs(np.abs(off) - 0.25)) <= 1e-12
    # <Psi_j|Psi_k> is one term short of a vanishing root-of-unity sum:
    # -exp(-2 pi i (k - j)/5)/4.
    for j in range(5):
        for k in range(5):
            if j != k:
                pred = -np.exp(-2j * np.pi * (k - j) / 5.0) / 4.0
                assert abs(g[j, k] - pred) <= 1e-12


def test_phase_weighted_sum_vanishes():
    for inst in all_instances():
        acc = sum(
            np.exp(2j * np.pi * j / inst.n) * inst.state(j)
            for j in range(1, inst.n + 1)
        )
        assert np.linalg.norm(acc) <= 1e-12


def test_reciprocal_set_orthogonality_and_overlap():
    inst = make_instance(5)
    r = reciprocal_set(inst)
    assert r.indices == (2, 3, 4, 5)
    retained = inst.states[[1, 2, 3, 4]]
    cross = r.states.conj() @ retained.T
    off = cross - np.diag(np.diag(cross))
    assert np.max(np.abs(off)) <= 1e-10
    partner = np.diag(cross)
    assert np.all(partner.real > 0.0)
    assert np.max(np.abs(partner.imag)) <= 1e-12
    assert np.allclose(r.overlaps, 0.625, atol=1e-12)
    # Specific cross pair called out as a sanity anchor.
    assert abs(r.state(2).conj() @ inst.state(3)) <= 1e-12


def test_reciprocal_overlap_value_across_families():
    for inst in all_instances():
        r = reciprocal_set(inst)
        assert np.max(np.abs(r.overlaps - inst.n / (2.0 * inst.total_dim))) <= 1e-10


def test_reciprocal_set_respects_omit_relabeling():
    # Advancing every label by one (the shift unitary) maps the omit=1
    # family onto the omit=2 one, so the overlap spectrum cannot move.
    base = make_instance(5, omit=1)
    shifted = make_instance(5, omit=2)
    u = kron_all([shift_unitary(base, a) for a in range(2)])
    r_base = reciprocal_set(base)
    r_shift = reciprocal_set(shifted)
    assert np.allclose(r_shift.overlaps, r_base.overlaps, atol=1e-12)
    for j in r_base.indices:
        succ = 1 if j == base.n else j + 1
        if succ == shifted.omit:
            continue
        mapped = u @ r_base.state(j)
        overlap = abs(mapped.conj() @ r_shift.state(succ))
        assert abs(overlap - 1.0) <= 1e-10


def test_dual_basis_omit_deltas_and_unimodular_overlap():
    inst = make_instance(5)
    xi = dual_basis_omit(inst, 2)
    assert xi.ks == (3, 4, 5)
    for k in xi.ks:
        vec = xi.vector(k)
        for j in range(1, 6):
            got = complex(vec.conj() @ inst.state(j))
            if j == 2:
                pred = -np.exp(2j * np.pi * (k - 2) / 5.0)
                assert abs(got - pred) <= 1e-10
                assert abs(abs(got) - 1.0) <= 1e-10
            elif j == k:
                assert abs(got - 1.0) <= 1e-10
            else:
                assert abs(got) <= 1e-10


def test_dual_basis_omit_rejects_bad_labels():
    inst = make_instance(5)
    with pytest.raises(ValueError):
        dual_basis_omit(inst, 1)  # the instance's own omitted label
    with pytest.raises(ValueError):
        dual_basis_omit(inst, 0)
    with pytest.raises(ValueError):
        dual_basis_omit(inst, 6)


def test_instance_dict_round_trip():
    inst = make_instance(7)
    payload = instance_to_dict(inst)
    assert payload["n"] == 7
    assert payload["dims"] == [2, 3]
    assert payload["omit"] == 1
    back = instance_from_dict(payload)
    assert back.n == inst.n and back.dims == inst.dims and back.omit == inst.omit
    assert np.max(np.abs(back.states - inst.states)) <= 1e-12


def test_instance_from_dict_rejects_tampering():
    payload = instance_to_dict(make_instance(5))
    payload["states"][0][0][0] += 1e-3
    with pytest.raises(ValueError):
        instance_from_dict(payload)
    with pytest.raises(ValueError):
        instance_from_dict({"n": 5, "dims": [2, 2]})
