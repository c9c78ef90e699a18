import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from depclust import canonicalize, clusters_of, minimal_relations, svd, verify_relations
from depclust.relations import RelationError, relation_block, relation_block_inverse
from depclust.synthetic import random_planted

EXAMPLE_Z = np.array([[2.0, -1.0, 1.0, 3.0], [1.0, 2.0, -3.0, 1.0]])


def _span_gap(X, Y):
    """Largest residual of projecting each span onto the other."""
    Qx, _ = np.linalg.qr(X)
    Qy, _ = np.linalg.qr(Y)
    return max(np.linalg.norm(X - Qy @ (Qy.T @ X)) / np.linalg.norm(X),
               np.linalg.norm(Y - Qx @ (Qx.T @ Y)) / np.linalg.norm(Y))


def test_example_cluster_relations(example_A, example_factors):
    basis = minimal_relations(example_A, example_factors, range(6))
    assert basis.deficit == 4
    canon = canonicalize(basis, [0, 1, 2, 3])
    assert canon.pivots == (0, 1, 2, 3)
    np.testing.assert_array_equal(canon.C_bar[:4], -np.eye(4))
    np.testing.assert_allclose(canon.Z, EXAMPLE_Z, atol=1e-8)
    assert verify_relations(example_A, canon).residual <= 1e-10
    assert canon.describe()[0] == "F1 = +2*F5 +1*F6"


def test_explicit_pivots_match_canonicalize(example_A, example_factors):
    direct = minimal_relations(example_A, example_factors, range(6), pivots=[0, 1, 2, 3])
    np.testing.assert_allclose(direct.Z, EXAMPLE_Z, atol=1e-8)


def test_second_example_cluster(example_A, example_factors):
    basis = minimal_relations(example_A, example_factors, range(6, 10), pivots=[8, 9])
    C = basis.embedded(40)
    assert np.linalg.norm(example_A @ C) <= 1e-9 * np.linalg.norm(example_A, 2)
    assert basis.deficit == 2


def test_duplicate_column():
    basis = minimal_relations([[1.0, 1.0]], None, [0, 1])
    assert basis.deficit == 1
    assert basis.ordering[0] in (0, 1)
    np.testing.assert_allclose(basis.C_bar, [[-1.0], [1.0]], atol=1e-12)


def test_simple_sum_relation_spans_kernel():
    rng = np.random.default_rng(4)
    A = rng.standard_normal((20, 3))
    A[:, 2] = A[:, 0] + A[:, 1]
    basis = minimal_relations(A, None, [0, 1, 2])
    assert _span_gap(basis.embedded(3), np.array([[1.0], [1.0], [-1.0]])) <= 1e-8


def test_corrupted_basis_fails_check(example_A, example_factors):
    basis = canonicalize(minimal_relations(example_A, example_factors, range(6)), [0, 1, 2, 3])
    C_bar = basis.C_bar.copy()
    C_bar[4, 0] = -C_bar[4, 0]
    bad = type(basis)(basis.cluster, basis.deficit, C_bar, basis.ordering)
    assert verify_relations(example_A, basis).passed
    check = verify_relations(example_A, bad)
    assert not check.passed
    assert check.residual > 1e3 * check.tolerance


def test_full_column_rank_has_no_relations():
    with pytest.raises(RelationError):
        minimal_relations(np.eye(3), None, [0, 1])


def test_independent_columns_have_zero_restricted_kernel(example_A, example_factors):
    with pytest.raises(RelationError):
        minimal_relations(example_A, example_factors, [12, 13])


def test_bad_pivots(example_A, example_factors):
    with pytest.raises(RelationError):
        minimal_relations(example_A, example_factors, range(6), pivots=[0, 1])
    with pytest.raises(RelationError):
        minimal_relations(example_A, example_factors, range(6), pivots=[0, 1, 2, 30])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_block_inverse_formula(seed):
    rng = np.random.default_rng(seed)
    p, q = rng.integers(1, 7, size=2)
    Z = rng.standard_normal((p, q)) * rng.uniform(0.1, 10)
    B = relation_block(Z)
    assert np.max(np.abs(B @ relation_block_inverse(Z) - np.eye(p + q))) <= 1e-10


def test_block_inverse_on_example(example_A, example_factors):
    Z = canonicalize(minimal_relations(example_A, example_factors, range(6)), [0, 1, 2, 3]).Z
    B = relation_block(Z)
    assert np.max(np.abs(B @ relation_block_inverse(Z) - np.eye(6))) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_span_matches_restricted_kernel(seed):
    inst = random_planted(np.random.default_rng(seed))
    f = svd(inst.A)
    part, _, _ = clusters_of(inst.A, f)
    n = inst.A.shape[1]
    for members, r in zip(part.clusters, part.deficits):
        basis = minimal_relations(inst.A, f, members)
        assert basis.deficit == r
        assert verify_relations(inst.A, basis).passed
        sub_kernel = np.linalg.svd(inst.A[:, members])[2][len(members) - r:].T
        K = np.zeros((n, r))
        K[list(members)] = sub_kernel
        assert _span_gap(basis.embedded(n), K) <= 1e-8


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_pivot_choice_does_not_change_span(seed):
    rng = np.random.default_rng(seed)
    inst = random_planted(rng)
    f = svd(inst.A)
    members = tuple(sorted(inst.clusters[0]))
    r = inst.deficits[0]
    greedy = minimal_relations(inst.A, f, members)
    n = inst.A.shape[1]
    # any other valid pivot set: try random subsets until one is well conditioned
    for _ in range(20):
        piv = rng.choice(members, size=r, replace=False)
        try:
            other = canonicalize(greedy, piv)
        except RelationError:
            continue
        assert _span_gap(greedy.embedded(n), other.embedded(n)) <= 1e-8
        break
