from fractions import Fraction
from itertools import combinations

import pytest

from sepcoords.exactpoly import Poly, PolyMatrix, poisson_bracket, poly_eval
from sepcoords.killing import (
    KillingVector,
    all_permutations,
    apply_permutation,
    bracket,
    compose_permutations,
    kd_relation_instances,
    kij_matrix,
    kij_phase,
    pair_index,
    verify_independence,
    verify_kd_relations,
)


def X(n, i):
    return Poly.x(n, i)


def P(n, i):
    return Poly.p(n, i)


def test_kij_phase_explicit():
    n = 2
    x1, x2, p1, p2 = X(n, 1), X(n, 2), P(n, 1), P(n, 2)
    expected = x2**2 * p1**2 + x1**2 * p2**2 - (x1 * x2 * p1 * p2).scale(2)
    assert kij_phase(1, 2, n) == expected
    assert len(kij_phase(1, 2, n)) == 3
    assert kij_phase(2, 1, n) == kij_phase(1, 2, n)
    assert poly_eval(kij_phase(1, 2, n), [1, 0, 1, 0]) == 0.0


def test_kij_phase_degrees():
    f = kij_phase(2, 4, 5)
    assert f.degrees() == {(2, 2)}


def test_kij_matrix_block():
    n = 3
    m = kij_matrix(1, 2, n)
    x1, x2 = X(n, 1), X(n, 2)
    z = Poly.zero(n)
    assert m == PolyMatrix([[x2 * x2, -(x1 * x2), z], [-(x1 * x2), x1 * x1, z], [z, z, z]])
    assert m.is_symmetric()


@pytest.mark.parametrize("i,j", list(combinations(range(1, 5), 2)))
def test_kij_matrix_trace_and_kernel(i, j):
    n = 4
    m = kij_matrix(i, j, n)
    assert m.trace() == X(n, i) ** 2 + X(n, j) ** 2
    assert all(e.is_zero() for e in m.apply([X(n, k) for k in range(1, n + 1)]))


def test_metric_is_all_ones():
    n = 4
    metric = KillingVector.metric(n).phase()
    xs = [X(n, k) for k in range(1, n + 1)]
    ps = [P(n, k) for k in range(1, n + 1)]
    sq = lambda v: sum(v, Poly.zero(n))
    lagrange = sq([a * a for a in xs]) * sq([b * b for b in ps]) - sq([a * b for a, b in zip(xs, ps)]) ** 2
    assert metric == lagrange


# -- relations ---------------------------------------------------------------------


def test_relations_n4_poisson():
    report = verify_kd_relations(4, "poisson")
    assert report.passed
    assert all(r.residual_term_count == 0 for r in report.results)
    assert len(report.results) == 3 + 6 * 2


def test_relations_n3_commutator():
    report = verify_kd_relations(3, "commutator")
    assert report.passed
    assert ("overlapping", (1, 2, 3)) in [(r.relation, r.indices) for r in report.results]


def test_poisson_k12_k23_explicit():
    n = 3
    x1, x2, x3 = (X(n, i) for i in (1, 2, 3))
    p1, p2, p3 = (P(n, i) for i in (1, 2, 3))
    expected = ((x1 * p2 - x2 * p1) * (x2 * p3 - x3 * p2) * (x3 * p1 - x1 * p3)).scale(4)
    got = poisson_bracket(kij_phase(1, 2, n), kij_phase(2, 3, n))
    assert got == expected
    assert not got.is_zero()
    assert poisson_bracket(kij_phase(2, 1, n), kij_phase(1, 3, n)) == -expected


def test_relations_reject_bad_input():
    with pytest.raises(ValueError):
        verify_kd_relations(2, "poisson")
    with pytest.raises(ValueError):
        verify_kd_relations(4, "lie")


def test_broken_relation_is_reported():
    # a relation with the wrong sign is detected by the same machinery
    n = 3
    a = KillingVector.basis(1, 2, n)
    b = KillingVector.basis(1, 3, n) - KillingVector.basis(2, 3, n)
    assert not bracket(a, b, "poisson").is_zero()
    assert not bracket(a, b, "commutator").is_zero()


@pytest.mark.parametrize("n", range(3, 7))
def test_representations_agree_on_relations(n):
    cases = []
    for rel, idx in kd_relation_instances(n):
        if rel == "disjoint":
            cases.append((KillingVector.basis(idx[0], idx[1], n), KillingVector.basis(idx[2], idx[3], n)))
        else:
            i, j, k = idx
            cases.append((KillingVector.basis(i, j, n), KillingVector.basis(i, k, n) + KillingVector.basis(j, k, n)))
            # a non-relation sharing one index
            cases.append((KillingVector.basis(i, j, n), KillingVector.basis(j, k, n)))
    for a, b in cases:
        assert bracket(a, b, "poisson").is_zero() == bracket(a, b, "commutator").is_zero()


# -- independence ---------------------------------------------------------------------


@pytest.mark.parametrize("kind", ["poisson", "commutator"])
@pytest.mark.parametrize("n, gen, br", [(2, 1, 0), (3, 3, 1), (4, 6, 4)])
def test_independence_examples(kind, n, gen, br):
    rep = verify_independence(n, kind)
    assert (rep.generator_rank, rep.bracket_rank) == (gen, br)
    assert rep.passed


# -- permutation action ------------------------------------------------------------------


def test_permutation_examples():
    n = 3
    k12 = KillingVector.basis(1, 2, n)
    assert apply_permutation((2, 1, 3), k12) == k12
    assert apply_permutation((2, 3, 1), k12) == KillingVector.basis(2, 3, n)
    for sigma in all_permutations(n):
        assert apply_permutation(sigma, KillingVector.metric(n)) == KillingVector.metric(n)
    with pytest.raises(ValueError):
        apply_permutation((1, 1, 2), k12)


@pytest.mark.parametrize("n", [3, 4])
def test_permutation_is_group_action(n):
    v = KillingVector(n, tuple(Fraction(k + 1, 3) for k in range(n * (n - 1) // 2)))
    perms = list(all_permutations(n))
    for s in perms:
        for t in perms:
            lhs = apply_permutation(compose_permutations(s, t), v)
            assert lhs == apply_permutation(s, apply_permutation(t, v))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_bracket_equivariance(n):
    perms = list(all_permutations(n))[:: max(1, len(list(all_permutations(n))) // 12)]
    gens = pair_index(n)
    for sigma in perms:
        for a, b in combinations(gens, 2):
            ka, kb = KillingVector.basis(*a, n), KillingVector.basis(*b, n)
            lhs = bracket(ka, kb, "poisson").relabel(sigma)
            rhs = bracket(apply_permutation(sigma, ka), apply_permutation(sigma, kb), "poisson")
            assert lhs == rhs


def test_killing_vector_json_like_access():
    v = KillingVector.from_dict(3, {(2, 1): 2, (1, 3): Fraction(1, 2)})
    assert v[1, 2] == 2 and v[3, 1] == Fraction(1, 2) and v[2, 3] == 0
    assert str(v) == "2*K_12 + 1/2*K_13"
