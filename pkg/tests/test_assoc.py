import math
import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepcoords.assoc import (
    LEAF,
    Dissection,
    Tree,
    TreeParseError,
    catalan,
    corolla,
    devadoss_read,
    dissection_to_tree,
    dyslexic_canonical,
    enumerate_dissections,
    enumerate_trees,
    face_counts_bruteforce,
    format_tree,
    mosaic_compose,
    parse_tree,
    spherical_comb,
    tree_from_json,
    tree_to_dissection,
    tree_to_json,
)

# Rows of the published table, S^2..S^10, by increasing parameter count.
TABLE = {
    2: (1, 1),
    3: (2, 3, 1),
    4: (3, 8, 5, 1),
    5: (6, 20, 22, 8, 1),
    6: (11, 49, 73, 46, 11, 1),
    7: (23, 119, 233, 206, 87, 15, 1),
    8: (46, 288, 689, 807, 485, 147, 19, 1),
    9: (98, 696, 1988, 2891, 2320, 1021, 236, 24, 1),
    10: (207, 1681, 5561, 9737, 9800, 5795, 1960, 356, 29, 1),
}


def test_catalan():
    assert catalan(0) == 1
    assert catalan(3) == 5
    assert catalan(5) == math.comb(10, 5) // 6 == 42


def test_enumerate_examples():
    assert len(enumerate_trees(4, 3)) == 5
    assert enumerate_trees(2) == [corolla(2)]
    assert enumerate_trees(4, 1) == [corolla(4)]
    assert enumerate_trees(1) == [LEAF]


@pytest.mark.parametrize("n", range(2, 9))
def test_binary_tree_count_is_catalan(n):
    trees = enumerate_trees(n, n - 1)
    assert len(trees) == catalan(n - 1)
    assert all(t.is_binary() for t in trees)
    assert len(set(trees)) == len(trees)


def test_enumeration_is_sorted_and_deterministic():
    a = enumerate_trees(6)
    assert a == sorted(a)
    assert [format_tree(t) for t in a] == [format_tree(t) for t in enumerate_trees(6)]


# -- grammar --------------------------------------------------------------------


def test_parse_and_format():
    t = parse_tree(" ( (L, L) ,\n L ) ")
    assert format_tree(t) == "((L,L),L)"
    assert t == spherical_comb(3)
    assert format_tree(corolla(2)) == "(L,L)"


@pytest.mark.parametrize(
    "text, line, column",
    [("((L,L),L", 1, 9), ("(L)", 1, 3), ("(L,X)", 1, 4), ("(L,L)\n)", 2, 1), ("", 1, 1)],
)
def test_parse_errors_report_position(text, line, column):
    with pytest.raises(TreeParseError) as err:
        parse_tree(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_json_form():
    t = parse_tree("((L,L),L,(L,L,L))")
    assert tree_to_json(t) == [["L", "L"], "L", ["L", "L", "L"]]
    assert tree_from_json(tree_to_json(t)) == t


# -- duality ----------------------------------------------------------------------


def test_corolla_duals():
    assert tree_to_dissection(corolla(2)) == Dissection(2, frozenset())
    assert tree_to_dissection(corolla(4)) == Dissection(4, frozenset())
    assert dissection_to_tree(Dissection(4, frozenset())) == corolla(4)


def test_pentagon_triangulations_match_binary_trees():
    tris = enumerate_dissections(4, 2)
    assert len(tris) == 5
    assert {dissection_to_tree(d) for d in tris} == set(enumerate_trees(4, 3))


@pytest.mark.parametrize("n", range(2, 9))
def test_duality_is_bijective(n):
    trees = enumerate_trees(n)
    dissections = enumerate_dissections(n)
    assert len(trees) == len(dissections)
    for t in trees:
        d = tree_to_dissection(t)
        assert len(d) == t.internal - 1
        assert dissection_to_tree(d) == t
    assert {tree_to_dissection(t) for t in trees} == set(dissections)


def test_crossing_diagonals_rejected():
    with pytest.raises(ValueError):
        Dissection(4, frozenset({(0, 2), (1, 3)}))
    with pytest.raises(ValueError):
        Dissection(4, frozenset({(0, 1)}))


# -- operad -------------------------------------------------------------------------


def test_compose_identity_and_example():
    y = parse_tree("(L,(L,L),L)")
    assert mosaic_compose(y, [LEAF] * y.leaves) == y
    assert mosaic_compose(LEAF, [y]) == y
    assert mosaic_compose(corolla(2), [corolla(2), LEAF]) == parse_tree("((L,L),L)")
    with pytest.raises(ValueError):
        mosaic_compose(corolla(2), [LEAF])


def small_trees(max_leaves=5):
    return [t for n in range(1, max_leaves + 1) for t in enumerate_trees(n)]


def test_operad_axioms_exhaustive():
    trees = small_trees(4)
    for y in trees:
        assert mosaic_compose(y, [LEAF] * y.leaves) == y
        assert mosaic_compose(LEAF, [y]) == y
    rng = random.Random(11)
    for _ in range(300):
        z = rng.choice([t for t in trees if t.leaves <= 3])
        ys = [rng.choice([t for t in trees if t.leaves <= 3]) for _ in range(z.leaves)]
        xs = [[rng.choice(trees) for _ in range(y.leaves)] for y in ys]
        left = mosaic_compose(mosaic_compose(z, ys), [x for group in xs for x in group])
        right = mosaic_compose(z, [mosaic_compose(y, g) for y, g in zip(ys, xs)])
        assert left == right


# -- dyslexic classes -----------------------------------------------------------------


def test_dyslexic_examples():
    binary4 = enumerate_trees(4, 3)
    assert len({dyslexic_canonical(t) for t in binary4}) == 2
    assert len({dyslexic_canonical(t) for t in enumerate_trees(5, 4)}) == 3
    for t in small_trees(6):
        assert dyslexic_canonical(t.mirror()) == dyslexic_canonical(t)
        c = dyslexic_canonical(t)
        assert dyslexic_canonical(c) == c


def reversal_orbit(t: Tree) -> set:
    # brute-force closure under single-node reversals
    seen, todo = {t}, [t]
    while todo:
        s = todo.pop()
        for path, _ in s.walk():
            r = s.reverse_at(path)
            if r not in seen:
                seen.add(r)
                todo.append(r)
    return seen


@pytest.mark.parametrize("n", range(2, 7))
def test_canonical_is_orbit_minimum(n):
    for t in enumerate_trees(n):
        orbit = reversal_orbit(t)
        c = dyslexic_canonical(t)
        assert c == min(orbit)
        assert all(dyslexic_canonical(s) == c for s in orbit)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 7).flatmap(lambda n: st.sampled_from(enumerate_trees(n))), st.lists(st.integers(0, 50), max_size=6))
def test_canonical_constant_under_reversals(t, picks):
    s = t
    for k in picks:
        paths = [p for p, _ in s.walk()]
        s = s.reverse_at(paths[k % len(paths)])
    assert dyslexic_canonical(s) == dyslexic_canonical(t)


# -- series ------------------------------------------------------------------------------


def test_series_rows_and_invariants():
    table = devadoss_read(12)
    assert table.row(4) == (1, 3, 2)
    assert table.row(8) == (1, 15, 87, 206, 233, 119, 23)
    for n in range(2, 13):
        assert table.a(1, n) == 1
        assert all(isinstance(v, int) and v >= 0 for v in table.row(n))


def test_series_reproduces_table():
    table = devadoss_read(11)
    for sphere, row in TABLE.items():
        assert table.sphere_row(sphere) == row


def test_bruteforce_examples():
    planar, dys = face_counts_bruteforce(4)
    assert planar == (1, 5, 5)
    assert dys == (1, 3, 2)
    assert sum(face_counts_bruteforce(5)[1]) == 17


@pytest.mark.parametrize("n", range(2, 9))
def test_bruteforce_matches_series(n):
    table = devadoss_read(8)
    planar, dys = face_counts_bruteforce(n)
    assert dys == table.row(n)
    # planar face counts of K_n are the Kirkman-Cayley numbers
    for d, count in enumerate(planar):
        assert count == math.comb(n - 2, d) * math.comb(n + d, d) // (d + 1)


def test_face_dimension():
    assert corolla(5).dimension() == 3
    assert spherical_comb(5).dimension() == 0
