"""Planar rooted trees, based-polygon dissections and the mosaic operad.

A tree with ``n`` leaves labels a face of the associahedron ``K_n``; a tree
with ``d + 1`` internal nodes labels a face of codimension ``d``.  Dually the
same face is a dissection of a based ``(n+1)``-gon by ``d`` diagonals.

Text grammar for trees::

    tree := "L" | "(" tree ("," tree)+ ")"

Whitespace is ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence


class Tree:
    """Planar rooted tree; a leaf has no children, internal nodes have >= 2."""

    __slots__ = ("children", "leaves", "internal", "_key", "_hash")

    def __init__(self, children: Sequence["Tree"] = ()):
        children = tuple(children)
        if len(children) == 1:
            raise ValueError("internal nodes must have arity >= 2")
        for c in children:
            if not isinstance(c, Tree):
                raise TypeError(f"child must be a Tree, got {type(c).__name__}")
        self.children = children
        if children:
            self.leaves = sum(c.leaves for c in children)
            self.internal = 1 + sum(c.internal for c in children)
        else:
            self.leaves = 1
            self.internal = 0
        self._key = (self.leaves, len(children), tuple(c._key for c in children))
        self._hash = hash(self._key)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def arity(self) -> int:
        return len(self.children)

    @property
    def key(self) -> tuple:
        """Total-order key: (leaf count, arity, children lexicographically)."""
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self._key == other._key

    def __lt__(self, other: "Tree") -> bool:
        return self._key < other._key

    def __le__(self, other: "Tree") -> bool:
        return self._key <= other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Tree({format_tree(self)!r})"

    def __str__(self) -> str:
        return format_tree(self)

    def is_binary(self) -> bool:
        return all(n.arity == 2 for n in self.internal_nodes())

    def internal_nodes(self) -> Iterator["Tree"]:
        """Internal nodes in postorder."""
        for c in self.children:
            yield from c.internal_nodes()
        if self.children:
            yield self

    def walk(self, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], "Tree"]]:
        """Yield ``(path, node)`` for internal nodes in postorder."""
        for i, c in enumerate(self.children):
            yield from c.walk(path + (i,))
        if self.children:
            yield path, self

    def mirror(self) -> "Tree":
        """Reverse the child order at every node."""
        if self.is_leaf:
            return self
        return Tree([c.mirror() for c in reversed(self.children)])

    def reverse_at(self, path: Sequence[int]) -> "Tree":
        """Reverse the children of the node reached by ``path``."""
        if not path:
            if self.is_leaf:
                return self
            return Tree(self.children[::-1])
        head, rest = path[0], path[1:]
        kids = list(self.children)
        kids[head] = kids[head].reverse_at(rest)
        return Tree(kids)

    def dimension(self) -> int:
        """Dimension of the labelled face: sum over internal nodes of (arity - 2)."""
        return sum(n.arity - 2 for n in self.internal_nodes())


LEAF = Tree()


def corolla(k: int) -> Tree:
    if k < 2:
        raise ValueError("a corolla needs at least 2 leaves")
    return Tree([LEAF] * k)


def spherical_comb(n: int) -> Tree:
    """Binary tree whose right child is always a leaf (standard spherical coordinates)."""
    t = LEAF
    for _ in range(n - 1):
        t = Tree([t, LEAF])
    return t


# -- text and JSON forms -----------------------------------------------------


class TreeParseError(ValueError):
    """Syntax error in the tree grammar, with 1-based line/column."""

    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.column = col
        self.pos = pos


def parse_tree(text: str) -> Tree:
    pos = 0

    def skip() -> None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node() -> Tree:
        nonlocal pos
        skip()
        if pos >= len(text):
            raise TreeParseError("unexpected end of input", text, pos)
        ch = text[pos]
        if ch == "L":
            pos += 1
            return LEAF
        if ch != "(":
            raise TreeParseError(f"expected 'L' or '(', found {ch!r}", text, pos)
        pos += 1
        kids = [node()]
        while True:
            skip()
            if pos >= len(text):
                raise TreeParseError("unexpected end of input", text, pos)
            ch = text[pos]
            if ch == ",":
                pos += 1
                kids.append(node())
            elif ch == ")":
                if len(kids) < 2:
                    raise TreeParseError("internal node needs at least two children", text, pos)
                pos += 1
                return Tree(kids)
            else:
                raise TreeParseError(f"expected ',' or ')', found {ch!r}", text, pos)

    t = node()
    skip()
    if pos != len(text):
        raise TreeParseError(f"trailing input {text[pos]!r}", text, pos)
    return t


def format_tree(t: Tree) -> str:
    if t.is_leaf:
        return "L"
    return "(" + ",".join(format_tree(c) for c in t.children) + ")"


def tree_to_json(t: Tree):
    if t.is_leaf:
        return "L"
    return [tree_to_json(c) for c in t.children]


def tree_from_json(obj) -> Tree:
    if obj == "L":
        return LEAF
    if isinstance(obj, list):
        return Tree([tree_from_json(c) for c in obj])
    raise ValueError(f"invalid tree JSON: {obj!r}")


# -- enumeration -------------------------------------------------------------


def catalan(k: int) -> int:
    if k < 0:
        raise ValueError("k must be non-negative")
    return math.comb(2 * k, k) // (k + 1)


def _compositions(n: int, min_parts: int = 2) -> Iterator[tuple[int, ...]]:
    # all ordered sums of positive integers equal to n with >= min_parts parts
    def rec(rest: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(1, rest + 1):
            for tail in rec(rest - first):
                yield (first,) + tail

    for c in rec(n):
        if len(c) >= min_parts:
            yield c


@lru_cache(maxsize=None)
def _all_trees(n: int) -> tuple[Tree, ...]:
    if n == 1:
        return (LEAF,)
    out = []
    for comp in _compositions(n):
        for kids in product(*(_all_trees(c) for c in comp)):
            out.append(Tree(kids))
    out.sort()
    return tuple(out)


def enumerate_trees(n: int, internal: int | None = None) -> list[Tree]:
    """All planar rooted trees with ``n`` leaves, optionally with ``internal`` internal nodes."""
    if n < 1:
        raise ValueError("leaf count must be >= 1")
    trees = _all_trees(n)
    if internal is None:
        return list(trees)
    if not 1 <= internal <= max(n - 1, 1):
        raise ValueError(f"internal node count must lie in 1..{n - 1}")
    return [t for t in trees if t.internal == internal]


# -- dissections -------------------------------------------------------------


def _crosses(d1: tuple[int, int], d2: tuple[int, int]) -> bool:
    a, b = d1
    c, d = d2
    return a < c < b < d or c < a < d < b


@dataclass(frozen=True)
class Dissection:
    """Dissection of the based polygon with vertices ``0..n``; the base edge is ``(0, n)``."""

    n: int
    diagonals: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("polygon needs n >= 2 (at least a triangle)")
        diags = frozenset(tuple(sorted(d)) for d in self.diagonals)
        object.__setattr__(self, "diagonals", diags)
        for a, b in diags:
            if not (0 <= a < b <= self.n):
                raise ValueError(f"diagonal {(a, b)} out of range")
            if b - a == 1 or (a, b) == (0, self.n):
                raise ValueError(f"{(a, b)} is a polygon edge, not a diagonal")
        ds = sorted(diags)
        for i, d1 in enumerate(ds):
            for d2 in ds[i + 1 :]:
                if _crosses(d1, d2):
                    raise ValueError(f"diagonals {d1} and {d2} cross")

    @property
    def vertex_count(self) -> int:
        return self.n + 1

    def __len__(self) -> int:
        return len(self.diagonals)


def tree_to_dissection(t: Tree) -> Dissection:
    """Dual dissection: the subtree over leaves ``a+1..b`` becomes chord ``(a, b)``."""
    if t.is_leaf:
        raise ValueError("a single leaf has no dual polygon")
    diags = []

    def rec(node: Tree, start: int, is_root: bool) -> int:
        end = start
        for c in node.children:
            end = rec(c, end, False) if c.children else end + 1
        if not is_root:
            diags.append((start, end))
        return end

    rec(t, 0, True)
    return Dissection(t.leaves, frozenset(diags))


def dissection_to_tree(d: Dissection) -> Tree:
    chords = set(d.diagonals)

    def build(a: int, b: int) -> Tree:
        kids = []
        v = a
        while v < b:
            w = max(
                (e for (s, e) in chords if s == v and e <= b and (s, e) != (a, b)),
                default=v + 1,
            )
            kids.append(LEAF if w == v + 1 else build(v, w))
            v = w
        return Tree(kids)

    return build(0, d.n)


def enumerate_dissections(n: int, diagonals: int | None = None) -> list[Dissection]:
    """All dissections of the based ``(n+1)``-gon by backtracking over diagonals."""
    cand = [(a, b) for a in range(n + 1) for b in range(a + 2, n + 1) if (a, b) != (0, n)]
    out = []

    def rec(i: int, chosen: list) -> None:
        if diagonals is None or len(chosen) == diagonals:
            out.append(Dissection(n, frozenset(chosen)))
        if diagonals is not None and len(chosen) == diagonals:
            return
        for j in range(i, len(cand)):
            c = cand[j]
            if all(not _crosses(c, e) for e in chosen):
                chosen.append(c)
                rec(j + 1, chosen)
                chosen.pop()

    rec(0, [])
    return out


# -- operad ------------------------------------------------------------------


def mosaic_compose(y: Tree, xs: Sequence[Tree]) -> Tree:
    """Graft the root of ``xs[i]`` onto leaf ``i`` of ``y`` (leaves numbered left to right)."""
    if len(xs) != y.leaves:
        raise ValueError(f"arity mismatch: tree has {y.leaves} leaves, got {len(xs)} inputs")
    it = iter(xs)

    def graft(node: Tree) -> Tree:
        if node.is_leaf:
            return next(it)
        return Tree([graft(c) for c in node.children])

    return graft(y)


def dyslexic_canonical(t: Tree) -> Tree:
    """Least tree (in the ``Tree.key`` order) reachable by reversing children at any nodes."""
    if t.is_leaf:
        return t
    kids = tuple(dyslexic_canonical(c) for c in t.children)
    rev = kids[::-1]
    if tuple(c.key for c in rev) < tuple(c.key for c in kids):
        kids = rev
    return Tree(kids)


def face_counts_bruteforce(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Planar and dyslexic tree counts with ``n`` leaves, indexed by codimension ``0..n-2``."""
    if not 2 <= n <= 10:
        raise ValueError("brute force is limited to 2 <= n <= 10")
    planar = [0] * (n - 1)
    classes: list[set] = [set() for _ in range(n - 1)]
    for t in _all_trees(n):
        d = t.internal - 1
        planar[d] += 1
        classes[d].add(dyslexic_canonical(t))
    return tuple(planar), tuple(len(c) for c in classes)


# -- Devadoss-Read series ----------------------------------------------------

# Bivariate truncated series: dict {(m, n): Fraction}, m = power of x, n = power of y.
Series = dict


def _s_add(a: Series, b: Series) -> Series:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _s_mul(a: Series, b: Series, max_n: int) -> Series:
    out: Series = {}
    for (m1, n1), c1 in a.items():
        for (m2, n2), c2 in b.items():
            n = n1 + n2
            if n > max_n:
                continue
            k = (m1 + m2, n)
            s = out.get(k, 0) + c1 * c2
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def _s_scale(a: Series, c) -> Series:
    return {k: v * c for k, v in a.items()} if c else {}


def _s_shift_x(a: Series) -> Series:
    return {(m + 1, n): v for (m, n), v in a.items()}


def _s_geometric(a: Series, max_n: int) -> Series:
    # 1/(1 - a) for a without constant term (min y-degree >= 1)
    out: Series = {(0, 0): Fraction(1)}
    power: Series = {(0, 0): Fraction(1)}
    for _ in range(max_n):
        power = _s_mul(power, a, max_n)
        if not power:
            break
        out = _s_add(out, power)
    return out


def _s_square_args(a: Series, max_n: int) -> Series:
    return {(2 * m, 2 * n): v for (m, n), v in a.items() if 2 * n <= max_n}


class SeriesError(ArithmeticError):
    """The series solution produced a non-integral coefficient."""


@dataclass(frozen=True)
class SeriesTable:
    """Coefficients ``a[m, n]``: classes of faces of ``K_n`` with codimension ``m - 1``."""

    max_n: int
    coeffs: dict

    def a(self, m: int, n: int) -> int:
        return self.coeffs.get((m, n), 0)

    def row(self, n: int) -> tuple[int, ...]:
        """``(a[1,n], ..., a[n-1,n])``, by increasing codimension."""
        if not 2 <= n <= self.max_n:
            raise ValueError(f"row {n} outside 2..{self.max_n}")
        return tuple(self.a(m, n) for m in range(1, n))

    def sphere_row(self, sphere: int) -> tuple[int, ...]:
        """Counts for ``S^sphere`` ordered by increasing number of continuous parameters."""
        return self.row(sphere + 1)[::-1]

    def total(self, n: int) -> int:
        return sum(self.row(n))


def devadoss_read(max_n: int) -> SeriesTable:
    """Solve ``A = y + x/2 (A^2/(1-A) + (1+A) A2/(1-A2))`` with ``A2 = A(x^2, y^2)``.

    Fixed-point iteration on series truncated at y-degree ``max_n``, exact
    over the rationals; stops when two successive iterates coincide.
    """
    if max_n < 2:
        raise ValueError("max_n must be >= 2")
    half = Fraction(1, 2)
    y: Series = {(0, 1): Fraction(1)}
    a: Series = {}
    for _ in range(max_n + 2):
        a2 = _s_square_args(a, max_n)
        planar = _s_mul(_s_mul(a, a, max_n), _s_geometric(a, max_n), max_n)
        one_plus_a = _s_add({(0, 0): Fraction(1)}, a)
        palin = _s_mul(_s_mul(one_plus_a, a2, max_n), _s_geometric(a2, max_n), max_n)
        new = _s_add(y, _s_shift_x(_s_scale(_s_add(planar, palin), half)))
        if new == a:
            break
        a = new
    else:
        raise SeriesError("fixed-point iteration did not stabilise")

    coeffs = {}
    for (m, n), v in a.items():
        if v.denominator != 1:
            raise SeriesError(f"non-integral coefficient a[{m},{n}] = {v}")
        if n >= 2:
            coeffs[(m, n)] = int(v)
    return SeriesTable(max_n, coeffs)
