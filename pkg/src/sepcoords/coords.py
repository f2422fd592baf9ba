"""Separation coordinates on spheres: elliptic, polyspherical and tree-composed.

Elliptic coordinates with parameters ``Lam_1 < ... < Lam_N`` at ``x`` on the
unit sphere are the roots of ``sum_k x_k^2 / (Lam_k - lam) = 0``; exactly one
root lies between consecutive parameters.  A :class:`LabeledTree` composes
elliptic charts along the sphere join ``y o (x_1, ..., x_k) = (y_1 x_1, ...,
y_k x_k)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

from .assoc import LEAF, Tree, enumerate_trees

NORM_TOL = 1e-12
COMPOSE_TOL = 1e-9
DEFLATION = 1e-20
POLE_OFFSET = 1e-12
BISECT_TOL = 1e-13
BISECT_MAXITER = 200
FD_STEP = 1e-5


class CoordinateError(ValueError):
    """Input outside the domain of a coordinate map; ``path`` names the tree node if any."""

    def __init__(self, message: str, path: tuple[int, ...] | None = None):
        if path is not None:
            message = f"{message} (node {list(path)})"
        super().__init__(message)
        self.path = path


class ConvergenceError(ArithmeticError):
    pass


# -- labelled trees ----------------------------------------------------------


class LabeledTree:
    """Planar tree with normalized elliptic parameters ``0 = Lam_1 < ... < Lam_k = 1`` per node."""

    __slots__ = ("children", "params", "leaves")

    def __init__(self, children: Sequence["LabeledTree"] = (), params: Sequence = ()):
        children = tuple(children)
        params = tuple(Fraction(p) for p in params)
        if not children:
            if params:
                raise ValueError("leaves carry no parameters")
        else:
            if len(children) < 2:
                raise ValueError("internal nodes must have arity >= 2")
            if len(params) != len(children):
                raise ValueError(f"node of arity {len(children)} needs {len(children)} parameters")
            if params[0] != 0 or params[-1] != 1:
                raise ValueError("parameters must be normalized to first 0, last 1")
            if any(a >= b for a, b in zip(params, params[1:])):
                raise ValueError("parameters must be strictly increasing")
        self.children = children
        self.params = params
        self.leaves = sum(c.leaves for c in children) if children else 1

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def tree(self) -> Tree:
        if self.is_leaf:
            return LEAF
        return Tree([c.tree for c in self.children])

    def walk(self, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], "LabeledTree"]]:
        """``(path, node)`` over internal nodes in postorder."""
        for i, c in enumerate(self.children):
            yield from c.walk(path + (i,))
        if self.children:
            yield path, self

    def parameter_count(self) -> int:
        return sum(len(n.params) - 2 for _, n in self.walk())

    def with_params(self, path: Sequence[int], params: Sequence) -> "LabeledTree":
        """Copy with the parameters at ``path`` replaced."""
        if not path:
            return LabeledTree(self.children, params)
        kids = list(self.children)
        kids[path[0]] = kids[path[0]].with_params(path[1:], params)
        return LabeledTree(kids, self.params)

    @classmethod
    def from_tree(cls, t: Tree, params: Mapping[tuple[int, ...], Sequence] | None = None,
                  _path: tuple[int, ...] = ()) -> "LabeledTree":
        """Label ``t``; nodes missing from ``params`` get evenly spaced values."""
        if t.is_leaf:
            return cls()
        kids = [cls.from_tree(c, params, _path + (i,)) for i, c in enumerate(t.children)]
        k = t.arity
        lam = (params or {}).get(_path)
        if lam is None:
            lam = [Fraction(j, k - 1) for j in range(k)]
        return cls(kids, lam)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabeledTree):
            return NotImplemented
        return self.params == other.params and self.children == other.children

    def __hash__(self) -> int:
        return hash((self.params, self.children))

    def __repr__(self) -> str:
        return f"LabeledTree({labeled_to_json(self)!r})"


def _param_to_json(p: Fraction):
    return str(p)


def labeled_to_json(t: LabeledTree):
    if t.is_leaf:
        return "L"
    return {
        "children": [labeled_to_json(c) for c in t.children],
        "params": [_param_to_json(p) for p in t.params],
    }


def labeled_from_json(obj) -> LabeledTree:
    if obj == "L":
        return LabeledTree()
    if isinstance(obj, dict) and "children" in obj:
        kids = [labeled_from_json(c) for c in obj["children"]]
        if "params" in obj:
            params = [Fraction(repr(p)) if isinstance(p, float) else Fraction(p) for p in obj["params"]]
            return LabeledTree(kids, params)
        k = len(kids)
        return LabeledTree(kids, [Fraction(j, k - 1) for j in range(k)])
    raise ValueError(f"invalid labeled tree JSON: {obj!r}")


def random_labeled_tree(rng: np.random.Generator, leaves: int, denominator: int = 20) -> LabeledTree:
    """Uniformly chosen planar shape with random rational parameters ``j/denominator``."""
    shapes = enumerate_trees(leaves)
    t = shapes[int(rng.integers(len(shapes)))]
    params = {}
    for path, node in t.walk():
        inner = rng.choice(np.arange(1, denominator), size=node.arity - 2, replace=False)
        params[path] = [Fraction(0)] + [Fraction(int(j), denominator) for j in sorted(inner)] + [Fraction(1)]
    return LabeledTree.from_tree(t, params)


# -- elliptic coordinates ----------------------------------------------------


def _as_params(lam: Sequence) -> list[float]:
    lam = [float(v) for v in lam]
    if any(a >= b for a, b in zip(lam, lam[1:])):
        raise CoordinateError("parameters must be strictly increasing")
    return lam


def _check_unit(x: Sequence[float], tol: float = NORM_TOL) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if abs(np.linalg.norm(x) - 1.0) > tol:
        raise CoordinateError(f"point is not a unit vector (|x| = {np.linalg.norm(x)!r})")
    return x


def _bisect(f, lo: float, hi: float) -> float:
    # f increases from -inf at lo to +inf at hi; only interior points are evaluated
    resolution = min(BISECT_TOL, 4 * math.ulp(max(abs(lo), abs(hi))))
    a, b = lo + POLE_OFFSET, hi - POLE_OFFSET
    if not a < b or f(a) >= 0:
        a = lo
    if not a < b or f(b) <= 0:
        b = hi
    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (a + b)
        if b - a <= resolution or mid <= a or mid >= b:
            return mid
        fm = f(mid)
        if fm == 0:
            return mid
        if fm < 0:
            a = mid
        else:
            b = mid
    raise ConvergenceError(f"bisection did not converge in ({lo!r}, {hi!r})")


def elliptic_roots(lam: Sequence, x: Sequence[float]) -> list[float]:
    """Elliptic coordinates of the unit vector ``x``.

    Components with ``x_k^2`` below the deflation threshold are dropped; each
    contributes the degenerate root ``Lam_k`` (the limit as ``x_k -> 0``).
    """
    lam = _as_params(lam)
    x = _check_unit(x)
    if len(lam) != len(x):
        raise CoordinateError(f"need {len(lam)} components, got {len(x)}")
    w = x * x
    active = [k for k in range(len(lam)) if w[k] >= DEFLATION]
    la = [lam[k] for k in active]
    wa = [float(w[k]) for k in active]

    def f(t: float) -> float:
        return sum(wk / (lk - t) for wk, lk in zip(wa, la))

    roots = [_bisect(f, la[i], la[i + 1]) for i in range(len(la) - 1)]
    roots += [lam[k] for k in range(len(lam)) if w[k] < DEFLATION]
    return sorted(roots)


def elliptic_point(lam: Sequence, roots: Sequence[float], signs: Sequence[int] | None = None) -> np.ndarray:
    """Inverse of :func:`elliptic_roots` for strictly interlacing ``roots``."""
    lam = _as_params(lam)
    n = len(lam)
    roots = [float(r) for r in roots]
    if len(roots) != n - 1:
        raise CoordinateError(f"need {n - 1} coordinate values, got {len(roots)}")
    if signs is None:
        signs = [1] * n
    if len(signs) != n:
        raise CoordinateError(f"need {n} signs, got {len(signs)}")
    for i, r in enumerate(roots):
        if not lam[i] < r < lam[i + 1]:
            raise CoordinateError(
                f"coordinate {r!r} does not interlace ({lam[i]!r}, {lam[i + 1]!r})"
            )
    x = np.empty(n)
    for k in range(n):
        num = math.prod(lam[k] - r for r in roots)
        den = math.prod(lam[k] - lam[l] for l in range(n) if l != k)
        rad = num / den
        if rad < 0:
            raise CoordinateError(f"negative radicand {rad!r} at component {k + 1}")
        x[k] = (1 if signs[k] >= 0 else -1) * math.sqrt(rad)
    return x


def sckt_eigen_oracle(lam: Sequence, x: Sequence[float]) -> list[float]:
    """Eigenvalues of ``diag(Lam)`` compressed to the tangent space at ``x``."""
    lam = np.asarray(_as_params(lam))
    x = _check_unit(x)
    frame = tangent_frame(x)
    lt = frame @ np.diag(lam) @ frame.T
    try:
        return sorted(np.linalg.eigvalsh(lt).tolist())
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceError(f"eigen-solver failed: {exc}") from exc


def tangent_frame(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``x^perp`` as the rows of an ``(N-1) x N`` array."""
    _, s, vt = np.linalg.svd(np.asarray(x, dtype=float).reshape(1, -1))
    if s[0] < 1e-12:
        raise CoordinateError("cannot build a tangent frame at the zero vector")
    return vt[1:]


# -- joins, polyspherical and tree charts ------------------------------------


def sphere_compose(y: Sequence[float], xs: Sequence[Sequence[float]]) -> np.ndarray:
    """``(y_1 x_1, ..., y_k x_k)`` on the join of the spheres."""
    y = _check_unit(y, COMPOSE_TOL)
    if len(xs) != len(y):
        raise CoordinateError(f"need {len(y)} blocks, got {len(xs)}")
    blocks = [_check_unit(b, COMPOSE_TOL) * yk for yk, b in zip(y, xs)]
    return np.concatenate(blocks)


def polyspherical_point(t: Tree, angles: Sequence[float]) -> np.ndarray:
    """Vilenkin's recursion ``z = (x cos phi, y sin phi)``; angles go to nodes in postorder."""
    if not t.is_binary():
        raise CoordinateError("polyspherical coordinates need a binary tree")
    if len(angles) != t.leaves - 1:
        raise CoordinateError(f"need {t.leaves - 1} angles, got {len(angles)}")
    it = iter(angles)

    def rec(node: Tree) -> np.ndarray:
        if node.is_leaf:
            return np.ones(1)
        left, right = (rec(c) for c in node.children)
        phi = next(it)
        return np.concatenate([left * math.cos(phi), right * math.sin(phi)])

    return rec(t)


def tree_coords_forward(t: LabeledTree, x: Sequence[float]) -> dict[tuple[int, ...], list[float]]:
    """Coordinates of ``x`` in the chart of ``t``, keyed by node path (postorder)."""
    x = _check_unit(x)
    if len(x) != t.leaves:
        raise CoordinateError(f"tree has {t.leaves} leaves but point has {len(x)} components")
    out: dict[tuple[int, ...], list[float]] = {}

    def rec(node: LabeledTree, v: np.ndarray, path: tuple[int, ...]) -> None:
        if node.is_leaf:
            return
        blocks, start = [], 0
        for c in node.children:
            blocks.append(v[start : start + c.leaves])
            start += c.leaves
        radii = np.array([np.linalg.norm(b) for b in blocks])
        radii = radii / np.linalg.norm(radii)
        for i, (c, b, r) in enumerate(zip(node.children, blocks, radii)):
            if c.is_leaf:
                continue
            if r * r < DEFLATION:
                raise CoordinateError("degenerate block norm", path + (i,))
            rec(c, b / np.linalg.norm(b), path + (i,))
        out[path] = elliptic_roots(node.params, radii)

    rec(t, x, ())
    return {p: out[p] for p, _ in t.walk()}


def tree_coords_inverse(
    t: LabeledTree,
    coords: Mapping[tuple[int, ...], Sequence[float]],
    signs: Sequence[int] | None = None,
) -> np.ndarray:
    """Point of the sphere with the given node coordinates; ``signs`` fix each component's sign."""
    if signs is None:
        signs = [1] * t.leaves
    if len(signs) != t.leaves:
        raise CoordinateError(f"need {t.leaves} signs, got {len(signs)}")
    sign_iter = iter(signs)

    def rec(node: LabeledTree, path: tuple[int, ...]) -> np.ndarray:
        if node.is_leaf:
            return np.array([1.0 if next(sign_iter) >= 0 else -1.0])
        kids = [rec(c, path + (i,)) for i, c in enumerate(node.children)]
        if path not in coords:
            raise CoordinateError("missing coordinates", path)
        try:
            y = elliptic_point(node.params, coords[path])
        except CoordinateError as exc:
            raise CoordinateError(str(exc), path) from None
        return sphere_compose(y, kids)

    return rec(t, ())


def flatten_coords(t: LabeledTree, coords: Mapping[tuple[int, ...], Sequence[float]]) -> list[float]:
    return [v for p, _ in t.walk() for v in coords[p]]


def unflatten_coords(t: LabeledTree, flat: Sequence[float]) -> dict[tuple[int, ...], list[float]]:
    out, pos = {}, 0
    for p, node in t.walk():
        k = len(node.params) - 1
        out[p] = [float(v) for v in flat[pos : pos + k]]
        pos += k
    if pos != len(flat):
        raise CoordinateError(f"expected {pos} coordinate values, got {len(flat)}")
    return out


def coordinate_frame(t: LabeledTree, x: Sequence[float], step: float = FD_STEP) -> np.ndarray:
    """Columns ``d x / d lam_c`` of the inverse chart at ``x`` (central differences)."""
    x = _check_unit(x)
    signs = [1 if v >= 0 else -1 for v in x]
    flat = flatten_coords(t, tree_coords_forward(t, x))
    cols = []
    for c in range(len(flat)):
        up, dn = list(flat), list(flat)
        up[c] += step
        dn[c] -= step
        xp = tree_coords_inverse(t, unflatten_coords(t, up), signs)
        xm = tree_coords_inverse(t, unflatten_coords(t, dn), signs)
        cols.append((xp - xm) / (2 * step))
    return np.array(cols).T


def _first_columns(t: LabeledTree, other: LabeledTree) -> list[int]:
    cols, pos = [], 0
    other_nodes = dict(other.walk())
    for path, node in t.walk():
        if other_nodes[path].params != node.params:
            cols.append(pos)
        pos += len(node.params) - 1
    return cols


def orthogonality_check(
    t: LabeledTree,
    x: Sequence[float],
    step: float = FD_STEP,
    perturbed: LabeledTree | None = None,
) -> float:
    """Largest ``|cos|`` between distinct coordinate directions of ``t`` at ``x``.

    With ``perturbed`` (same shape, some parameters changed) the first
    coordinate direction of every changed node is taken from the perturbed
    chart instead; mixing two charts this way breaks orthogonality.
    """
    frame = coordinate_frame(t, x, step)
    if perturbed is not None:
        if perturbed.tree != t.tree:
            raise CoordinateError("perturbed tree must have the same shape")
        other = coordinate_frame(perturbed, x, step)
        for c in _first_columns(t, perturbed):
            frame[:, c] = other[:, c]
    norms = np.linalg.norm(frame, axis=0)
    if np.any(norms < 1e-12):
        raise CoordinateError("degenerate coordinate direction")
    unit = frame / norms
    gram = unit.T @ unit
    np.fill_diagonal(gram, 0.0)
    return float(np.max(np.abs(gram))) if gram.size else 0.0


def random_generic_point(t: LabeledTree, rng: np.random.Generator, margin: float = 0.2) -> np.ndarray:
    """Point whose node coordinates sit in the middle of their interlacing intervals."""
    coords = {}
    for path, node in t.walk():
        lam = [float(v) for v in node.params]
        coords[path] = [
            a + (b - a) * rng.uniform(margin, 1 - margin) for a, b in zip(lam, lam[1:])
        ]
    signs = rng.choice([-1, 1], size=t.leaves).tolist()
    return tree_coords_inverse(t, coords, signs)
