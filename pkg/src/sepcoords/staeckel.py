"""Stäckel systems spanned by Killing tensors with diagonal curvature tensor.

A Stäckel system on ``S^{N-1}`` is an ``(N-1)``-dimensional space of
:class:`~sepcoords.killing.KillingVector` whose elements pairwise commute under
both the Poisson bracket and the matrix commutator.  Constructions here take
exact rational input so that :func:`verify_span` is an exact zero test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .coords import LabeledTree, tangent_frame
from .exactpoly import exact_rank
from .killing import KillingVector, bracket, pair_index


@dataclass(frozen=True)
class StaeckelSpan:
    """Candidate Stäckel system: ``basis`` of Killing vectors in ambient dimension ``n``.

    ``n == 1`` with an empty basis is the empty system on ``S^0``.
    """

    n: int
    basis: tuple = ()

    def __post_init__(self):
        basis = tuple(self.basis)
        for v in basis:
            if v.n != self.n:
                raise ValueError(f"basis vector has N={v.n}, span has N={self.n}")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def empty(cls) -> "StaeckelSpan":
        return cls(1, ())

    def rank(self) -> int:
        return exact_rank([v.coeffs for v in self.basis])

    def contains(self, v: KillingVector) -> bool:
        return exact_rank([b.coeffs for b in self.basis] + [v.coeffs]) == self.rank()

    def same_span(self, other: "StaeckelSpan") -> bool:
        if self.n != other.n:
            return False
        r = self.rank()
        return r == other.rank() and exact_rank(
            [v.coeffs for v in self.basis + other.basis]
        ) == r

    def to_json(self) -> dict:
        return {
            "N": self.n,
            "basis": [
                [
                    {"i": i, "j": j, "coeff_num": c.numerator, "coeff_den": c.denominator}
                    for (i, j), c in v.items()
                ]
                for v in self.basis
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "StaeckelSpan":
        n = int(obj["N"])
        if n == 1:
            if obj["basis"]:
                raise ValueError("the span on S^0 must be empty")
            return cls.empty()
        basis = [
            KillingVector.from_dict(
                n, {(e["i"], e["j"]): Fraction(e["coeff_num"], e["coeff_den"]) for e in vec}
            )
            for vec in obj["basis"]
        ]
        return cls(n, tuple(basis))

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.basis) + "}"


@dataclass(frozen=True)
class Partition:
    """Ordered partition ``I_1, ..., I_k`` of ``{1..N}``; block ``a`` hosts local indices in order."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        if not blocks or any(not b for b in blocks):
            raise ValueError("partition needs non-empty blocks")
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(1, len(flat) + 1)):
            raise ValueError(f"blocks must partition 1..{len(flat)}: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def consecutive(cls, sizes: Sequence[int]) -> "Partition":
        blocks, start = [], 1
        for s in sizes:
            blocks.append(tuple(range(start, start + s)))
            start += s
        return cls(tuple(blocks))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)


def _exact(v) -> Fraction:
    if isinstance(v, (float, np.floating)):
        return Fraction(repr(float(v)))
    return Fraction(v)


def gaudin_span(z: Sequence) -> StaeckelSpan:
    """Gaudin system ``{sum_{i<j} (b_i - b_j)/(z_i - z_j) K_ij}`` with ``b = e_1..e_{N-1}``."""
    z = [_exact(v) for v in z]
    n = len(z)
    if n < 2:
        raise ValueError("need at least two points")
    if len(set(z)) != n:
        raise ValueError(f"z entries must be pairwise distinct: {z}")
    return StaeckelSpan(n, tuple(gaudin_vector(z, [int(k == r) for k in range(n)]) for r in range(n - 1)))


def gaudin_vector(z: Sequence, b: Sequence) -> KillingVector:
    z = [_exact(v) for v in z]
    b = [_exact(v) for v in b]
    if len(b) != len(z):
        raise ValueError("b and z need equal length")
    return KillingVector(
        len(z), tuple((b[i - 1] - b[j - 1]) / (z[i - 1] - z[j - 1]) for i, j in pair_index(len(z)))
    )


def jm_span(n: int) -> StaeckelSpan:
    """Jucys-Murphy chain ``K_12, K_13 + K_23, K_14 + K_24 + K_34, ...``."""
    if n < 2:
        raise ValueError("jm_span needs N >= 2")
    return StaeckelSpan(
        n, tuple(KillingVector.from_dict(n, {(i, m): 1 for i in range(1, m)}) for m in range(2, n + 1))
    )


def _elementary(values: Sequence[Fraction], r: int) -> Fraction:
    # coefficients of prod (1 + v t), read off at t^r
    e = [Fraction(1)] + [Fraction(0)] * len(values)
    for v in values:
        for k in range(len(values), 0, -1):
            e[k] += v * e[k - 1]
    return e[r]


def elliptic_span(lam: Sequence) -> StaeckelSpan:
    """Basis ``B_r = sum_{i<j} e_r(Lam minus {Lam_i, Lam_j}) K_ij`` for ``r = 0..N-2``."""
    lam = [_exact(v) for v in lam]
    n = len(lam)
    if n < 2:
        raise ValueError("need at least two parameters")
    if any(a >= b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"parameters must be strictly increasing: {lam}")
    basis = []
    for r in range(n - 1):
        coeffs = []
        for i, j in pair_index(n):
            rest = [lam[k] for k in range(n) if k not in (i - 1, j - 1)]
            coeffs.append(_elementary(rest, r))
        basis.append(KillingVector(n, tuple(coeffs)))
    return StaeckelSpan(n, tuple(basis))


def adjugate_oracle(lam: Sequence[float], x: Sequence[float], p: Sequence[float]) -> list[float]:
    """Quadratic forms ``p -> p^T K_i p`` for ``Adj(L - t Id) = sum_i K_i t^i``.

    ``L`` is ``diag(Lam)`` compressed to the tangent space at ``x``; the result
    is ordered by increasing power of ``t``.
    """
    lam = np.asarray([float(v) for v in lam])
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    if abs(np.linalg.norm(x) - 1) > 1e-12:
        raise ValueError("x must be a unit vector")
    if abs(x @ p) > 1e-12:
        raise ValueError("p must be tangent (orthogonal to x)")
    if np.any(x == 0):
        raise ValueError("x must be generic (no vanishing component)")
    frame = tangent_frame(x)
    if np.linalg.cond(frame @ frame.T) > 1e8:
        raise ArithmeticError("ill-conditioned tangent frame")
    lt = frame @ np.diag(lam) @ frame.T
    pt = frame @ p
    m = len(pt)
    if m == 1:
        return [float(pt @ pt)]
    evals, evecs = np.linalg.eigh(lt)
    q = evecs.T @ pt
    # Adj(L - t) = V diag(prod_{j != i} (d_j - t)) V^T
    out = np.zeros(m)
    for i in range(m):
        others = np.delete(evals, i)
        # np.poly gives prod (t - d_j), highest power first
        c = np.poly(others)[::-1] * (-1) ** (m - 1)
        out += c * q[i] ** 2
    return out.tolist()


def _embed(v: KillingVector, block: Sequence[int], n: int) -> KillingVector:
    return KillingVector.from_dict(n, {(block[i - 1], block[j - 1]): c for (i, j), c in v.items()})


def _coarse(v: KillingVector, part: Partition) -> KillingVector:
    n = part.n
    out: dict = {}
    for (a, b), c in v.items():
        for i in part.blocks[a - 1]:
            for j in part.blocks[b - 1]:
                key = (min(i, j), max(i, j))
                out[key] = out.get(key, 0) + c
    return KillingVector.from_dict(n, out)


def compose_spans(part: Partition, s0: StaeckelSpan, blocks: Sequence[StaeckelSpan]) -> StaeckelSpan:
    """Operad composition: coarse span over the blocks plus each block's span embedded."""
    k = len(part.blocks)
    if len(blocks) != k:
        raise ValueError(f"partition has {k} blocks but {len(blocks)} spans were given")
    if s0.n != k:
        raise ValueError(f"coarse span lives on N={s0.n}, partition has {k} blocks")
    for size, s in zip(part.sizes, blocks):
        if s.n != size:
            raise ValueError(f"block of size {size} given a span with N={s.n}")
    n = part.n
    if k == 1:
        return StaeckelSpan(n, tuple(_embed(v, part.blocks[0], n) for v in blocks[0].basis))
    # block spans first, so chains of coarse steps list the basis bottom-up
    basis = []
    for b, s in zip(part.blocks, blocks):
        basis.extend(_embed(v, b, n) for v in s.basis)
    basis.extend(_coarse(v, part) for v in s0.basis)
    return StaeckelSpan(n, tuple(basis))


def staeckel_from_tree(t: LabeledTree) -> StaeckelSpan:
    """Compose elliptic spans along ``t``; leaves carry indices ``1..N`` left to right."""
    if t.is_leaf:
        return StaeckelSpan.empty()
    children = [staeckel_from_tree(c) for c in t.children]
    part = Partition.consecutive([c.leaves for c in t.children])
    return compose_spans(part, elliptic_span(t.params), children)


@dataclass(frozen=True)
class SpanReport:
    n: int
    dimension: int
    rank: int
    expected_rank: int
    poisson_commute: bool
    commutator_commute: bool
    metric_member: bool
    poisson_failures: tuple = ()
    commutator_failures: tuple = ()

    @property
    def passed(self) -> bool:
        return (
            self.rank == self.expected_rank
            and self.dimension == self.expected_rank
            and self.poisson_commute
            and self.commutator_commute
            and self.metric_member
        )

    def to_json(self) -> dict:
        return {
            "N": self.n,
            "dimension": self.dimension,
            "rank": self.rank,
            "expected_rank": self.expected_rank,
            "poisson_commute": self.poisson_commute,
            "commutator_commute": self.commutator_commute,
            "metric_member": self.metric_member,
            "poisson_failures": [list(p) for p in self.poisson_failures],
            "commutator_failures": [list(p) for p in self.commutator_failures],
            "status": "pass" if self.passed else "fail",
        }


def verify_span(s: StaeckelSpan) -> SpanReport:
    """Exact rank, pairwise commutation under both brackets, and metric membership."""
    n = s.n
    rank = s.rank()
    pfail, cfail = [], []
    for (a, u), (b, v) in combinations(enumerate(s.basis), 2):
        if not bracket(u, v, "poisson").is_zero():
            pfail.append((a, b))
        if not bracket(u, v, "commutator").is_zero():
            cfail.append((a, b))
    metric = True if n == 1 else s.contains(KillingVector.metric(n))
    return SpanReport(
        n, len(s.basis), rank, n - 1, not pfail, not cfail, metric, tuple(pfail), tuple(cfail)
    )
