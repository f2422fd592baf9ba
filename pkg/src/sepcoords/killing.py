"""Basis Killing tensors ``K_ij`` on the sphere ``S^{N-1}`` in ``R^N``.

Each ``K_ij`` has two faces: the phase-space function ``(x_i p_j - x_j p_i)^2``
(bracketed with the canonical Poisson bracket) and the momentum-free matrix
with block ``[[x_j^2, -x_i x_j], [-x_i x_j, x_i^2]]`` in rows/columns ``i, j``
(bracketed with the matrix commutator).  Identities are checked as ambient
polynomial identities; the sphere constraint is never imposed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .exactpoly import (
    Poly,
    PolyMatrix,
    coefficient_vectors,
    exact_rank,
    matrix_coefficient_vectors,
    matrix_commutator,
    poisson_bracket,
)

BRACKETS = ("poisson", "commutator")


def pair_index(n: int) -> list[tuple[int, int]]:
    """The ``N(N-1)/2`` index pairs ``(i, j)``, ``i < j``, in lexicographic order."""
    return list(combinations(range(1, n + 1), 2))


def normalize_pair(i: int, j: int, n: int) -> tuple[int, int]:
    if i == j:
        raise ValueError(f"K_{i}{j} needs distinct indices")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"index pair {(i, j)} out of range for N={n}")
    return (i, j) if i < j else (j, i)


@lru_cache(maxsize=None)
def kij_phase(i: int, j: int, n: int) -> Poly:
    """Phase-space function ``K_ij(x, p) = (x_i p_j - x_j p_i)^2``."""
    i, j = normalize_pair(i, j, n)
    ang = Poly.x(n, i) * Poly.p(n, j) - Poly.x(n, j) * Poly.p(n, i)
    return ang * ang


@lru_cache(maxsize=None)
def kij_matrix(i: int, j: int, n: int) -> PolyMatrix:
    i, j = normalize_pair(i, j, n)
    z = Poly.zero(n)
    rows = [[z] * n for _ in range(n)]
    xi, xj = Poly.x(n, i), Poly.x(n, j)
    rows[i - 1][i - 1] = xj * xj
    rows[j - 1][j - 1] = xi * xi
    rows[i - 1][j - 1] = rows[j - 1][i - 1] = -(xi * xj)
    return PolyMatrix(rows)


@dataclass(frozen=True)
class KillingVector:
    """Linear combination of the ``K_ij`` with exact coefficients in lexicographic pair order."""

    n: int
    coeffs: tuple

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("KillingVector needs N >= 2")
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.n * (self.n - 1) // 2:
            raise ValueError(f"expected {self.n * (self.n - 1) // 2} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, n: int) -> "KillingVector":
        return cls(n, (0,) * (n * (n - 1) // 2))

    @classmethod
    def basis(cls, i: int, j: int, n: int) -> "KillingVector":
        return cls.from_dict(n, {(i, j): 1})

    @classmethod
    def metric(cls, n: int) -> "KillingVector":
        """All-ones vector: ``sum K_ij`` is the round metric Hamiltonian."""
        return cls(n, (1,) * (n * (n - 1) // 2))

    @classmethod
    def from_dict(cls, n: int, entries: dict) -> "KillingVector":
        index = {p: k for k, p in enumerate(pair_index(n))}
        coeffs = [Fraction(0)] * len(index)
        for (i, j), c in entries.items():
            coeffs[index[normalize_pair(i, j, n)]] += Fraction(c)
        return cls(n, tuple(coeffs))

    def items(self) -> Iterable[tuple[tuple[int, int], Fraction]]:
        """Nonzero ``((i, j), coefficient)`` entries."""
        return ((p, c) for p, c in zip(pair_index(self.n), self.coeffs) if c)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = normalize_pair(*ij, self.n)
        return self.coeffs[pair_index(self.n).index((i, j))]

    def __add__(self, other: "KillingVector") -> "KillingVector":
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        return KillingVector(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "KillingVector") -> "KillingVector":
        return self + other.scale(-1)

    def scale(self, c) -> "KillingVector":
        c = Fraction(c)
        return KillingVector(self.n, tuple(c * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def phase(self) -> Poly:
        acc = Poly.zero(self.n)
        for (i, j), c in self.items():
            acc = acc + kij_phase(i, j, self.n).scale(c)
        return acc

    def matrix(self) -> PolyMatrix:
        acc = PolyMatrix.zeros(self.n, self.n)
        for (i, j), c in self.items():
            acc = acc + kij_matrix(i, j, self.n).scale(c)
        return acc

    def __str__(self) -> str:
        parts = []
        for (i, j), c in self.items():
            parts.append(f"K_{i}{j}" if c == 1 else f"{c}*K_{i}{j}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def bracket(a: KillingVector, b: KillingVector, kind: str):
    """Bracket of two Killing vectors: a ``Poly`` (poisson) or ``PolyMatrix`` (commutator)."""
    if kind == "poisson":
        return poisson_bracket(a.phase(), b.phase())
    if kind == "commutator":
        return matrix_commutator(a.matrix(), b.matrix())
    raise ValueError(f"unknown bracket {kind!r}; expected one of {BRACKETS}")


def _residual_size(r) -> int:
    if isinstance(r, Poly):
        return len(r)
    return sum(len(e) for e in r.entries())


@dataclass(frozen=True)
class RelationResult:
    relation: str
    indices: tuple
    status: str
    residual_term_count: int

    def to_json(self) -> dict:
        return {
            "relation": self.relation,
            "indices": list(self.indices),
            "status": self.status,
            "residual_term_count": self.residual_term_count,
        }


@dataclass(frozen=True)
class RelationReport:
    n: int
    bracket: str
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def failures(self) -> list[RelationResult]:
        return [r for r in self.results if r.status != "pass"]

    def to_json(self) -> list[dict]:
        return [r.to_json() for r in self.results]


def kd_relation_instances(n: int) -> Iterable[tuple[str, tuple]]:
    """Disjoint pairs ``(i,j),(k,l)`` and overlapping triples ``(i,j;k)`` with ``i < j``."""
    pairs = pair_index(n)
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[a + 1 :]:
            if len({i, j, k, l}) == 4:
                yield "disjoint", (i, j, k, l)
    for i, j in pairs:
        for k in range(1, n + 1):
            if k not in (i, j):
                yield "overlapping", (i, j, k)


def verify_kd_relations(n: int, kind: str) -> RelationReport:
    """Check ``[K_ij, K_kl] = 0`` (disjoint) and ``[K_ij, K_ik + K_jk] = 0`` exactly."""
    if not 3 <= n <= 8:
        raise ValueError("verify_kd_relations needs 3 <= N <= 8")
    if kind not in BRACKETS:
        raise ValueError(f"unknown bracket {kind!r}")
    results = []
    for rel, idx in kd_relation_instances(n):
        if rel == "disjoint":
            i, j, k, l = idx
            a, b = KillingVector.basis(i, j, n), KillingVector.basis(k, l, n)
        else:
            i, j, k = idx
            a = KillingVector.basis(i, j, n)
            b = KillingVector.basis(i, k, n) + KillingVector.basis(j, k, n)
        r = bracket(a, b, kind)
        size = _residual_size(r)
        results.append(RelationResult(rel, idx, "pass" if size == 0 else "fail", size))
    return RelationReport(n, kind, tuple(results))


@dataclass(frozen=True)
class IndependenceReport:
    n: int
    bracket: str
    generator_rank: int
    generator_expected: int
    bracket_rank: int
    bracket_expected: int

    @property
    def passed(self) -> bool:
        return (
            self.generator_rank == self.generator_expected
            and self.bracket_rank == self.bracket_expected
        )

    def to_json(self) -> dict:
        return {
            "N": self.n,
            "bracket": self.bracket,
            "generator_rank": self.generator_rank,
            "generator_expected": self.generator_expected,
            "bracket_rank": self.bracket_rank,
            "bracket_expected": self.bracket_expected,
            "status": "pass" if self.passed else "fail",
        }


def verify_independence(n: int, kind: str) -> IndependenceReport:
    """Exact ranks of ``{K_ij}`` and of ``{[K_ij, K_jk] : i < j < k}``."""
    if not 2 <= n <= 7:
        raise ValueError("verify_independence needs 2 <= N <= 7")
    gens = [KillingVector.basis(i, j, n) for i, j in pair_index(n)]
    brs = [
        bracket(KillingVector.basis(i, j, n), KillingVector.basis(j, k, n), kind)
        for i, j, k in combinations(range(1, n + 1), 3)
    ]
    if kind == "poisson":
        gen_vecs = coefficient_vectors([g.phase() for g in gens])
        br_vecs = coefficient_vectors(brs)
    elif kind == "commutator":
        gen_vecs = matrix_coefficient_vectors([g.matrix() for g in gens])
        br_vecs = matrix_coefficient_vectors(brs)
    else:
        raise ValueError(f"unknown bracket {kind!r}")
    return IndependenceReport(
        n,
        kind,
        exact_rank(gen_vecs),
        n * (n - 1) // 2,
        exact_rank(br_vecs),
        n * (n - 1) * (n - 2) // 6,
    )


def apply_permutation(sigma: Sequence[int], v: KillingVector) -> KillingVector:
    """``sigma(K_ij) = K_{sigma(i) sigma(j)}``; ``sigma`` in one-line notation on ``1..N``."""
    n = v.n
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {list(sigma)}")
    moved = {}
    for (i, j), c in v.items():
        moved[normalize_pair(sigma[i - 1], sigma[j - 1], n)] = c
    return KillingVector.from_dict(n, moved)


def compose_permutations(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """One-line notation of ``s o t`` (apply ``t`` first)."""
    return tuple(s[t[i] - 1] for i in range(len(t)))


def all_permutations(n: int) -> Iterable[tuple[int, ...]]:
    return permutations(range(1, n + 1))
