"""Exact polynomial arithmetic in phase-space variables.

Polynomials live in the ambient variables ``x_1..x_N, p_1..p_N`` of
``R^N x R^N`` and carry :class:`fractions.Fraction` coefficients.  Exponent
vectors are dense tuples of length ``2N`` (positions first, then momenta).
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import chain
from numbers import Rational
from typing import Iterable, Mapping, Sequence

MAX_DIM = 8

Monomial = tuple[int, ...]


def _check_dim(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"ambient dimension must be a positive integer, got {n!r}")
    if n > MAX_DIM:
        raise ValueError(f"ambient dimension {n} exceeds the ceiling MAX_DIM={MAX_DIM}")


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


def grlex_key(mono: Monomial) -> tuple:
    """Sort key putting higher total degree first, then lexicographic (x before p)."""
    return (-sum(mono), tuple(-e for e in mono))


class Poly:
    """Sparse polynomial with exact rational coefficients.

    Instances are immutable; all arithmetic returns new objects and never
    stores a zero coefficient, so equality is a plain comparison of term maps.
    """

    __slots__ = ("_n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Monomial, object] | None = None):
        _check_dim(n)
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != 2 * n or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for N={n}")
            c = _as_fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self._n = n
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, terms: dict[Monomial, Fraction]) -> "Poly":
        obj = cls.__new__(cls)
        obj._n = n
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Poly":
        _check_dim(n)
        return cls._raw(n, {})

    @classmethod
    def const(cls, n: int, c) -> "Poly":
        return cls(n, {(0,) * (2 * n): c})

    @classmethod
    def x(cls, n: int, i: int) -> "Poly":
        """Position variable ``x_i`` (1-based)."""
        _check_dim(n)
        if not 1 <= i <= n:
            raise IndexError(f"x_{i} out of range for N={n}")
        mono = [0] * (2 * n)
        mono[i - 1] = 1
        return cls._raw(n, {tuple(mono): Fraction(1)})

    @classmethod
    def p(cls, n: int, i: int) -> "Poly":
        """Momentum variable ``p_i`` (1-based)."""
        _check_dim(n)
        if not 1 <= i <= n:
            raise IndexError(f"p_{i} out of range for N={n}")
        mono = [0] * (2 * n)
        mono[n + i - 1] = 1
        return cls._raw(n, {tuple(mono): Fraction(1)})

    # -- basic protocol -----------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]))

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_momentum_free(self) -> bool:
        n = self._n
        return all(not any(m[n:]) for m in self._terms)

    def degrees(self) -> set[tuple[int, int]]:
        """Set of (x-degree, p-degree) pairs over all terms."""
        n = self._n
        return {(sum(m[:n]), sum(m[n:])) for m in self._terms}

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._n == other._n and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self._n, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self._n}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        n = self._n
        names = [f"x{i}" for i in range(1, n + 1)] + [f"p{i}" for i in range(1, n + 1)]
        parts = []
        for mono, c in self.terms():
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other._n != self._n:
                raise ValueError(f"dimension mismatch: N={self._n} vs N={other._n}")
            return other
        return Poly.const(self._n, _as_fraction(other))

    def __add__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly._raw(self._n, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self._n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = _as_fraction(c)
        if not c:
            return Poly._raw(self._n, {})
        return Poly._raw(self._n, {m: c * v for m, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(mono, 0) + c1 * c2
                if s:
                    out[mono] = s
                else:
                    out.pop(mono, None)
        return Poly._raw(self._n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = Poly.const(self._n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, var: int) -> "Poly":
        """Partial derivative with respect to the variable at exponent slot ``var``."""
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            e = mono[var]
            if e:
                m = list(mono)
                m[var] = e - 1
                out[tuple(m)] = c * e
        return Poly._raw(self._n, out)

    def dx(self, i: int) -> "Poly":
        return self.diff(i - 1)

    def dp(self, i: int) -> "Poly":
        return self.diff(self._n + i - 1)

    def relabel(self, sigma: Sequence[int]) -> "Poly":
        """Rename ``x_i -> x_sigma(i)`` and ``p_i -> p_sigma(i)``.

        ``sigma`` is given in one-line notation on ``1..N``.
        """
        n = self._n
        if sorted(sigma) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {sigma}")
        out: dict[Monomial, Fraction] = {}
        for mono, c in self._terms.items():
            m = [0] * (2 * n)
            for i in range(n):
                j = sigma[i] - 1
                m[j] = mono[i]
                m[n + j] = mono[n + i]
            out[tuple(m)] = c
        return Poly._raw(n, out)

    # -- evaluation & serialization ----------------------------------------

    def to_json(self) -> list[dict]:
        return [
            {"exponents": list(m), "numerator": c.numerator, "denominator": c.denominator}
            for m, c in self.terms()
        ]

    @classmethod
    def from_json(cls, n: int, records: Iterable[Mapping]) -> "Poly":
        return cls(
            n,
            {tuple(r["exponents"]): Fraction(r["numerator"], r["denominator"]) for r in records},
        )


def poisson_bracket(f: Poly, g: Poly) -> Poly:
    """Canonical bracket ``sum_a df/dx_a dg/dp_a - dg/dx_a df/dp_a``."""
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: N={f.n} vs N={g.n}")
    result = Poly.zero(f.n)
    for a in range(1, f.n + 1):
        fx, gp = f.dx(a), g.dp(a)
        if fx and gp:
            result = result + fx * gp
        gx, fp = g.dx(a), f.dp(a)
        if gx and fp:
            result = result - gx * fp
    return result


def poly_eval(f: Poly, point: Sequence[float]) -> float:
    """Evaluate ``f`` at ``point = (x_1..x_N, p_1..p_N)`` in floating point."""
    if len(point) != 2 * f.n:
        raise ValueError(f"point must have length {2 * f.n}, got {len(point)}")
    pt = [float(v) for v in point]
    total = 0.0
    for mono, c in f.terms():
        term = 1.0
        for v, e in zip(pt, mono):
            if e:
                term *= v**e
        total += float(c) * term
    return total


class PolyMatrix:
    """Square matrix of momentum-free polynomials."""

    __slots__ = ("_n", "_size", "_rows")

    def __init__(self, rows: Sequence[Sequence[Poly]]):
        size = len(rows)
        if size == 0 or any(len(r) != size for r in rows):
            raise ValueError("PolyMatrix needs a non-empty square array")
        n = rows[0][0].n
        for r in rows:
            for e in r:
                if e.n != n:
                    raise ValueError("entries must share the ambient dimension")
                if not e.is_momentum_free():
                    raise ValueError("PolyMatrix entries must be momentum-free")
        self._n = n
        self._size = size
        self._rows = tuple(tuple(r) for r in rows)

    @classmethod
    def zeros(cls, size: int, n: int) -> "PolyMatrix":
        z = Poly.zero(n)
        return cls([[z] * size for _ in range(size)])

    @property
    def n(self) -> int:
        return self._n

    @property
    def size(self) -> int:
        return self._size

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self._rows[i][j]

    def rows(self) -> tuple[tuple[Poly, ...], ...]:
        return self._rows

    def entries(self) -> Iterable[Poly]:
        return chain.from_iterable(self._rows)

    def _check(self, other: "PolyMatrix") -> None:
        if not isinstance(other, PolyMatrix):
            raise TypeError("PolyMatrix expected")
        if other._size != self._size or other._n != self._n:
            raise ValueError(
                f"size mismatch: {self._size}x{self._size} (N={self._n}) "
                f"vs {other._size}x{other._size} (N={other._n})"
            )

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._rows, other._rows)]
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        return PolyMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self._rows, other._rows)]
        )

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix([[-a for a in r] for r in self._rows])

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix([[a.scale(c) for a in r] for r in self._rows])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        s = self._size
        out = []
        for i in range(s):
            row = []
            for j in range(s):
                acc = Poly.zero(self._n)
                for k in range(s):
                    a, b = self._rows[i][k], other._rows[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def apply(self, vec: Sequence[Poly]) -> list[Poly]:
        """Matrix-vector product with a vector of polynomials."""
        if len(vec) != self._size:
            raise ValueError("vector length mismatch")
        out = []
        for r in self._rows:
            acc = Poly.zero(self._n)
            for a, v in zip(r, vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def trace(self) -> Poly:
        acc = Poly.zero(self._n)
        for i in range(self._size):
            acc = acc + self._rows[i][i]
        return acc

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([list(col) for col in zip(*self._rows)])

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries())

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def is_antisymmetric(self) -> bool:
        return self == -self.transpose()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self._n == other._n and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._n, self._rows))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in r) for r in self._rows)
        return f"PolyMatrix([{body}])"


def matrix_commutator(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    """Entrywise exact ``AB - BA``."""
    return (a @ b) - (b @ a)


def coefficient_vectors(polys: Sequence[Poly]) -> list[list[Fraction]]:
    """Monomial-coefficient vectors of ``polys`` over the union of their supports."""
    support = sorted({m for f in polys for m, _ in f.terms()}, key=grlex_key)
    return [[f.coefficient(m) for m in support] for f in polys]


def matrix_coefficient_vectors(mats: Sequence[PolyMatrix]) -> list[list[Fraction]]:
    """Flatten matrices entrywise, then take coefficient vectors per (entry, monomial)."""
    if not mats:
        return []
    size = mats[0].size
    keys = sorted(
        {(i, j, m) for a in mats for i in range(size) for j in range(size) for m, _ in a[i, j].terms()}
    )
    return [[a[i, j].coefficient(m) for i, j, m in keys] for a in mats]


def exact_rank(vectors: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination.

    Rational rows are first scaled to integer rows; every subsequent division
    by the previous pivot is exact.
    """
    rows: list[list[int]] = []
    width = None
    for v in vectors:
        v = [_as_fraction(c) for c in v]
        if width is None:
            width = len(v)
        elif len(v) != width:
            raise ValueError("all vectors must have equal length")
        den = math.lcm(*(c.denominator for c in v)) if v else 1
        rows.append([int(c * den) for c in v])
    if not rows or not width:
        return 0

    rank = 0
    prev = 1
    for col in range(width):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        pv = pr[col]
        for r in range(rank + 1, len(rows)):
            row = rows[r]
            f = row[col]
            for c in range(col + 1, width):
                num = pv * row[c] - f * pr[c]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("Bareiss step was not exact")
                row[c] = q
            row[col] = 0
        prev = pv
        rank += 1
        if rank == len(rows):
            break
    return rank
