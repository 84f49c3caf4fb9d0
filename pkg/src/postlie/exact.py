"""Exact scalars, multi-indices, shuffle combinatorics and dense rational linear algebra.

Scalars are :class:`fractions.Fraction`; they are always in lowest terms with a
positive denominator, which is all the library ever needs from a rational type.
Permutations are tuples ``s`` with ``s[p - 1] == sigma(p)``, i.e. 1-indexed images.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

Rational = Fraction
Permutation = tuple[int, ...]
MultiIndex = tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction; reject floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")


def format_rational(q: Fraction) -> str:
    """Canonical ``"p/q"`` string (``"p/1"`` for integers)."""
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# multi-indices


class NegativeIndexError(ValueError):
    """A componentwise subtraction of multi-indices went below zero."""


def mi_add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    _same_length(a, b)
    return tuple(x + y for x, y in zip(a, b))


def mi_sub(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    """``a - b``; raises :class:`NegativeIndexError` instead of wrapping."""
    out = mi_sub_or_none(a, b)
    if out is None:
        raise NegativeIndexError(f"{a} - {b} has a negative entry")
    return out


def mi_sub_or_none(a: MultiIndex, b: MultiIndex) -> MultiIndex | None:
    _same_length(a, b)
    out = tuple(x - y for x, y in zip(a, b))
    if any(x < 0 for x in out):
        return None
    return out


def mi_leq(a: MultiIndex, b: MultiIndex) -> bool:
    _same_length(a, b)
    return all(x <= y for x, y in zip(a, b))


def mi_unit(i: int, length: int) -> MultiIndex:
    """``e_i`` in N^length."""
    if not 0 <= i < length:
        raise IndexError(f"coordinate {i} out of range for length {length}")
    return tuple(1 if j == i else 0 for j in range(length))


def mi_zero(length: int) -> MultiIndex:
    return (0,) * length


def mi_below(bound: MultiIndex) -> list[MultiIndex]:
    """All multi-indices ``l <= bound`` componentwise, lexicographically."""
    out: list[MultiIndex] = [()]
    for b in bound:
        out = [prefix + (x,) for prefix in out for x in range(b + 1)]
    return out


def multi_binom(n: MultiIndex, ell: MultiIndex) -> int:
    """Product of ``binomial(n_i, ell_i)``; zero as soon as some ``ell_i > n_i``."""
    _same_length(n, ell)
    out = 1
    for a, b in zip(n, ell):
        if b < 0 or b > a:
            return 0
        out *= math.comb(a, b)
    return out


def _same_length(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise ValueError(f"multi-index lengths differ: {len(a)} vs {len(b)}")


# ---------------------------------------------------------------------------
# permutations and shuffles


def shuffles(i: int, j: int) -> list[Permutation]:
    """All (i, j)-shuffles of {1..i+j}, identity first.

    Enumerated by choosing the image set of the first block, so the cost is
    ``binomial(i + j, i)`` rather than ``(i + j)!``.
    """
    return multi_shuffles(i, j)


def multi_shuffles(*parts: int) -> list[Permutation]:
    """All permutations increasing on each consecutive block of the given sizes."""
    if any(p < 0 for p in parts):
        raise ValueError(f"block sizes must be nonnegative, got {parts}")
    n = sum(parts)
    out: list[Permutation] = []

    def rec(k: int, remaining: tuple[int, ...], acc: tuple[int, ...]) -> None:
        if k == len(parts):
            out.append(acc)
            return
        for chosen in combinations(remaining, parts[k]):
            chosen_set = set(chosen)
            rest = tuple(x for x in remaining if x not in chosen_set)
            rec(k + 1, rest, acc + chosen)

    rec(0, tuple(range(1, n + 1)), ())
    return out


def perm_sign(sigma: Sequence[int]) -> int:
    """Signature of a permutation of {1..n} given by its images."""
    n = len(sigma)
    seen = [False] * (n + 1)
    sign = 1
    for start in range(1, n + 1):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = True
            p = sigma[p - 1]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def compose(sigma: Sequence[int], tau: Sequence[int]) -> Permutation:
    """``sigma o tau``: p -> sigma(tau(p))."""
    return tuple(sigma[t - 1] for t in tau)


def sort_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    items = list(seq)
    sign = 1
    # insertion sort; the tuples handled here have length <= 6
    for a in range(1, len(items)):
        b = a
        while b > 0 and items[b - 1] > items[b]:
            items[b - 1], items[b] = items[b], items[b - 1]
            sign = -sign
            b -= 1
    for a in range(1, len(items)):
        if items[a] == items[a - 1]:
            return 0, tuple(items)
    return sign, tuple(items)


# ---------------------------------------------------------------------------
# dense exact matrices


Vector = list[Fraction]


class Matrix:
    """Dense rows x cols matrix of Fractions.

    Instances are treated as immutable; elimination works on integer copies.
    """

    __slots__ = ("rows", "cols", "entries", "_echelon")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        grid = tuple(tuple(as_rational(x) for x in row) for row in entries)
        if cols is None:
            if not grid:
                raise ValueError("cols must be given for a matrix with no rows")
            cols = len(grid[0])
        if any(len(row) != cols for row in grid):
            raise ValueError("ragged matrix rows")
        self.rows = len(grid)
        self.cols = cols
        self.entries = grid
        self._echelon = None

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> Matrix:
        return cls([[columns[c][r] for c in range(len(columns))] for r in range(rows)],
                   cols=len(columns))

    def column(self, c: int) -> Vector:
        return [row[c] for row in self.entries]

    def columns(self) -> list[Vector]:
        return [self.column(c) for c in range(self.cols)]

    def transpose(self) -> Matrix:
        return Matrix([[self.entries[r][c] for r in range(self.rows)] for c in range(self.cols)],
                      cols=self.rows)

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        ocols = other.columns()
        return Matrix([[sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in ocols]
                       for row in self.entries], cols=other.cols)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for {self.cols} columns")
        return [sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in self.entries]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.cols, self.entries))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols})"

    # -- elimination ---------------------------------------------------------

    def echelon(self) -> tuple[list[list[int]], list[int]]:
        """Fraction-free (Bareiss) row echelon form over the integers and its pivots."""
        if self._echelon is None:
            self._echelon = _bareiss([_integer_row(row) for row in self.entries], self.cols)
        return self._echelon

    def rank(self) -> int:
        return len(self.echelon()[1])

    def rref(self) -> tuple[list[Vector], list[int]]:
        """Reduced row echelon form (nonzero rows only) and pivot columns."""
        rows, pivots = self.echelon()
        return _reduce_echelon(rows, pivots), list(pivots)

    def kernel(self) -> list[Vector]:
        return kernel_basis(self)

    def solve(self, b: Sequence) -> Vector | None:
        """One solution of ``M x = b`` (free variables set to 0), or None."""
        if len(b) != self.rows:
            raise ValueError("right-hand side has the wrong length")
        aug = Matrix([list(row) + [as_rational(x)] for row, x in zip(self.entries, b)],
                     cols=self.cols + 1)
        rows, pivots = aug.rref()
        if pivots and pivots[-1] == self.cols:
            return None
        x = [ZERO] * self.cols
        for row, p in zip(rows, pivots):
            x[p] = row[self.cols]
        return x


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        if x.denominator != 1:
            den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in row]


def _bareiss(a: list[list[int]], cols: int) -> tuple[list[list[int]], list[int]]:
    rows = len(a)
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, rows):
            ai = a[i]
            f = ai[c]
            if f == 0:
                for j in range(c + 1, cols):
                    ai[j] = ai[j] * piv // prev
            else:
                ar = a[r]
                for j in range(c + 1, cols):
                    ai[j] = (ai[j] * piv - f * ar[j]) // prev
                ai[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _reduce_echelon(rows: list[list[int]], pivots: list[int]) -> list[Vector]:
    out = [[Fraction(x, row[p]) for x in row] for row, p in zip(rows, pivots)]
    for k in range(len(out) - 1, -1, -1):
        p = pivots[k]
        for i in range(k):
            f = out[i][p]
            if f:
                out[i] = [x - f * y for x, y in zip(out[i], out[k])]
    return out


def kernel_basis(m: Matrix) -> list[Vector]:
    """Basis of the right null space, one vector per free column.

    Each vector has a 1 at its free column and 0 at the other free columns, so
    the basis is canonical (independent of row order).
    """
    rows, pivots = m.rref()
    pivot_set = set(pivots)
    out: list[Vector] = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        out.append(v)
    return out


def rank_of_vectors(vectors: Sequence[Sequence], length: int) -> int:
    if not vectors:
        return 0
    return Matrix(vectors, cols=length).rank()


def span_normal_form(vectors: Sequence[Sequence], length: int) -> tuple[list[Vector], list[int]]:
    """RREF basis and pivot columns of the row span of ``vectors``."""
    if not vectors:
        return [], []
    return Matrix(vectors, cols=length).rref()


def reduce_modulo(v: Sequence[Fraction], basis: Sequence[Vector], pivots: Sequence[int]) -> Vector:
    """Normal form of ``v`` modulo an RREF basis: zero at every pivot column."""
    out = list(v)
    for row, p in zip(basis, pivots):
        f = out[p]
        if f:
            out = [x - f * y for x, y in zip(out, row)]
    return out
