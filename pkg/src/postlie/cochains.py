"""The graded Lie algebra of post-Lie cochains ``C^n(V, V) = sum_i Hom(A^i V (x) A^{n+1-i} V, V)``.

A degree-``n`` cochain has components ``f_0 .. f_n``; component ``f_i`` takes a
wedge block of ``i`` arguments followed by a wedge block of ``n + 1 - i``
arguments. Tables are keyed by strictly increasing index tuples; any other
argument order is resolved by the sign of the sorting permutation, blockwise.

Degree-1 placement of a post-Lie candidate ``(pi, rho)``: ``f_0 = pi`` read on
``(); (x, y)`` and ``f_1 = rho`` read on ``(x,); (y,)``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .algebra import AxiomError, BilinearMap, check_pre_lie
from .exact import ZERO, as_rational, multi_shuffles, perm_sign, sort_sign

# an argument is a basis index or a coefficient vector
Arg = int | Sequence[Fraction]
Key = tuple[int, tuple[int, ...], tuple[int, ...], int]

HALF = Fraction(1, 2)


class MultiCochain:
    __slots__ = ("dim", "degree", "tables")

    def __init__(self, dim: int, degree: int, tables: Sequence[dict] | None = None):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        self.dim = dim
        self.degree = degree
        if tables is None:
            tables = [{} for _ in range(degree + 1)]
        if len(tables) != degree + 1:
            raise ValueError(f"degree {degree} needs {degree + 1} components")
        self.tables = [{k: tuple(v) for k, v in t.items() if any(v)} for t in tables]

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int) -> MultiCochain:
        return cls(dim, degree)

    @classmethod
    def from_entries(cls, dim: int, degree: int,
                     entries: Iterable[tuple[int, Sequence[int], Sequence[int], int, object]]
                     ) -> MultiCochain:
        """Sparse ``(component, left, right, output, value)`` entries.

        Unsorted blocks are normalised by the sign of sorting; entries with a
        repeated index inside a block are rejected since they must vanish.
        """
        tables: list[dict] = [{} for _ in range(degree + 1)]
        for i, left, right, out, value in entries:
            _check_shape(dim, degree, i, left, right)
            if not 0 <= out < dim:
                raise IndexError(f"output index {out} out of range")
            s1, left_sorted = sort_sign(left)
            s2, right_sorted = sort_sign(right)
            if s1 * s2 == 0:
                raise ValueError(f"repeated index in a wedge block: {left}; {right}")
            key = (left_sorted, right_sorted)
            vec = list(tables[i].get(key, (ZERO,) * dim))
            vec[out] += s1 * s2 * as_rational(value)
            tables[i][key] = tuple(vec)
        return cls(dim, degree, tables)

    @classmethod
    def from_pair(cls, pi: BilinearMap, rho: BilinearMap) -> MultiCochain:
        """Degree-1 cochain carrying a bracket ``pi`` (f_0) and a product ``rho`` (f_1)."""
        if not pi.is_antisymmetric():
            raise AxiomError("pi must be antisymmetric")
        d = pi.dim
        t0 = {((), (i, j)): pi.coeffs[i][j] for i in range(d) for j in range(i + 1, d)}
        t1 = {((i,), (j,)): rho.coeffs[i][j] for i in range(d) for j in range(d)}
        return cls(d, 1, [t0, t1])

    @classmethod
    def from_product(cls, rho: BilinearMap) -> MultiCochain:
        return cls.from_pair(BilinearMap.zero(rho.dim, "antisymmetric"), rho)

    def to_pair(self) -> tuple[BilinearMap, BilinearMap]:
        if self.degree != 1:
            raise ValueError("only degree-1 cochains are pairs of bilinear maps")
        d = self.dim
        pi = BilinearMap.from_function(d, lambda i, j: self.evaluate(0, (), (i, j)), "antisymmetric")
        rho = BilinearMap.from_function(d, lambda i, j: self.evaluate(1, (i,), (j,)))
        return pi, rho

    # -- basis and vectors --------------------------------------------------

    @staticmethod
    def basis_keys(dim: int, degree: int) -> list[Key]:
        """Canonical enumeration: lexicographic in (component, left, right, output)."""
        keys: list[Key] = []
        for i in range(degree + 1):
            for left in combinations(range(dim), i):
                for right in combinations(range(dim), degree + 1 - i):
                    for out in range(dim):
                        keys.append((i, left, right, out))
        return keys

    @classmethod
    def space_dim(cls, dim: int, degree: int) -> int:
        return len(cls.basis_keys(dim, degree))

    def to_vector(self) -> list[Fraction]:
        out = []
        for i, left, right, o in self.basis_keys(self.dim, self.degree):
            v = self.tables[i].get((left, right))
            out.append(v[o] if v is not None else ZERO)
        return out

    @classmethod
    def from_vector(cls, dim: int, degree: int, vec: Sequence) -> MultiCochain:
        keys = cls.basis_keys(dim, degree)
        if len(vec) != len(keys):
            raise ValueError(f"expected {len(keys)} coordinates, got {len(vec)}")
        return cls.from_entries(dim, degree, [(i, l, r, o, x) for (i, l, r, o), x in zip(keys, vec)
                                              if x])

    def entries(self) -> list[tuple[int, tuple, tuple, int, Fraction]]:
        out = []
        for i, t in enumerate(self.tables):
            for (left, right) in sorted(t):
                for o, x in enumerate(t[(left, right)]):
                    if x:
                        out.append((i, left, right, o, x))
        return out

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, i: int, left: Sequence[int], right: Sequence[int]) -> tuple[Fraction, ...]:
        """Value of component ``i`` on basis-index blocks (alternating within each block)."""
        _check_shape(self.dim, self.degree, i, left, right)
        for x in (*left, *right):
            if not 0 <= x < self.dim:
                raise IndexError(f"basis index {x} out of range")
        return self._lookup(i, left, right)

    def _lookup(self, i, left, right):
        s1, ls = sort_sign(left)
        if not s1:
            return (ZERO,) * self.dim
        s2, rs = sort_sign(right)
        if not s2:
            return (ZERO,) * self.dim
        v = self.tables[i].get((ls, rs))
        if v is None:
            return (ZERO,) * self.dim
        if s1 * s2 == 1:
            return v
        return tuple(-x for x in v)

    def evaluate_args(self, i: int, left: Sequence[Arg], right: Sequence[Arg]) -> list[Fraction]:
        """Multilinear value of component ``i`` when some arguments are vectors."""
        choices = [_expand(a) for a in (*left, *right)]
        out = [ZERO] * self.dim
        nl = len(left)
        for combo in product(*choices):
            c = Fraction(1)
            idx = []
            for (b, w) in combo:
                c *= w
                idx.append(b)
            v = self._lookup(i, idx[:nl], idx[nl:])
            if any(v):
                for o, x in enumerate(v):
                    if x:
                        out[o] += c * x
        return out

    # -- linear structure ---------------------------------------------------

    def _check_compatible(self, other: MultiCochain) -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: MultiCochain) -> MultiCochain:
        self._check_compatible(other)
        tables = []
        for a, b in zip(self.tables, other.tables):
            t = dict(a)
            for k, v in b.items():
                if k in t:
                    t[k] = tuple(x + y for x, y in zip(t[k], v))
                else:
                    t[k] = v
            tables.append(t)
        return MultiCochain(self.dim, self.degree, tables)

    def __neg__(self) -> MultiCochain:
        return self.scale(-1)

    def __sub__(self, other: MultiCochain) -> MultiCochain:
        return self + (-other)

    def scale(self, c) -> MultiCochain:
        c = as_rational(c)
        return MultiCochain(self.dim, self.degree,
                            [{k: tuple(c * x for x in v) for k, v in t.items()} for t in self.tables])

    def __rmul__(self, c) -> MultiCochain:
        return self.scale(c)

    def is_zero(self) -> bool:
        return not any(self.tables)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MultiCochain) and self.dim == other.dim
                and self.degree == other.degree and self.tables == other.tables)

    def __repr__(self) -> str:
        return f"MultiCochain(dim={self.dim}, degree={self.degree}, nonzero={len(self.entries())})"


def _check_shape(dim, degree, i, left, right) -> None:
    if not 0 <= i <= degree:
        raise IndexError(f"component {i} out of range for degree {degree}")
    if len(left) != i or len(right) != degree + 1 - i:
        raise ValueError(f"component {i} of a degree-{degree} cochain takes blocks of sizes "
                         f"{i} and {degree + 1 - i}, got {len(left)} and {len(right)}")


def _expand(a: Arg) -> list[tuple[int, Fraction]]:
    if isinstance(a, int):
        return [(a, Fraction(1))]
    return [(b, w) for b, w in enumerate(a) if w]


def _take(xs: Sequence[int], perm: Sequence[int], lo: int, hi: int, offset: int = 0) -> list[int]:
    """``[xs[offset + perm(p)] for p in lo..hi]`` with 1-indexed p and perm."""
    return [xs[offset + perm[p - 1] - 1] for p in range(lo, hi + 1)]


def circle_product(f: MultiCochain, g: MultiCochain) -> MultiCochain:
    """``f o g`` of degree ``n + m``, both index-range branches summed term by term."""
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    n, m, d = f.degree, g.degree, f.dim
    total = n + m + 1
    tables: list[dict] = []
    for k in range(n + m + 1):
        table = {}
        for left in combinations(range(d), k):
            for right in combinations(range(d), total - k):
                xs = left + right
                acc = [ZERO] * d
                _circle_terms(f, g, k, xs, acc)
                if any(acc):
                    table[(left, right)] = tuple(acc)
        tables.append(table)
    return MultiCochain(d, n + m, tables)


def _circle_terms(f, g, k, xs, acc) -> None:
    n, m = f.degree, g.degree
    total = n + m + 1
    # g_j fed into the right block of f_{k-j}
    for j in range(0, min(k, m) + 1):
        if k - j > n:
            continue
        base = -1 if (m * (k - j)) % 2 else 1
        for sigma in multi_shuffles(k - j, j):
            s_sigma = perm_sign(sigma)
            f_left = _take(xs, sigma, 1, k - j)
            g_left = _take(xs, sigma, k - j + 1, k)
            for tau in multi_shuffles(m + 1 - j, n + j - k):
                g_right = _take(xs, tau, 1, m + 1 - j, offset=k)
                gv = g.evaluate_args(j, g_left, g_right)
                if not any(gv):
                    continue
                rest = _take(xs, tau, m + 2 - j, total - k, offset=k)
                val = f.evaluate_args(k - j, f_left, [gv] + rest)
                sign = base * s_sigma * perm_sign(tau)
                for o, x in enumerate(val):
                    if x:
                        acc[o] += sign * x
    # g_j fed into the left block of f_{k-m}
    if k >= m + 1:
        right = list(xs[k:])
        for j in range(0, m + 1):
            for sigma in multi_shuffles(j, m + 1 - j, k - m - 1):
                gv = g.evaluate_args(j, _take(xs, sigma, 1, j), _take(xs, sigma, j + 1, m + 1))
                if not any(gv):
                    continue
                val = f.evaluate_args(k - m, [gv] + _take(xs, sigma, m + 2, k), right)
                sign = perm_sign(sigma)
                for o, x in enumerate(val):
                    if x:
                        acc[o] += sign * x


def graded_bracket(f: MultiCochain, g: MultiCochain) -> MultiCochain:
    """``[f, g] = f o g - (-1)^{nm} g o f``."""
    fg = circle_product(f, g)
    gf = circle_product(g, f)
    if (f.degree * g.degree) % 2:
        return fg + gf
    return fg - gf


def _require_pre_lie(tri: BilinearMap) -> None:
    report = check_pre_lie(tri)
    if not report.holds:
        raise AxiomError(f"product is not pre-Lie at basis triple {report.witnesses[0][1]}")


def differential(tri: BilinearMap, f: MultiCochain) -> MultiCochain:
    """``d(f) = [tri, f]`` with ``tri`` placed as a degree-1 cochain."""
    _require_pre_lie(tri)
    return graded_bracket(MultiCochain.from_product(tri), f)


def mc_residual(tri: BilinearMap, pi: BilinearMap, omega: BilinearMap) -> MultiCochain:
    """``d(P) + 1/2 [P, P]`` for ``P = (pi, omega)``; zero iff ``(pi, tri + omega)`` is post-Lie."""
    _require_pre_lie(tri)
    p = MultiCochain.from_pair(pi, omega)
    return differential(tri, p) + graded_bracket(p, p).scale(HALF)


def random_cochain(dim: int, degree: int, rng: random.Random, density: float = 0.5,
                   lo: int = -2, hi: int = 2) -> MultiCochain:
    entries = []
    for i, left, right, o in MultiCochain.basis_keys(dim, degree):
        if rng.random() < density:
            v = rng.randint(lo, hi)
            if v:
                entries.append((i, left, right, o, v))
    return MultiCochain.from_entries(dim, degree, entries)
