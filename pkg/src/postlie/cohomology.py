"""Post-Lie cohomology of a pre-Lie algebra.

An n-cochain has components ``f_0 .. f_{n-1}`` with ``f_k`` in
``C^{k, n-k} = Hom(A^k g (x) A^{n-k} g, g)``; it is stored as a degree ``n - 1``
:class:`~postlie.cochains.MultiCochain` (identical component shapes), so
``n = f.degree + 1`` throughout this module.

The coboundary is the sum of three families of component maps::

    d^k_{k+1}: C^{k, n-k} -> C^{k+1, n-k}      (k <= n - 2)
    d^k_n:     C^{k, n-k} -> C^{n, 1}          (k <= n - 2)
    d^{n-1}_n: C^{n-1, 1} -> C^{n, 1}

Nothing maps into ``C^{0, n+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .algebra import AxiomError, BilinearMap, basis_vec, check_pre_lie, derivation_space
from .cochains import MultiCochain
from .exact import (ZERO, Matrix, Vector, kernel_basis, multi_shuffles, perm_sign,
                    reduce_modulo, span_normal_form)


def _require_pre_lie(tri: BilinearMap) -> None:
    report = check_pre_lie(tri)
    if not report.holds:
        raise AxiomError(f"product is not pre-Lie at basis triple {report.witnesses[0][1]}")


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


class _Ctx:
    """Pre-Lie product with cached basis products for the hot loops."""

    def __init__(self, tri: BilinearMap):
        self.tri = tri
        d = tri.dim
        self.dim = d
        self.prod = [[list(tri.coeffs[i][j]) for j in range(d)] for i in range(d)]
        self.comm = [[[a - b for a, b in zip(tri.coeffs[i][j], tri.coeffs[j][i])]
                      for j in range(d)] for i in range(d)]
        self.basis = [basis_vec(d, i) for i in range(d)]

    def left(self, a: int, v) -> list[Fraction]:
        """e_a > v"""
        return self.tri(self.basis[a], v)

    def right(self, v, b: int) -> list[Fraction]:
        """v > e_b"""
        return self.tri(v, self.basis[b])


def _acc(acc: list, sign: int, v) -> None:
    if sign == 0:
        return
    for o, x in enumerate(v):
        if x:
            acc[o] += sign * x


def _drop(xs: Sequence, *positions: int) -> list:
    """Remove 1-indexed positions."""
    skip = set(positions)
    return [x for p, x in enumerate(xs, start=1) if p not in skip]


def _d_k_k1(ctx: _Ctx, f: MultiCochain, k: int, xs: Sequence[int], acc: list) -> None:
    """(d^k_{k+1} f_k)(x_1..x_{k+1}; x_{k+2}..x_{n+1}) added into ``acc``."""
    n1 = len(xs)  # n + 1
    left = list(xs[:k + 1])
    right = list(xs[k + 1:])
    for i in range(1, k + 2):
        val = f.evaluate_args(k, _drop(left, i), right)
        if any(val):
            _acc(acc, _sign(i - 1), ctx.left(left[i - 1], val))
    for i in range(1, k + 2):
        for j in range(i + 1, k + 2):
            br = ctx.comm[left[i - 1]][left[j - 1]]
            if any(br):
                _acc(acc, _sign(i + j), f.evaluate_args(k, [br] + _drop(left, i, j), right))
    for i in range(1, k + 2):
        rest_left = _drop(left, i)
        for j in range(k + 2, n1 + 1):
            pr = ctx.prod[left[i - 1]][xs[j - 1]]
            if any(pr):
                new_right = [pr] + _drop(right, j - (k + 1))
                _acc(acc, -_sign(i + j + k + 1), f.evaluate_args(k, rest_left, new_right))


def _d_k_n(ctx: _Ctx, f: MultiCochain, k: int, xs: Sequence[int], acc: list) -> None:
    """(d^k_n f_k)(x_1..x_n; x_{n+1}) for k <= n - 2."""
    n = len(xs) - 1
    last = xs[n]
    for sigma in multi_shuffles(k, n - k):
        args = [xs[s - 1] for s in sigma]
        val = f.evaluate_args(k, args[:k], args[k:])
        if any(val):
            _acc(acc, _sign(n - 1) * perm_sign(sigma), ctx.right(val, last))


def _d_top(ctx: _Ctx, f: MultiCochain, xs: Sequence[int], acc: list) -> None:
    """(d^{n-1}_n f_{n-1})(x_1..x_n; x_{n+1})."""
    n = len(xs) - 1
    k = n - 1
    left = list(xs[:n])
    last = xs[n]
    for i in range(1, n + 1):
        s = _sign(i + 1)
        rest = _drop(left, i)
        val = f.evaluate_args(k, rest, [last])
        if any(val):
            _acc(acc, s, ctx.left(left[i - 1], val))
        val = f.evaluate_args(k, rest, [left[i - 1]])
        if any(val):
            _acc(acc, s, ctx.right(val, last))
        pr = ctx.prod[left[i - 1]][last]
        if any(pr):
            _acc(acc, -s, f.evaluate_args(k, rest, [pr]))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            br = ctx.comm[left[i - 1]][left[j - 1]]
            if any(br):
                _acc(acc, _sign(i + j), f.evaluate_args(k, [br] + _drop(left, i, j), [last]))


# which component maps to include; see ``coboundary_parts``
ALL_PARTS = frozenset({"k_k1", "k_n", "top"})


def coboundary_parts(tri: BilinearMap, f: MultiCochain, parts=ALL_PARTS,
                     sources: Sequence[int] | None = None) -> MultiCochain:
    """Sum of selected component maps applied to the selected source components.

    ``parts`` is a subset of ``{"k_k1", "k_n", "top"}``; ``sources`` restricts the
    components ``f_k`` that are fed in (default: all).
    """
    ctx = _Ctx(tri)
    return _coboundary(ctx, f, frozenset(parts), sources)


def _coboundary(ctx: _Ctx, f: MultiCochain, parts, sources) -> MultiCochain:
    n = f.degree + 1
    d = ctx.dim
    if f.dim != d:
        raise ValueError("dimension mismatch")
    src = set(range(n)) if sources is None else set(sources)
    live = {k for k in src if f.tables[k]}
    tables: list[dict] = [{} for _ in range(n + 1)]
    for j in range(1, n + 1):
        wanted = []
        if j <= n - 1 and "k_k1" in parts and (j - 1) in live:
            wanted.append(("k_k1", j - 1))
        if j == n:
            if "k_n" in parts:
                wanted.extend(("k_n", k) for k in range(n - 1) if k in live)
            if "top" in parts and (n - 1) in live:
                wanted.append(("top", n - 1))
        if not wanted:
            continue
        for left in combinations(range(d), j):
            for right in combinations(range(d), n + 1 - j):
                xs = left + right
                acc = [ZERO] * d
                for kind, k in wanted:
                    if kind == "k_k1":
                        _d_k_k1(ctx, f, k, xs, acc)
                    elif kind == "k_n":
                        _d_k_n(ctx, f, k, xs, acc)
                    else:
                        _d_top(ctx, f, xs, acc)
                if any(acc):
                    tables[j][(left, right)] = tuple(acc)
    return MultiCochain(d, n, tables)


def coboundary_apply(tri: BilinearMap, f: MultiCochain) -> MultiCochain:
    """The post-Lie coboundary of an n-cochain (``n = f.degree + 1 >= 1``)."""
    _require_pre_lie(tri)
    return _coboundary(_Ctx(tri), f, ALL_PARTS, None)


def cochain_space_dim(dim: int, n: int) -> int:
    """Dimension of the space of n-cochains (zero for n = 0)."""
    if n <= 0:
        return 0
    return MultiCochain.space_dim(dim, n - 1)


def cochain_keys(dim: int, n: int):
    return MultiCochain.basis_keys(dim, n - 1) if n >= 1 else []


def _matrix_of(ctx: _Ctx, n: int, parts=ALL_PARTS, sources=None) -> Matrix:
    d = ctx.dim
    keys = cochain_keys(d, n)
    rows = cochain_space_dim(d, n + 1)
    cols = []
    for key in keys:
        if sources is not None and key[0] not in sources:
            cols.append([ZERO] * rows)
            continue
        e = MultiCochain.from_entries(d, n - 1, [(*key, 1)])
        cols.append(_coboundary(ctx, e, parts, sources).to_vector())
    return Matrix.from_columns(cols, rows) if cols else Matrix.zeros(rows, 0)


def coboundary_matrix(tri: BilinearMap, n: int) -> Matrix:
    """Matrix of the coboundary on n-cochains in the canonical key order."""
    if n < 1:
        raise ValueError("the coboundary starts in degree 1")
    _require_pre_lie(tri)
    return _matrix_of(_Ctx(tri), n)


# ---------------------------------------------------------------------------
# cohomology of a matrix complex


@dataclass
class Quotient:
    """``ker(d_out) / im(d_in)`` with canonical representatives.

    ``coboundary_basis``/``coboundary_pivots`` is the RREF of the image; the
    representatives are reduced modulo it and themselves in RREF.
    """

    size: int
    cocycles: list[Vector]
    coboundary_basis: list[Vector]
    coboundary_pivots: list[int]
    representatives: list[Vector]
    rep_pivots: list[int]
    rank_in: int
    rank_out: int

    @property
    def betti(self) -> int:
        return len(self.representatives)

    def is_cocycle(self, v: Sequence[Fraction], d_out: Matrix | None) -> bool:
        return d_out is None or not any(d_out.apply(v))

    def coordinates(self, v: Sequence[Fraction]) -> list[Fraction]:
        """Class coordinates of a cocycle in the representative basis."""
        r = reduce_modulo(v, self.coboundary_basis, self.coboundary_pivots)
        coords = [r[p] for p in self.rep_pivots]
        check = list(r)
        for c, rep in zip(coords, self.representatives):
            if c:
                check = [x - c * y for x, y in zip(check, rep)]
        if any(check):
            raise ValueError("vector is not a cocycle of this complex")
        return coords

    def is_coboundary(self, v: Sequence[Fraction]) -> bool:
        return not any(reduce_modulo(v, self.coboundary_basis, self.coboundary_pivots))


def quotient(d_in: Matrix | None, d_out: Matrix | None, size: int) -> Quotient:
    """Cohomology at a node with incoming ``d_in`` and outgoing ``d_out`` (None = zero map)."""
    if d_out is None or d_out.rows == 0:
        cocycles = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
        rank_out = 0
    else:
        cocycles = kernel_basis(d_out)
        rank_out = d_out.rank()
    if d_in is None or d_in.cols == 0:
        bbasis, bpiv = [], []
    else:
        bbasis, bpiv = span_normal_form(d_in.columns(), size)
    reduced = [reduce_modulo(z, bbasis, bpiv) for z in cocycles]
    reps, rpiv = span_normal_form([r for r in reduced if any(r)], size)
    return Quotient(size, cocycles, bbasis, bpiv, reps, rpiv, len(bpiv), rank_out)


@dataclass
class CohomologyReport:
    degree: int
    dim_cochains: int
    rank_in: int
    rank_out: int
    betti: int
    representative_basis: list[MultiCochain] = field(default_factory=list)


def cohomology_basis(tri: BilinearMap, n: int) -> CohomologyReport:
    """``H^n``: cocycles of the degree-n coboundary modulo the image of degree n - 1."""
    if n < 1:
        raise ValueError("cohomology is indexed from degree 1")
    _require_pre_lie(tri)
    ctx = _Ctx(tri)
    d_out = _matrix_of(ctx, n)
    d_in = _matrix_of(ctx, n - 1) if n >= 2 else None
    size = cochain_space_dim(tri.dim, n)
    q = quotient(d_in, d_out, size)
    reps = [MultiCochain.from_vector(tri.dim, n - 1, v) for v in q.representatives]
    assert q.betti == size - q.rank_out - q.rank_in
    return CohomologyReport(n, size, q.rank_in, q.rank_out, q.betti, reps)


def derivation_dimension(tri: BilinearMap) -> int:
    return len(derivation_space(tri))


# ---------------------------------------------------------------------------
# 2-cocycles


@dataclass
class TwoCocycleDefect:
    """Defects of the two closedness equations on every ordered basis triple."""

    first: dict[tuple[int, int, int], tuple]
    second: dict[tuple[int, int, int], tuple]

    @property
    def vanishes(self) -> bool:
        return not any(any(v) for v in self.first.values()) and \
            not any(any(v) for v in self.second.values())


def two_cocycle_residual(tri: BilinearMap, pi: BilinearMap, omega: BilinearMap) -> TwoCocycleDefect:
    """``(x; y, z)`` and ``(x, y; z)`` defects of ``(pi, omega)`` being closed."""
    if not pi.is_antisymmetric():
        raise AxiomError("pi must be antisymmetric")
    d = tri.dim
    e = [basis_vec(d, i) for i in range(d)]
    first, second = {}, {}
    for a in range(d):
        for b in range(d):
            for c in range(d):
                x, y, z = e[a], e[b], e[c]
                v1 = [p - q + r for p, q, r in zip(tri(x, pi(y, z)), pi(tri(x, y), z),
                                                   pi(tri(x, z), y))]
                u = [p - q + r for p, q, r in zip(omega(x, y), omega(y, x), pi(x, y))]
                c_xy = [p - q for p, q in zip(tri(x, y), tri(y, x))]
                terms = [tri(u, z), omega(c_xy, z)]
                plus = [omega(x, tri(y, z)), tri(x, omega(y, z))]
                minus = [omega(y, tri(x, z)), tri(y, omega(x, z))]
                v2 = [-t1 - t2 + p1 + p2 - m1 - m2
                      for t1, t2, p1, p2, m1, m2 in zip(*terms, *plus, *minus)]
                first[(a, b, c)] = tuple(v1)
                second[(a, b, c)] = tuple(v2)
    return TwoCocycleDefect(first, second)


def pair_to_cochain(pi: BilinearMap, omega: BilinearMap) -> MultiCochain:
    """A 2-cochain ``(pi, omega)`` in ``C^{0,2} + C^{1,1}``."""
    return MultiCochain.from_pair(pi, omega)


def endomorphism_to_cochain(phi: Sequence[Sequence]) -> MultiCochain:
    """A 1-cochain from a matrix ``phi[r][c]`` = coefficient of e_r in phi(e_c)."""
    d = len(phi)
    return MultiCochain.from_entries(d, 0, [(0, (), (c,), r, phi[r][c])
                                            for r in range(d) for c in range(d) if phi[r][c]])


def cochain_to_endomorphism(f: MultiCochain) -> list[list[Fraction]]:
    if f.degree != 0:
        raise ValueError("1-cochains are stored with degree 0")
    d = f.dim
    cols = [f.evaluate(0, (), (c,)) for c in range(d)]
    return [[cols[c][r] for c in range(d)] for r in range(d)]


# ---------------------------------------------------------------------------
# subcomplexes and the long exact sequence


def _component_index(dim: int, n: int) -> dict[int, list[int]]:
    """Positions of each component's coordinates inside the n-cochain vector."""
    out: dict[int, list[int]] = {}
    for pos, key in enumerate(cochain_keys(dim, n)):
        out.setdefault(key[0], []).append(pos)
    return out


def _submatrix(m: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return Matrix([[m.entries[r][c] for c in cols] for r in rows], cols=len(cols))


def _restrict(v: Sequence, positions: Sequence[int]) -> list:
    return [v[p] for p in positions]


def _embed(v: Sequence, positions: Sequence[int], size: int) -> list:
    out = [ZERO] * size
    for x, p in zip(v, positions):
        out[p] = x
    return out


@dataclass
class ExactnessNode:
    name: str
    dim: int
    image_rank: int
    kernel_dim: int
    composite_zero: bool

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.image_rank == self.kernel_dim


@dataclass
class LESReport:
    max_degree: int
    betti_plie: dict[int, int]
    betti_postlie: dict[int, int]
    betti_plie_k: dict[int, dict[int, int]]
    nodes: list[ExactnessNode]
    short_exact: dict[int, bool]
    connecting_sign_flip_needed: bool = False

    @property
    def exact(self) -> bool:
        return all(node.exact for node in self.nodes)

    @property
    def holds(self) -> bool:
        return self.exact and all(self.short_exact.values())


class _Complexes:
    """Coordinates and differentials of the three complexes up to a degree."""

    def __init__(self, tri: BilinearMap, top: int):
        ctx = _Ctx(tri)
        self.dim = d = tri.dim
        self.top = top
        self.full = {n: _matrix_of(ctx, n) for n in range(1, top + 1)}
        self.sub_part = {n: _matrix_of(ctx, n, {"top"}, {n - 1}) for n in range(1, top + 1)}
        self.quot_part = {n: _matrix_of(ctx, n, {"k_k1"}, set(range(n - 1)))
                          for n in range(1, top + 1)}
        self.conn_part = {n: _matrix_of(ctx, n, {"k_n"}, set(range(n - 1)))
                          for n in range(1, top + 1)}
        self.comp = {n: _component_index(d, n) for n in range(1, top + 2)}

    def size(self, n):
        return cochain_space_dim(self.dim, n)

    def a_pos(self, n):
        """Coordinates of C^{n-1,1} inside the n-cochains."""
        return self.comp[n].get(n - 1, [])

    def q_pos(self, n, s=None):
        """Coordinates of sum_{k <= n-2} C^{k,n-k} (or only second arity s)."""
        out = []
        for k in range(n - 1):
            if s is None or n - k == s:
                out.extend(self.comp[n].get(k, []))
        return out

    def d_a(self, n) -> Matrix:
        return _submatrix(self.sub_part[n], self.a_pos(n + 1), self.a_pos(n))

    def d_q(self, n, s=None) -> Matrix:
        return _submatrix(self.quot_part[n], self.q_pos(n + 1, s), self.q_pos(n, s))

    def conn(self, n) -> Matrix:
        """sum_k d^k_n restricted: Q^n -> A^{n+1}."""
        return _submatrix(self.conn_part[n], self.a_pos(n + 1), self.q_pos(n))


def _qa(cx: _Complexes, n: int, s=None) -> Quotient:
    pos = cx.q_pos(n, s)
    d_out = cx.d_q(n, s) if n + 1 <= cx.top + 1 and n <= cx.top else None
    d_in = cx.d_q(n - 1, s) if n >= 2 else None
    return quotient(d_in, d_out, len(pos))


def les_verify(tri: BilinearMap, max_degree: int) -> LESReport:
    """Exactness of the long sequence ``H(PLie) -> H(postLie) -> sum_s H(PLie_s) -> H(PLie)``.

    ``H^n(PLie_s)`` is taken at the node ``C^{n-s, s}`` of total degree ``n``.
    Nodes through ``max_degree`` are checked, including the connecting map out of
    degree ``max_degree``.
    """
    _require_pre_lie(tri)
    top = max_degree + 1
    cx = _Complexes(tri, top)

    ha, hb, hq = {}, {}, {}
    for n in range(1, top + 1):
        ha[n] = quotient(cx.d_a(n - 1) if n >= 2 else None, cx.d_a(n) if n < top else None,
                         len(cx.a_pos(n)))
        hb[n] = quotient(cx.full[n - 1] if n >= 2 else None, cx.full[n] if n < top else None,
                         cx.size(n))
        if n < top:
            hq[n] = quotient(cx.d_q(n - 1) if n >= 2 else None, cx.d_q(n), len(cx.q_pos(n)))

    def iota(n):
        cols = []
        for rep in ha[n].representatives:
            cols.append(hb[n].coordinates(_embed(rep, cx.a_pos(n), cx.size(n))))
        return cols, hb[n].betti

    def proj(n):
        return [hq[n].coordinates(_restrict(rep, cx.q_pos(n))) for rep in hb[n].representatives], \
            hq[n].betti

    def conn(n):
        c = cx.conn(n)
        return [ha[n + 1].coordinates(c.apply(rep)) for rep in hq[n].representatives], \
            ha[n + 1].betti

    def rank(cols, rows):
        if not cols or rows == 0:
            return 0
        return Matrix.from_columns(cols, rows).rank()

    def compose_zero(first, second_fn_rows, second):
        # second o first == 0 where maps are given by columns in coordinates
        if not first or not second:
            return True
        m2 = Matrix.from_columns(second, second_fn_rows)
        return all(not any(m2.apply(col)) for col in first)

    nodes: list[ExactnessNode] = []
    maps = {}
    for n in range(1, max_degree + 1):
        maps[("i", n)] = iota(n)
        maps[("p", n)] = proj(n)
        maps[("c", n)] = conn(n)
    if top in ha and top <= cx.top:
        maps[("i", top)] = iota(top) if top < cx.top + 1 and top in hb else ([], 0)

    # exactness at H^1(PLie): 0 -> H^1(PLie) injective
    i1, _ = maps[("i", 1)]
    nodes.append(ExactnessNode("H^1(PLie)", ha[1].betti, 0, ha[1].betti - rank(i1, hb[1].betti),
                               True))
    for n in range(1, max_degree + 1):
        i_n, _ = maps[("i", n)]
        p_n, _ = maps[("p", n)]
        c_n, _ = maps[("c", n)]
        r_i = rank(i_n, hb[n].betti)
        r_p = rank(p_n, hq[n].betti)
        r_c = rank(c_n, ha[n + 1].betti)
        nodes.append(ExactnessNode(f"H^{n}(postLie)", hb[n].betti, r_i, hb[n].betti - r_p,
                                   compose_zero(i_n, hq[n].betti, p_n)))
        nodes.append(ExactnessNode(f"H^{n}(PLie_*)", hq[n].betti, r_p, hq[n].betti - r_c,
                                   compose_zero(p_n, ha[n + 1].betti, c_n)))
        if n + 1 <= max_degree:
            i_next, _ = maps[("i", n + 1)]
            r_next = rank(i_next, hb[n + 1].betti)
            nodes.append(ExactnessNode(f"H^{n + 1}(PLie)", ha[n + 1].betti, r_c,
                                       ha[n + 1].betti - r_next,
                                       compose_zero(c_n, hb[n + 1].betti, i_next)))

    betti_k: dict[int, dict[int, int]] = {}
    for n in range(1, max_degree + 1):
        per = {}
        for s in range(2, n + 1):
            per[s] = _qa(cx, n, s).betti
        betti_k[n] = per

    short = {n: _short_exact(cx, n) for n in range(1, cx.top + 1)}
    return LESReport(max_degree, {n: ha[n].betti for n in range(1, max_degree + 1)},
                     {n: hb[n].betti for n in range(1, max_degree + 1)}, betti_k, nodes, short)


def _short_exact(cx: _Complexes, n: int) -> bool:
    """Cochain-level exactness of 0 -> A^n -> B^n -> Q^n -> 0 and the chain-map squares."""
    size = cx.size(n)
    a, q = cx.a_pos(n), cx.q_pos(n)
    iota = Matrix.from_columns([_embed([Fraction(int(i == j)) for j in range(len(a))], a, size)
                                for i in range(len(a))], size) if a else Matrix.zeros(size, 0)
    proj = Matrix([[Fraction(int(p == c)) for c in range(size)] for p in q], cols=size) \
        if q else Matrix.zeros(0, size)
    ok = True
    if a and q:
        ok &= (proj @ iota).is_zero()
    ok &= iota.rank() == len(a)
    ok &= proj.rank() == len(q)
    ok &= len(a) + len(q) == size
    # ker p == im iota
    if q:
        ker = kernel_basis(proj)
        ok &= len(ker) == len(a) and (not a or Matrix([*iota.columns(), *ker], cols=size).rank()
                                      == len(a))
    # chain maps, for the degrees where the outgoing differentials are built
    if n in cx.full:
        full = cx.full[n]
        if a:
            a_next = cx.a_pos(n + 1)
            lhs = full @ iota
            rhs_cols = [_embed(col, a_next, cx.size(n + 1)) for col in cx.d_a(n).columns()]
            ok &= lhs.columns() == rhs_cols
        if q:
            q_next = cx.q_pos(n + 1)
            proj_next = Matrix([[Fraction(int(p == c)) for c in range(cx.size(n + 1))]
                                for p in q_next], cols=cx.size(n + 1)) if q_next else None
            if proj_next is not None:
                lhs = proj_next @ full
                rhs = cx.d_q(n) @ proj
                ok &= lhs == rhs
    return bool(ok)


def euler_characteristic(bettis: dict[int, int], lo: int, hi: int) -> int:
    return sum((-1) ** n * bettis.get(n, 0) for n in range(lo, hi + 1))


def differential_sign_relation(tri: BilinearMap, n: int, samples: Sequence[MultiCochain]
                               ) -> str:
    """Compare the coboundary with ``+/- [tri, .]`` on n-cochains: "+", "-", "both" or "none"."""
    from .cochains import differential

    plus = minus = True
    for f in samples:
        if f.degree != n - 1:
            raise ValueError("sample of the wrong degree")
        a = coboundary_apply(tri, f)
        b = differential(tri, f)
        plus &= a == b
        minus &= a == -b
    if plus and minus:
        return "both"
    return "+" if plus else "-" if minus else "none"
