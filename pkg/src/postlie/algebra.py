"""Finite-dimensional algebras over Q given by structure constants, and axiom checkers.

A :class:`BilinearMap` stores ``c[i][j][k]`` with ``product(e_i, e_j) = sum_k c[i][j][k] e_k``.
Axioms are checked on every ordered basis triple; a failing triple is reported
together with its (nonzero) defect vector.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exact import ZERO, Matrix, as_rational, kernel_basis

Vec = list[Fraction]


class AxiomError(ValueError):
    """Input violates a precondition (e.g. a bracket that is not antisymmetric)."""


def zero_vec(dim: int) -> Vec:
    return [ZERO] * dim


def basis_vec(dim: int, i: int) -> Vec:
    v = [ZERO] * dim
    v[i] = Fraction(1)
    return v


def vadd(*vs: Sequence[Fraction]) -> Vec:
    return [sum(xs, ZERO) for xs in zip(*vs)]


def vsub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return [x - y for x, y in zip(a, b)]


def vscale(c, v: Sequence[Fraction]) -> Vec:
    return [c * x for x in v]


def is_zero(v: Sequence[Fraction]) -> bool:
    return not any(v)


class BilinearMap:
    """Structure constants of a bilinear map ``V x V -> V``."""

    __slots__ = ("dim", "coeffs", "symmetry_tag", "_rows")

    def __init__(self, dim: int, coeffs, symmetry_tag: str = "none"):
        if symmetry_tag not in ("none", "antisymmetric"):
            raise ValueError(f"unknown symmetry tag {symmetry_tag!r}")
        c = tuple(tuple(tuple(as_rational(coeffs[i][j][k]) for k in range(dim))
                        for j in range(dim)) for i in range(dim))
        self.dim = dim
        self.coeffs = c
        self.symmetry_tag = symmetry_tag
        if symmetry_tag == "antisymmetric" and not self.is_antisymmetric():
            raise AxiomError("structure constants tagged antisymmetric are not")
        self._rows = None

    @classmethod
    def zero(cls, dim: int, symmetry_tag: str = "none") -> BilinearMap:
        return cls(dim, [[[0] * dim for _ in range(dim)] for _ in range(dim)], symmetry_tag)

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[tuple[int, int, int, object]],
                     symmetry_tag: str = "none") -> BilinearMap:
        """Build from sparse ``(i, j, k, value)`` quadruples (later entries add up)."""
        c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for i, j, k, value in entries:
            c[i][j][k] += as_rational(value)
        return cls(dim, c, symmetry_tag)

    @classmethod
    def from_function(cls, dim: int, fn: Callable[[int, int], Sequence],
                      symmetry_tag: str = "none") -> BilinearMap:
        return cls(dim, [[list(fn(i, j)) for j in range(dim)] for i in range(dim)], symmetry_tag)

    def entries(self) -> list[tuple[int, int, int, Fraction]]:
        d = self.dim
        return [(i, j, k, self.coeffs[i][j][k]) for i in range(d) for j in range(d)
                for k in range(d) if self.coeffs[i][j][k]]

    def is_antisymmetric(self) -> bool:
        d = self.dim
        return all(self.coeffs[i][j][k] == -self.coeffs[j][i][k]
                   for i in range(d) for j in range(d) for k in range(d))

    def as_antisymmetric(self) -> BilinearMap:
        """Same constants re-tagged antisymmetric (raises if they are not)."""
        return BilinearMap(self.dim, self.coeffs, "antisymmetric")

    def basis(self, i: int, j: int) -> Vec:
        return list(self.coeffs[i][j])

    def __call__(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vec:
        d = self.dim
        out = [ZERO] * d
        for i in range(d):
            xi = x[i]
            if not xi:
                continue
            ci = self.coeffs[i]
            for j in range(d):
                w = xi * y[j]
                if not w:
                    continue
                for k, c in enumerate(ci[j]):
                    if c:
                        out[k] += w * c
        return out

    def _combine(self, other: BilinearMap, f) -> BilinearMap:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        d = self.dim
        return BilinearMap(d, [[[f(self.coeffs[i][j][k], other.coeffs[i][j][k]) for k in range(d)]
                                for j in range(d)] for i in range(d)])

    def __add__(self, other: BilinearMap) -> BilinearMap:
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: BilinearMap) -> BilinearMap:
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> BilinearMap:
        return self.scale(-1)

    def scale(self, c) -> BilinearMap:
        c = as_rational(c)
        d = self.dim
        return BilinearMap(d, [[[c * x for x in row] for row in plane] for plane in self.coeffs],
                           self.symmetry_tag)

    def opposite(self) -> BilinearMap:
        """``(x, y) -> self(y, x)``."""
        d = self.dim
        return BilinearMap(d, [[self.coeffs[j][i] for j in range(d)] for i in range(d)])

    def is_zero(self) -> bool:
        return not any(x for plane in self.coeffs for row in plane for x in row)

    def __eq__(self, other) -> bool:
        return isinstance(other, BilinearMap) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"BilinearMap(dim={self.dim}, nonzero={len(self.entries())}, {self.symmetry_tag})"


@dataclass
class FiniteAlgebra:
    dim: int
    basis_labels: list[str]
    products: dict[str, BilinearMap] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.basis_labels) != self.dim:
            raise ValueError("one label per basis vector is required")
        if len(set(self.basis_labels)) != self.dim:
            raise ValueError("basis labels must be distinct")
        for name, m in self.products.items():
            if m.dim != self.dim:
                raise ValueError(f"product {name!r} has dim {m.dim}, expected {self.dim}")

    @property
    def triangle(self) -> BilinearMap:
        return self.products["triangle"]


@dataclass
class AxiomReport:
    """Outcome of an exhaustive basis-triple sweep.

    ``witnesses`` holds ``(axiom, triple, defect)`` entries in sweep order;
    ``holds`` is true exactly when there are none.
    """

    witnesses: list[tuple[str, tuple, list]] = field(default_factory=list)
    checked: int = 0

    @property
    def holds(self) -> bool:
        return not self.witnesses

    def __bool__(self) -> bool:
        return self.holds

    def failed_axioms(self) -> list[str]:
        seen: list[str] = []
        for name, _, _ in self.witnesses:
            if name not in seen:
                seen.append(name)
        return seen

    def extend(self, other: AxiomReport) -> AxiomReport:
        self.witnesses.extend(other.witnesses)
        self.checked += other.checked
        return self


def _sweep(dim: int, axioms: dict[str, Callable[[Vec, Vec, Vec], Vec]]) -> AxiomReport:
    report = AxiomReport()
    basis = [basis_vec(dim, i) for i in range(dim)]
    for name, defect in axioms.items():
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    report.checked += 1
                    v = defect(basis[i], basis[j], basis[k])
                    if not is_zero(v):
                        report.witnesses.append((name, (i, j, k), v))
    return report


def _require_antisymmetric(pi: BilinearMap) -> None:
    if not pi.is_antisymmetric():
        raise AxiomError("bracket is not antisymmetric")


def jacobi_defect(pi: BilinearMap) -> Callable[[Vec, Vec, Vec], Vec]:
    return lambda x, y, z: vadd(pi(pi(x, y), z), pi(pi(y, z), x), pi(pi(z, x), y))


def pre_lie_defect(rho: BilinearMap) -> Callable[[Vec, Vec, Vec], Vec]:
    """``(x>y - y>x)>z - x>(y>z) + y>(x>z)``."""
    def defect(x, y, z):
        return vadd(rho(vsub(rho(x, y), rho(y, x)), z),
                    vscale(-1, rho(x, rho(y, z))), rho(y, rho(x, z)))
    return defect


def post1_defect(pi: BilinearMap, rho: BilinearMap) -> Callable[[Vec, Vec, Vec], Vec]:
    """``x>[y,z] - [x>y,z] - [y,x>z]``."""
    return lambda x, y, z: vsub(rho(x, pi(y, z)), vadd(pi(rho(x, y), z), pi(y, rho(x, z))))


def post2_defect(pi: BilinearMap, rho: BilinearMap) -> Callable[[Vec, Vec, Vec], Vec]:
    """``([x,y] + x>y - y>x)>z - x>(y>z) + y>(x>z)``."""
    def defect(x, y, z):
        u = vadd(pi(x, y), rho(x, y), vscale(-1, rho(y, x)))
        return vadd(rho(u, z), vscale(-1, rho(x, rho(y, z))), rho(y, rho(x, z)))
    return defect


def check_jacobi(pi: BilinearMap) -> AxiomReport:
    _require_antisymmetric(pi)
    return _sweep(pi.dim, {"jacobi": jacobi_defect(pi)})


def check_pre_lie(rho: BilinearMap) -> AxiomReport:
    return _sweep(rho.dim, {"pre_lie": pre_lie_defect(rho)})


def check_post_lie(pi: BilinearMap, rho: BilinearMap) -> AxiomReport:
    """Jacobi for ``pi`` plus the two post-Lie compatibilities, tagged by axiom."""
    _require_antisymmetric(pi)
    if pi.dim != rho.dim:
        raise ValueError("dimension mismatch")
    return _sweep(pi.dim, {
        "jacobi": jacobi_defect(pi),
        "post1": post1_defect(pi, rho),
        "post2": post2_defect(pi, rho),
    })


def sub_adjacent(pi: BilinearMap, rho: BilinearMap) -> BilinearMap:
    """``[x, y]' = x>y - y>x + [x, y]``."""
    return (rho - rho.opposite() + pi).as_antisymmetric()


def check_deformation_conditions(tri: BilinearMap, pi: BilinearMap,
                                 omega: BilinearMap) -> AxiomReport:
    """Conditions under which ``(pi, tri + omega)`` is post-Lie, for a pre-Lie ``tri``.

    (i) Jacobi for ``pi``; (ii) compatibility of ``tri + omega`` with ``pi``;
    (iii) the left-symmetry of ``tri + omega`` relative to ``pi``, written with
    ``tri`` and ``omega`` kept apart.
    """
    _require_antisymmetric(pi)
    base = check_pre_lie(tri)
    if not base.holds:
        name, triple, defect = base.witnesses[0]
        raise AxiomError(f"base product is not pre-Lie at basis triple {triple}: {defect}")

    def cond2(x, y, z):
        lhs = vadd(tri(x, pi(y, z)), omega(x, pi(y, z)))
        rhs = vadd(pi(tri(x, y), z), pi(y, tri(x, z)), pi(omega(x, y), z), pi(y, omega(x, z)))
        return vsub(lhs, rhs)

    def cond3(x, y, z):
        u = vadd(omega(x, y), vscale(-1, omega(y, x)), pi(x, y))
        lhs = vadd(tri(u, z), omega(vsub(tri(x, y), tri(y, x)), z), omega(u, z))
        rhs = vadd(omega(x, tri(y, z)), tri(x, omega(y, z)), vscale(-1, omega(y, tri(x, z))),
                   vscale(-1, tri(y, omega(x, z))), omega(x, omega(y, z)),
                   vscale(-1, omega(y, omega(x, z))))
        return vsub(lhs, rhs)

    return _sweep(tri.dim, {"i": jacobi_defect(pi), "ii": cond2, "iii": cond3})


# ---------------------------------------------------------------------------
# derivations and the pre-Lie corpus


def derivation_equations(rho: BilinearMap) -> Matrix:
    """Linear system on ``D`` (row-major ``D[r][c]`` = coefficient of e_r in D(e_c))
    expressing ``D(x>y) = D(x)>y + x>D(y)`` on basis pairs."""
    d = rho.dim
    rows = []
    for i in range(d):
        for j in range(d):
            for k in range(d):
                row = [ZERO] * (d * d)
                # D(e_i > e_j)_k = sum_m c[i][j][m] D[k][m]
                for m in range(d):
                    row[k * d + m] += rho.coeffs[i][j][m]
                # (D e_i) > e_j = sum_r D[r][i] c[r][j][k]
                for r in range(d):
                    row[r * d + i] -= rho.coeffs[r][j][k]
                    row[r * d + j] -= rho.coeffs[i][r][k]
                rows.append(row)
    return Matrix(rows, cols=d * d)


def derivation_space(alg: FiniteAlgebra | BilinearMap) -> list[list[list[Fraction]]]:
    """Basis of the derivations of the ``triangle`` product, as d x d matrices."""
    rho = alg if isinstance(alg, BilinearMap) else alg.triangle
    d = rho.dim
    return [[v[r * d:(r + 1) * d] for r in range(d)] for v in kernel_basis(derivation_equations(rho))]


def derivation_extension(rho: BilinearMap, derivations: Sequence[Sequence[Sequence]]) -> BilinearMap:
    """Adjoin one basis vector ``X_i`` per derivation ``D_i`` acting by ``X_i > a = D_i(a)``.

    The derivations must commute pairwise; other new products vanish.
    """
    d = rho.dim
    ds = [[[as_rational(x) for x in row] for row in D] for D in derivations]
    for a, Da in enumerate(ds):
        for Db in ds[a + 1:]:
            if _matmul(Da, Db) != _matmul(Db, Da):
                raise AxiomError("derivations do not commute")
    n = d + len(ds)
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(d):
        for j in range(d):
            for k in range(d):
                c[i][j][k] = rho.coeffs[i][j][k]
    for t, D in enumerate(ds):
        for j in range(d):
            for r in range(d):
                c[d + t][j][r] = D[r][j]
    return BilinearMap(n, c)


def _matmul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]


def associative_from_table(dim: int, table: dict[tuple[int, int], dict[int, int]]) -> BilinearMap:
    return BilinearMap.from_entries(dim, [(i, j, k, v) for (i, j), out in table.items()
                                          for k, v in out.items()])


def check_associative(rho: BilinearMap) -> AxiomReport:
    return _sweep(rho.dim, {"associative": lambda x, y, z: vsub(rho(rho(x, y), z),
                                                                rho(x, rho(y, z)))})


def pre_lie_corpus() -> dict[str, BilinearMap]:
    """Named pre-Lie algebras of dimension 2 and 3 used across the test-suite.

    Built from associative algebras, zero products and derivation extensions.
    """
    c: dict[str, BilinearMap] = {}
    c["zero2"] = BilinearMap.zero(2)
    c["zero3"] = BilinearMap.zero(3)
    # Q[x]/(x^2), basis (1, x)
    c["dual_numbers"] = associative_from_table(2, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})
    # Q[x]/(x^3), basis (1, x, x^2)
    c["truncated_poly3"] = associative_from_table(3, {
        (0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1},
        (1, 1): {2: 1}})
    c["split2"] = associative_from_table(2, {(0, 0): {0: 1}, (1, 1): {1: 1}})
    c["split3"] = associative_from_table(3, {(0, 0): {0: 1}, (1, 1): {1: 1}, (2, 2): {2: 1}})
    # upper triangular 2x2 matrices, basis (E11, E12, E22)
    c["upper_triangular"] = associative_from_table(3, {
        (0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}})
    # left-unital, non-commutative: e0 e_j = e_j
    c["left_unit2"] = associative_from_table(2, {(0, 0): {0: 1}, (0, 1): {1: 1}})
    # square-zero ideal: x^2 = y, dim 2 non-unital
    c["nilpotent2"] = associative_from_table(2, {(0, 0): {1: 1}})
    # derivation extension of the 1-dim zero algebra by D = id: X > a = a
    c["ext_zero1"] = derivation_extension(BilinearMap.zero(1), [[[1]]])
    # derivation extension of Q[x]/(x^2) by D(1) = 0, D(x) = x
    c["ext_dual_numbers"] = derivation_extension(c["dual_numbers"], [[[0, 0], [0, 1]]])
    # derivation extension of the zero algebra on Q^2 by two commuting diagonal maps
    c["ext_zero2_diag"] = derivation_extension(BilinearMap.zero(2), [[[1, 0], [0, 2]]])
    return c


def random_bilinear(dim: int, rng: random.Random, lo: int = -2, hi: int = 2,
                    density: float = 0.5, antisymmetric: bool = False) -> BilinearMap:
    """Random small-integer structure constants (sparse with the given density)."""
    c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            if antisymmetric and j <= i:
                continue
            for k in range(dim):
                if rng.random() < density:
                    c[i][j][k] = Fraction(rng.randint(lo, hi))
                    if antisymmetric:
                        c[j][i][k] = -c[i][j][k]
    return BilinearMap(dim, c, "antisymmetric" if antisymmetric else "none")
