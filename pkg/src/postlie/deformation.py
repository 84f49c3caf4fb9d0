"""Truncated formal post-Lie deformations ``(pi_t, omega_t)`` of a pre-Lie algebra.

Power series are coefficient lists truncated at order ``N``; there is no symbolic
``t``. Linear maps are square matrices ``phi[r][c]`` (coefficient of ``e_r`` in
``phi(e_c)``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import AxiomError, BilinearMap, basis_vec, check_pre_lie
from .cochains import MultiCochain
from .cohomology import cochain_space_dim, coboundary_matrix, pair_to_cochain, quotient
from .exact import ZERO, Matrix, as_rational, reduce_modulo

LinearMap = list[list[Fraction]]
Triple = tuple[int, int, int]


def identity_map(dim: int) -> LinearMap:
    return [[Fraction(int(r == c)) for c in range(dim)] for r in range(dim)]


def zero_map(dim: int) -> LinearMap:
    return [[ZERO] * dim for _ in range(dim)]


def _as_map(m: Sequence[Sequence]) -> LinearMap:
    return [[as_rational(x) for x in row] for row in m]


def map_mul(a: LinearMap, b: LinearMap) -> LinearMap:
    n = len(a)
    return [[sum((a[r][k] * b[k][c] for k in range(n)), ZERO) for c in range(n)] for r in range(n)]


def map_add(a: LinearMap, b: LinearMap) -> LinearMap:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def map_apply(a: LinearMap, v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), ZERO) for row in a]


def compose_with_maps(b: BilinearMap, outer: LinearMap | None, p: LinearMap, q: LinearMap,
                      symmetry_tag: str = "none") -> BilinearMap:
    """``(x, y) -> outer(b(p x, q y))``; ``outer=None`` means identity."""
    d = b.dim
    cols_p = [[p[r][c] for r in range(d)] for c in range(d)]
    cols_q = [[q[r][c] for r in range(d)] for c in range(d)]

    def fn(i, j):
        v = b(cols_p[i], cols_q[j])
        return v if outer is None else map_apply(outer, v)

    return BilinearMap.from_function(d, fn, symmetry_tag)


# ---------------------------------------------------------------------------


@dataclass
class FormalDeformation:
    """``pi_t = sum pi_i t^i`` and ``omega_t = sum omega_i t^i`` up to ``t^order``."""

    dim: int
    order: int
    pi_coeffs: list[BilinearMap]
    omega_coeffs: list[BilinearMap]

    def __post_init__(self):
        if len(self.pi_coeffs) != self.order + 1 or len(self.omega_coeffs) != self.order + 1:
            raise ValueError(f"order {self.order} needs {self.order + 1} coefficients per series")
        for m in (*self.pi_coeffs, *self.omega_coeffs):
            if m.dim != self.dim:
                raise ValueError("coefficient dimension mismatch")
        for i, p in enumerate(self.pi_coeffs):
            if not p.is_antisymmetric():
                raise AxiomError(f"pi_{i} is not antisymmetric")
        if not self.pi_coeffs[0].is_zero():
            raise AxiomError("pi_0 must vanish")

    @property
    def base(self) -> BilinearMap:
        return self.omega_coeffs[0]

    @classmethod
    def undeformed(cls, tri: BilinearMap, order: int) -> FormalDeformation:
        d = tri.dim
        return cls(d, order, [BilinearMap.zero(d, "antisymmetric") for _ in range(order + 1)],
                   [tri] + [BilinearMap.zero(d) for _ in range(order)])

    @classmethod
    def first_order(cls, tri: BilinearMap, pi1: BilinearMap, omega1: BilinearMap,
                    order: int = 1) -> FormalDeformation:
        d = tri.dim
        zero_pi = BilinearMap.zero(d, "antisymmetric")
        pis = [zero_pi, pi1] + [zero_pi] * (order - 1)
        omegas = [tri, omega1] + [BilinearMap.zero(d)] * (order - 1)
        return cls(d, order, pis, omegas)

    def coefficient(self, n: int) -> tuple[BilinearMap, BilinearMap]:
        return self.pi_coeffs[n], self.omega_coeffs[n]

    def is_undeformed(self) -> bool:
        return all(p.is_zero() for p in self.pi_coeffs) and \
            all(w.is_zero() for w in self.omega_coeffs[1:])

    def truncate(self, order: int) -> FormalDeformation:
        return FormalDeformation(self.dim, order, self.pi_coeffs[:order + 1],
                                 self.omega_coeffs[:order + 1])

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalDeformation) and self.order == other.order and \
            self.pi_coeffs == other.pi_coeffs and self.omega_coeffs == other.omega_coeffs


@dataclass
class FormalIsomorphism:
    """``Phi_t = sum phi_i t^i`` with ``phi_0 = Id``."""

    dim: int
    order: int
    phi_coeffs: list[LinearMap]

    def __post_init__(self):
        self.phi_coeffs = [_as_map(m) for m in self.phi_coeffs]
        if len(self.phi_coeffs) != self.order + 1:
            raise ValueError(f"order {self.order} needs {self.order + 1} coefficients")
        if self.phi_coeffs[0] != identity_map(self.dim):
            raise ValueError("phi_0 must be the identity")

    @classmethod
    def identity(cls, dim: int, order: int) -> FormalIsomorphism:
        return cls(dim, order, [identity_map(dim)] + [zero_map(dim) for _ in range(order)])

    @classmethod
    def monomial(cls, phi: LinearMap, power: int, order: int) -> FormalIsomorphism:
        """``Id + phi t^power``."""
        d = len(phi)
        coeffs = [identity_map(d)] + [zero_map(d) for _ in range(order)]
        if power <= order:
            coeffs[power] = _as_map(phi)
        return cls(d, order, coeffs)

    def compose(self, other: FormalIsomorphism) -> FormalIsomorphism:
        """``self o other`` truncated."""
        if (self.dim, self.order) != (other.dim, other.order):
            raise ValueError("dimension/order mismatch")
        out = []
        for n in range(self.order + 1):
            acc = zero_map(self.dim)
            for i in range(n + 1):
                acc = map_add(acc, map_mul(self.phi_coeffs[i], other.phi_coeffs[n - i]))
            out.append(acc)
        return FormalIsomorphism(self.dim, self.order, out)

    def inverse(self) -> FormalIsomorphism:
        d = self.dim
        psi = [identity_map(d)]
        for n in range(1, self.order + 1):
            acc = zero_map(d)
            for i in range(1, n + 1):
                acc = map_add(acc, map_mul(self.phi_coeffs[i], psi[n - i]))
            psi.append([[-x for x in row] for row in acc])
        return FormalIsomorphism(d, self.order, psi)

    def is_identity(self) -> bool:
        return self == FormalIsomorphism.identity(self.dim, self.order)


# ---------------------------------------------------------------------------
# order-by-order residuals


@dataclass
class OrderResidual:
    """Defects of the three order-``n`` convolution identities on all basis triples."""

    order: int
    jacobi: dict[Triple, tuple]
    post1: dict[Triple, tuple]
    post2: dict[Triple, tuple]

    @property
    def vanishes(self) -> bool:
        return not any(any(v) for t in (self.jacobi, self.post1, self.post2) for v in t.values())

    def first_defect(self) -> tuple[str, Triple, tuple] | None:
        for name, table in (("jacobi", self.jacobi), ("post1", self.post1), ("post2", self.post2)):
            for key in sorted(table):
                if any(table[key]):
                    return name, key, table[key]
        return None

    def flat(self) -> list[Fraction]:
        out: list[Fraction] = []
        for table in (self.jacobi, self.post1, self.post2):
            for key in sorted(table):
                out.extend(table[key])
        return out


def _order_residual(pis: Sequence[BilinearMap], omegas: Sequence[BilinearMap], n: int
                    ) -> OrderResidual:
    d = pis[0].dim
    e = [basis_vec(d, i) for i in range(d)]
    pairs = [(i, n - i) for i in range(n + 1)]
    jac, p1, p2 = {}, {}, {}
    for a in range(d):
        for b in range(d):
            for c in range(d):
                x, y, z = e[a], e[b], e[c]
                r4 = [ZERO] * d
                r5 = [ZERO] * d
                r6 = [ZERO] * d
                for i, j in pairs:
                    pi_i, pi_j = pis[i], pis[j]
                    om_i, om_j = omegas[i], omegas[j]
                    if not pi_i.is_zero() and not pi_j.is_zero():
                        for u in (pi_i(pi_j(x, y), z), pi_i(pi_j(y, z), x), pi_i(pi_j(z, x), y)):
                            r4 = [s + t for s, t in zip(r4, u)]
                    if not om_i.is_zero() and not pi_j.is_zero():
                        u1 = om_i(x, pi_j(y, z))
                        u2 = pi_j(om_i(x, y), z)
                        u3 = pi_j(y, om_i(x, z))
                        r5 = [s + p - q - w for s, p, q, w in zip(r5, u1, u2, u3)]
                    if not om_i.is_zero():
                        inner = [p - q + w for p, q, w in zip(om_j(x, y), om_j(y, x), pi_j(x, y))]
                        u1 = om_i(inner, z)
                        u2 = om_i(x, om_j(y, z))
                        u3 = om_i(y, om_j(x, z))
                        r6 = [s + p - q + w for s, p, q, w in zip(r6, u1, u2, u3)]
                jac[(a, b, c)] = tuple(r4)
                p1[(a, b, c)] = tuple(r5)
                p2[(a, b, c)] = tuple(r6)
    return OrderResidual(n, jac, p1, p2)


def _require_base(D: FormalDeformation) -> None:
    report = check_pre_lie(D.base)
    if not report.holds:
        raise AxiomError(f"omega_0 is not pre-Lie at basis triple {report.witnesses[0][1]}")


def residuals_by_order(D: FormalDeformation) -> list[OrderResidual]:
    """Residuals of the convolution identities at orders ``0..N``."""
    _require_base(D)
    return [_order_residual(D.pi_coeffs, D.omega_coeffs, n) for n in range(D.order + 1)]


def is_valid(D: FormalDeformation) -> bool:
    return all(r.vanishes for r in residuals_by_order(D))


def infinitesimal(D: FormalDeformation) -> tuple[BilinearMap, BilinearMap]:
    if D.order < 1:
        raise ValueError("a deformation of order 0 has no infinitesimal")
    _require_base(D)
    res = _order_residual(D.pi_coeffs, D.omega_coeffs, 1)
    if not res.vanishes:
        raise AxiomError(f"order-1 residual does not vanish: {res.first_defect()}")
    return D.pi_coeffs[1], D.omega_coeffs[1]


# ---------------------------------------------------------------------------
# conjugation


def _conjugate_series(series: Sequence[BilinearMap], phi: FormalIsomorphism,
                      psi: FormalIsomorphism, tag: str) -> list[BilinearMap]:
    """Coefficients of ``Psi o series o (Phi x Phi)`` truncated."""
    N = phi.order
    d = phi.dim
    out = []
    for n in range(N + 1):
        acc = BilinearMap.zero(d)
        for a in range(n + 1):
            for b in range(n + 1 - a):
                if series[b].is_zero():
                    continue
                for c in range(n + 1 - a - b):
                    e = n - a - b - c
                    term = compose_with_maps(series[b], psi.phi_coeffs[a], phi.phi_coeffs[c],
                                             phi.phi_coeffs[e])
                    acc = acc + term
        out.append(BilinearMap(d, acc.coeffs, tag))
    return out


def conjugate(Phi: FormalIsomorphism, D: FormalDeformation) -> FormalDeformation:
    """``Phi^{-1} o (pi_t, omega_t) o (Phi x Phi)`` truncated at the common order."""
    if (Phi.dim, Phi.order) != (D.dim, D.order):
        raise ValueError("dimension/order mismatch between isomorphism and deformation")
    inv = Phi.inverse()
    pis = _conjugate_series(D.pi_coeffs, Phi, inv, "antisymmetric")
    omegas = _conjugate_series(D.omega_coeffs, Phi, inv, "none")
    return FormalDeformation(D.dim, D.order, pis, omegas)


# ---------------------------------------------------------------------------
# cohomological helpers


def _pair_vector(pi: BilinearMap, omega: BilinearMap) -> list[Fraction]:
    return pair_to_cochain(pi, omega).to_vector()


def is_coboundary_difference(tri: BilinearMap, first: tuple[BilinearMap, BilinearMap],
                             second: tuple[BilinearMap, BilinearMap]) -> LinearMap | None:
    """A ``phi`` with ``second - first = d phi`` (exact solve), or None."""
    m = coboundary_matrix(tri, 1)
    diff = [b - a for a, b in zip(_pair_vector(*first), _pair_vector(*second))]
    sol = m.solve(diff)
    if sol is None:
        return None
    d = tri.dim
    f = MultiCochain.from_vector(d, 0, sol)
    return [[f.evaluate(0, (), (c,))[r] for c in range(d)] for r in range(d)]


@dataclass
class Obstruction:
    """Order ``n`` part that is not a coboundary: its canonical class data."""

    order: int
    class_coordinates: list[Fraction]
    representative: MultiCochain


@dataclass
class TrivializeResult:
    isomorphism: FormalIsomorphism | None
    deformation: FormalDeformation | None
    obstruction: Obstruction | None

    @property
    def success(self) -> bool:
        return self.obstruction is None


def trivialize_step(tri: BilinearMap, D: FormalDeformation, n: int) -> TrivializeResult:
    """Clear order ``n`` by ``Id + phi t^n`` with ``d phi = -(pi_n, omega_n)``."""
    if D.base != tri:
        raise AxiomError("omega_0 is not the given pre-Lie product")
    if not 1 <= n <= D.order:
        raise ValueError(f"order {n} outside 1..{D.order}")
    for i in range(1, n):
        if not (D.pi_coeffs[i].is_zero() and D.omega_coeffs[i].is_zero()):
            raise ValueError(f"order {i} < {n} is not cleared")
    res = residuals_by_order(D)
    bad = [r.order for r in res if not r.vanishes]
    if bad:
        raise AxiomError(f"deformation residual does not vanish at orders {bad}")
    target = _pair_vector(*D.coefficient(n))
    m2 = coboundary_matrix(tri, 1)
    sol = m2.solve([-x for x in target])
    d = tri.dim
    if sol is None:
        d3 = coboundary_matrix(tri, 2)
        q = quotient(m2, d3, cochain_space_dim(d, 2))
        reduced = reduce_modulo(target, q.coboundary_basis, q.coboundary_pivots)
        rep = MultiCochain.from_vector(d, 1, reduced)
        return TrivializeResult(None, None, Obstruction(n, q.coordinates(target), rep))
    f = MultiCochain.from_vector(d, 0, sol)
    phi = [[f.evaluate(0, (), (c,))[r] for c in range(d)] for r in range(d)]
    Phi = FormalIsomorphism.monomial(phi, n, D.order)
    return TrivializeResult(Phi, conjugate(Phi, D), None)


def trivialize(tri: BilinearMap, D: FormalDeformation
               ) -> tuple[FormalIsomorphism, FormalDeformation, Obstruction | None]:
    """Iterate :func:`trivialize_step` over orders ``1..N``; stops at an obstruction."""
    total = FormalIsomorphism.identity(D.dim, D.order)
    current = D
    for n in range(1, D.order + 1):
        if current.pi_coeffs[n].is_zero() and current.omega_coeffs[n].is_zero():
            continue
        step = trivialize_step(tri, current, n)
        if not step.success:
            return total, current, step.obstruction
        total = total.compose(step.isomorphism)
        current = step.deformation
    return total, current, None


# ---------------------------------------------------------------------------
# random generation


def random_linear_map(dim: int, rng: random.Random, lo: int = -2, hi: int = 2,
                      density: float = 0.5) -> LinearMap:
    return [[Fraction(rng.randint(lo, hi)) if rng.random() < density else ZERO
             for _ in range(dim)] for _ in range(dim)]


def random_isomorphism(dim: int, order: int, rng: random.Random, **kw) -> FormalIsomorphism:
    return FormalIsomorphism(dim, order, [identity_map(dim)] +
                             [random_linear_map(dim, rng, **kw) for _ in range(order)])


def _unknown_keys(dim: int):
    pk = [(i, j, k) for i in range(dim) for j in range(i + 1, dim) for k in range(dim)]
    wk = [(i, j, k) for i in range(dim) for j in range(dim) for k in range(dim)]
    return pk, wk


def _from_unknowns(dim: int, u: Sequence[Fraction]) -> tuple[BilinearMap, BilinearMap]:
    pk, wk = _unknown_keys(dim)
    pe = []
    for (i, j, k), x in zip(pk, u[:len(pk)]):
        if x:
            pe += [(i, j, k, x), (j, i, k, -x)]
    we = [(i, j, k, x) for (i, j, k), x in zip(wk, u[len(pk):]) if x]
    return BilinearMap.from_entries(dim, pe, "antisymmetric"), BilinearMap.from_entries(dim, we)


def _with_order(pis, omegas, n, pi_n, om_n):
    pis = list(pis)
    omegas = list(omegas)
    pis[n] = pi_n
    omegas[n] = om_n
    return pis, omegas


def order_system(tri: BilinearMap, pis: Sequence[BilinearMap], omegas: Sequence[BilinearMap],
                 n: int) -> tuple[Matrix, list[Fraction]]:
    """Affine system ``A u = b`` for the order-``n`` unknowns with lower orders fixed.

    The order-``n`` residual is affine in ``(pi_n, omega_n)``; columns are
    ``R(e_k) - R(0)``.
    """
    d = tri.dim
    pk, wk = _unknown_keys(d)
    size = len(pk) + len(wk)
    zero_pi, zero_om = BilinearMap.zero(d, "antisymmetric"), BilinearMap.zero(d)
    base_p, base_o = _with_order(pis, omegas, n, zero_pi, zero_om)
    r0 = _order_residual(base_p, base_o, n).flat()
    cols = []
    for k in range(size):
        u = [ZERO] * size
        u[k] = Fraction(1)
        p, o = _from_unknowns(d, u)
        rk = _order_residual(*_with_order(pis, omegas, n, p, o), n).flat()
        cols.append([a - b for a, b in zip(rk, r0)])
    return Matrix.from_columns(cols, len(r0)), [-x for x in r0]


def random_deformation(tri: BilinearMap, order: int, rng: random.Random, attempts: int = 50,
                       lo: int = -2, hi: int = 2, density: float = 0.5) -> FormalDeformation:
    """A valid deformation built order by order from random solutions of the affine systems.

    Random choices may run into an obstruction at a later order; the whole
    construction is then restarted (up to ``attempts`` times) before falling back
    to the undeformed deformation.
    """
    d = tri.dim
    for _ in range(attempts):
        base = FormalDeformation.undeformed(tri, order)
        pis, omegas = list(base.pi_coeffs), list(base.omega_coeffs)
        ok = True
        for n in range(1, order + 1):
            a, b = order_system(tri, pis, omegas, n)
            sol = a.solve(b)
            if sol is None:
                ok = False
                break
            kernel = a.kernel()
            u = list(sol)
            for v in kernel:
                if rng.random() < density:
                    c = rng.randint(lo, hi)
                    u = [x + c * y for x, y in zip(u, v)]
            pis[n], omegas[n] = _from_unknowns(d, u)
        if ok:
            D = FormalDeformation(d, order, pis, omegas)
            if is_valid(D):
                return D
    return FormalDeformation.undeformed(tri, order)
