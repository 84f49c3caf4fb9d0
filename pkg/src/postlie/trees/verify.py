"""Exhaustive axiom sweeps over a bounded enumeration of basis elements.

Every identity is checked as an exact equality of finite linear combinations;
only the set of triples is bounded. The post-Lie identities are antisymmetric in
a pair of arguments once the bracket is antisymmetric (checked on all pairs
first), so each unordered pair is visited once.

The one-parameter family is swept once with polynomial coefficients in ``t``:
keys are ``(element, power)``. The coefficient of ``t^n`` in each defect is the
order-``n`` deformation residual, and evaluating the defect polynomial at a
sample ``t`` gives the defect of the products specialised at that ``t``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ..exact import as_rational
from .grafting import DEFAULT_RULES, Memo, Rules, _add
from .tree import XI, DecoratedTree, TreeError, sort_key
from .vspace import BasisElement, Planted, Poly, VProducts, products

Product = Callable[[BasisElement, BasisElement], dict]


# ---------------------------------------------------------------------------
# enumeration


def enumerate_trees(width: int, max_edges: int, max_decoration: int) -> list[DecoratedTree]:
    """All valid trees with at most ``max_edges`` edges and entries ``<= max_decoration``."""
    decs = list(itertools.product(range(max_decoration + 1), repeat=width))
    by_edges: dict[int, list[DecoratedTree]] = {}
    unit = DecoratedTree.unit(width)
    for e in range(max_edges + 1):
        # child options that use exactly k edges: noise leaf (k = 1) or I_a(t) with |t| = k - 1
        options: dict[int, list[tuple]] = {}
        for k in range(1, e + 1):
            opts = [("I", a, t) for t in by_edges[k - 1] for a in decs]
            if k == 1:
                opts.insert(0, ("Xi", None, unit))
            options[k] = opts
        flat = [(k, o) for k in sorted(options) for o in options[k]]
        found = []

        def rec(start, budget, chosen):
            if budget == 0:
                yield list(chosen)
                return
            for idx in range(start, len(flat)):
                k, o = flat[idx]
                if k > budget:
                    continue
                if o[0] == "Xi" and any(c[0] == "Xi" for c in chosen):
                    continue
                chosen.append(o)
                # multisets: the same option may repeat except the noise leaf
                yield from rec(idx, budget - k, chosen)
                chosen.pop()

        for combo in rec(0, e, []):
            kids = [(XI if tag == "Xi" else a, t) for tag, a, t in combo]
            for dec in decs:
                found.append(DecoratedTree.make(dec, kids))
        by_edges[e] = sorted(set(found), key=sort_key)
    return sorted((t for ts in by_edges.values() for t in ts), key=sort_key)


def enumerate_basis(d: int, max_edges: int, max_decoration: int, include_x: bool = True
                    ) -> list[BasisElement]:
    """``X_0..X_d`` then planted ``I_a(tau)`` with at most ``max_edges`` edges in total
    (the planting edge included), ordered by edge count and canonical encoding."""
    width = d + 1
    if max_edges < 1:
        return [Poly(i, width) for i in range(width)] if include_x else []
    decs = list(itertools.product(range(max_decoration + 1), repeat=width))
    planted = [Planted(a, t) for t in enumerate_trees(width, max_edges - 1, max_decoration)
               for a in decs]
    planted.sort(key=lambda p: p.sort_key())
    xs = [Poly(i, width) for i in range(width)] if include_x else []
    return xs + planted


# ---------------------------------------------------------------------------
# sweep machinery


@dataclass
class SweepResult:
    """Count of checked tuples and the first ``limit`` failures in sweep order.

    ``positions`` holds the basis indices of each witness; it orders witnesses
    when results computed on disjoint rows are merged.
    """

    name: str
    checked: int = 0
    witnesses: list = field(default_factory=list)
    positions: list = field(default_factory=list, repr=False)

    @property
    def holds(self) -> bool:
        return not self.witnesses

    def record(self, triple, defect, limit: int, position: tuple = ()) -> None:
        if len(self.witnesses) < limit:
            self.witnesses.append((triple, defect))
            self.positions.append(position)

    @classmethod
    def merge(cls, parts: Sequence[SweepResult], limit: int) -> SweepResult:
        out = cls(parts[0].name, sum(p.checked for p in parts))
        found = sorted((pos, w) for p in parts for pos, w in zip(p.positions, p.witnesses))
        for pos, w in found[:limit]:
            out.witnesses.append(w)
            out.positions.append(pos)
        return out


def _mul_vec(prod: Product, x, vec: dict, graded: bool, left: bool) -> dict:
    """``x * vec`` (left) or ``vec * x`` (right) for a basis element ``x``."""
    out: dict = {}
    if graded:
        for (w, p), c in vec.items():
            for (r, q), k in (prod(x, w) if left else prod(w, x)).items():
                _add(out, (r, p + q), c * k)
    else:
        for w, c in vec.items():
            for r, k in (prod(x, w) if left else prod(w, x)).items():
                _add(out, r, c * k)
    return out


def _axpy(acc: dict, vec: dict, c) -> None:
    for k, v in vec.items():
        _add(acc, k, c * v)


def check_antisymmetric(bracket: Product, basis: Sequence[BasisElement]) -> SweepResult:
    res = SweepResult("bracket_antisymmetry")
    for x in basis:
        for y in basis:
            res.checked += 1
            s = dict(bracket(x, y))
            _axpy(s, bracket(y, x), 1)
            if s:
                res.record((x, y), s, 5)
    return res


def sweep_post_lie(rho: Product, bracket: Product | None, basis: Sequence[BasisElement],
                   graded: bool = False, stop_early: bool = False, limit: int = 5,
                   check_jacobi: bool = True, rows: Iterable[int] | None = None
                   ) -> dict[str, SweepResult]:
    """Post-1, Post-2 (and Jacobi) over all triples of ``basis``.

    With ``bracket=None`` only the second identity is swept; with a zero bracket
    it is the pre-Lie identity. ``rows`` restricts the outermost index (the
    union over a partition of ``range(len(basis))`` is the full sweep).
    """
    n = len(basis)
    post1, post2, jac = SweepResult("post1"), SweepResult("post2"), SweepResult("jacobi")
    prod_memo: dict = {}

    def P(x, y):
        k = (x, y)
        v = prod_memo.get(k)
        if v is None:
            v = prod_memo[k] = rho(x, y)
        return v

    def br_vec(vec: dict, z, left: bool) -> dict:
        return _mul_vec(bracket, z, vec, graded, left)

    for ix in (range(n) if rows is None else rows):
        x = basis[ix]
        for iy in range(ix, n):
            y = basis[iy]
            u = dict(P(x, y))
            _axpy(u, P(y, x), -1)
            if bracket is not None:
                _axpy(u, bracket(x, y), 1)
            for iz, z in enumerate(basis):
                post2.checked += 1
                defect = _mul_vec(rho, z, u, graded, left=False)
                _axpy(defect, _mul_vec(rho, x, P(y, z), graded, left=True), -1)
                _axpy(defect, _mul_vec(rho, y, P(x, z), graded, left=True), 1)
                if defect:
                    post2.record((x, y, z), defect, limit, (ix, iy, iz))
                    if stop_early:
                        return {"post2": post2}
            if bracket is None:
                continue
            # Post-1 on (z, x, y): z * [x, y] = [z * x, y] + [x, z * y]; antisymmetric in (x, y)
            bxy = bracket(x, y)
            for iz, z in enumerate(basis):
                post1.checked += 1
                defect = _mul_vec(rho, z, bxy, graded, left=True)
                _axpy(defect, br_vec(P(z, x), y, left=False), -1)
                _axpy(defect, br_vec(P(z, y), x, left=True), -1)
                if defect:
                    post1.record((z, x, y), defect, limit, (ix, iy, iz))
                    if stop_early:
                        return {"post1": post1, "post2": post2}
            if check_jacobi:
                for iz in range(iy, n):
                    z = basis[iz]
                    jac.checked += 1
                    defect: dict = {}
                    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
                        _axpy(defect, br_vec(bracket(a, b), c, left=False), 1)
                    if defect:
                        jac.record((x, y, z), defect, limit, (ix, iy, iz))
    out = {"post2": post2}
    if bracket is not None:
        out["post1"] = post1
        if check_jacobi:
            out["jacobi"] = jac
    return out


# ---------------------------------------------------------------------------
# graded (polynomial in t) products


class GradedFamily:
    """``omega_t = sum omega_i t^i`` and ``pi_t = pi t`` with ``(element, power)`` keys."""

    def __init__(self, prods: VProducts):
        self.p = prods
        self._memo = Memo()

    def omega_t(self, x, y) -> dict:
        k = (x, y)
        hit = self._memo.get(k)
        if hit is not None:
            return hit
        out: dict = {}
        if type(x) is Poly or type(y) is Poly:
            for r, c in self.p.triangle(x, y).items():
                out[(r, 0)] = c
        else:
            for i, terms in self.p.omega_strata(x, y).items():
                for r, c in terms.items():
                    out[(r, i)] = c
        return self._memo.put(k, out)

    def pi_t(self, x, y) -> dict:
        return {(r, 1): c for r, c in self.p.bracket1(x, y).items()}


def split_by_power(defect: dict) -> dict[int, dict]:
    out: dict[int, dict] = {}
    for (r, p), c in defect.items():
        out.setdefault(p, {})[r] = c
    return out


def evaluate_at(defect: dict, t: Fraction) -> dict:
    out: dict = {}
    for (r, p), c in defect.items():
        _add(out, r, c * t ** p)
    return out


# ---------------------------------------------------------------------------
# reconstruction identities


def check_reconstruction(basis: Sequence[BasisElement], prods: VProducts) -> dict[str, SweepResult]:
    """``hat = triangle + sum_i omega_i`` and ``bracket1 = bracket0 + pi`` on all pairs."""
    hat = SweepResult("hat_equals_triangle_plus_omegas")
    br = SweepResult("bracket1_equals_bracket0_plus_pi")
    for x in basis:
        for y in basis:
            hat.checked += 1
            br.checked += 1
            lhs = dict(prods.hat_triangle(x, y))
            _axpy(lhs, prods.triangle(x, y), -1)
            strata = prods.omega_strata(x, y)
            for i, terms in strata.items():
                if i >= 1:
                    _axpy(lhs, terms, -1)
            if lhs:
                hat.record((x, y), lhs, 5)
            # pi is the order-one bracket component
            diff = dict(prods.bracket1(x, y))
            _axpy(diff, prods.bracket0(x, y), -1)
            _axpy(diff, _pi(prods, x, y), -1)
            if diff:
                br.record((x, y), diff, 5)
    return {"reconstruct_hat": hat, "reconstruct_bracket": br}


def _pi(prods: VProducts, x, y) -> dict:
    """``pi`` from its case table, written independently of ``bracket1``."""
    if type(x) is Planted and type(y) is Poly and x.a[y.i] > 0:
        return {Planted(tuple(v - (j == y.i) for j, v in enumerate(x.a)), x.tree): 1}
    if type(x) is Poly and type(y) is Planted and y.a[x.i] > 0:
        return {Planted(tuple(v - (j == x.i) for j, v in enumerate(y.a)), y.tree): -1}
    return {}


# ---------------------------------------------------------------------------
# top-level report


@dataclass
class TreeVerifyConfig:
    d: int = 0
    max_edges: int = 2
    max_decoration: int = 2
    scaling: tuple[int, ...] | None = None
    t_samples: tuple[Fraction, ...] = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-1),
                                       Fraction(3))
    max_order: int = 4
    modes: tuple[str, ...] = ("pre_lie", "post_lie", "t_family", "reconstruction",
                              "invariants")
    rules: Rules = DEFAULT_RULES


@dataclass
class TreeAxiomReport:
    config: TreeVerifyConfig
    basis_size: int
    results: dict[str, SweepResult]

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.results.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.results.items() if not r.holds]

    def summary(self) -> dict[str, dict]:
        return {k: {"checked": r.checked, "holds": r.holds} for k, r in self.results.items()}


def _sweep_kind(kind: str, basis, prods: VProducts, stop_early: bool, limit: int,
                rows=None) -> dict[str, SweepResult]:
    if kind == "pre_lie":
        return sweep_post_lie(prods.triangle, None, basis, stop_early=stop_early, limit=limit,
                              rows=rows)
    if kind == "post_lie":
        return sweep_post_lie(prods.hat_triangle, prods.bracket1, basis, stop_early=stop_early,
                              limit=limit, rows=rows)
    fam = GradedFamily(prods)
    return sweep_post_lie(fam.omega_t, fam.pi_t, basis, graded=True, stop_early=stop_early,
                          limit=limit, rows=rows)


def _worker(job: tuple) -> dict[str, SweepResult]:
    kind, d, max_edges, max_decoration, rules, rows, limit = job
    basis = enumerate_basis(d, max_edges, max_decoration)
    return _sweep_kind(kind, basis, products(rules), False, limit, rows)


def _parallel_sweep(kind: str, config: TreeVerifyConfig, n: int, threads: int, limit: int
                    ) -> dict[str, SweepResult]:
    """Rows ``ix = k mod threads`` go to worker ``k``; witnesses are merged in sweep order."""
    import multiprocessing
    from concurrent.futures import ProcessPoolExecutor

    jobs = [(kind, config.d, config.max_edges, config.max_decoration, config.rules,
             list(range(k, n, threads)), limit) for k in range(threads)]
    ctx = multiprocessing.get_context("fork" if "fork" in multiprocessing.get_all_start_methods()
                                      else None)
    with ProcessPoolExecutor(max_workers=threads, mp_context=ctx) as pool:
        parts = list(pool.map(_worker, jobs))
    return {name: SweepResult.merge([p[name] for p in parts], limit) for name in parts[0]}


def verify_axioms_truncated(config: TreeVerifyConfig, stop_early: bool = False,
                            threads: int = 1) -> TreeAxiomReport:
    """Run the selected sweeps; ``threads > 1`` splits the triple sweeps over processes
    without changing the report."""
    basis = enumerate_basis(config.d, config.max_edges, config.max_decoration)
    prods = products(config.rules)
    results: dict[str, SweepResult] = {}

    def sweep(kind: str, limit: int) -> dict[str, SweepResult]:
        if threads > 1 and not stop_early:
            return _parallel_sweep(kind, config, len(basis), threads, limit)
        return _sweep_kind(kind, basis, prods, stop_early, limit)

    if "invariants" in config.modes:
        results["invariants.bracket_antisymmetry"] = check_antisymmetric(prods.bracket1, basis)
        results["invariants.tree_validity"] = _tree_validity(basis, prods)
    for kind in ("pre_lie", "post_lie"):
        if kind in config.modes:
            for k, v in sweep(kind, 5).items():
                results[f"{kind}.{k}"] = v
    if "reconstruction" in config.modes:
        results.update(check_reconstruction(basis, prods))
    if "t_family" in config.modes:
        results.update(_t_family_results(sweep("t_family", 10 ** 9), config))
    return TreeAxiomReport(config, len(basis), results)


def _tree_validity(basis, prods: VProducts) -> SweepResult:
    """Every product of two enumerated elements is a valid tree combination."""
    res = SweepResult("tree_validity")
    for x in basis:
        for y in basis:
            for fn in (prods.hat_triangle, prods.triangle):
                for r in fn(x, y):
                    res.checked += 1
                    try:
                        if not r.tree.validated:
                            r.tree._validate()
                    except TreeError as exc:
                        res.record((x, y), str(exc), 5)
    return res


def _t_family_results(out: dict[str, SweepResult], config: TreeVerifyConfig
                      ) -> dict[str, SweepResult]:
    """Split the polynomial defects by power of ``t`` and evaluate them at the samples."""
    results: dict[str, SweepResult] = {}
    # order-n residuals: coefficient of t^n in each identity's defect
    names = {"jacobi": "order.jacobi", "post1": "order.post1", "post2": "order.post2"}
    for key, name in names.items():
        src = out.get(key)
        if src is None:
            continue
        for n in range(config.max_order + 1):
            r = SweepResult(f"{name}[{n}]", checked=src.checked)
            for triple, defect in src.witnesses:
                part = split_by_power(defect).get(n)
                if part:
                    r.record(triple, part, 5)
            results[f"{name}[{n}]"] = r
        for t in config.t_samples:
            t = as_rational(t)
            r = SweepResult(f"t={t}.{key}", checked=src.checked)
            for triple, defect in src.witnesses:
                ev = evaluate_at(defect, t)
                if ev:
                    r.record(triple, ev, 5)
            results[f"t_family[t={t}].{key}"] = r
    return results


MUTATIONS: dict[str, Rules] = {
    "uparrow_raises_noise_leaves": Rules(uparrow_skips_xi=False),
    "graft_onto_noise_leaves": Rules(graft_skips_xi=False),
    "clamp_negative_edge": Rules(edge_cutoff=False),
    "unit_binomial": Rules(binomial=False),
}


def mutation_report(config: TreeVerifyConfig) -> dict[str, TreeAxiomReport]:
    """Run the post-Lie and invariant sweeps under each deliberate breakage."""
    out = {}
    for name, rules in MUTATIONS.items():
        cfg = TreeVerifyConfig(config.d, config.max_edges, config.max_decoration,
                               config.scaling, config.t_samples, config.max_order,
                               ("invariants", "post_lie"), rules)
        out[name] = verify_axioms_truncated(cfg, stop_early=True)
    return out
