"""Grafting, deformed grafting and the decoration-raising operators.

All operators return plain ``{tree: int}`` dictionaries internally (grafting
only produces integer coefficients); :class:`TreeVector` wraps them for the
public API. Results are memoised per :class:`Rules`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from ..exact import mi_below, multi_binom
from .tree import XI, DecoratedTree, TreeError, canonicalize, sort_key

TermDict = dict


@dataclass(frozen=True)
class Rules:
    """Conventions of the tree calculus; the non-default values are deliberate breakages.

    - ``uparrow_skips_xi``: raising operators vanish on noise leaves.
    - ``graft_skips_xi``: noise leaves are never grafting targets.
    - ``edge_cutoff``: a term whose edge label ``a - ell`` is negative vanishes
      (when False the label is clamped at zero instead).
    - ``binomial``: deformed-grafting terms carry ``(n_v choose ell)`` (when
      False every admissible ``ell`` gets weight one).
    """

    uparrow_skips_xi: bool = True
    graft_skips_xi: bool = True
    edge_cutoff: bool = True
    binomial: bool = True

    @property
    def faithful(self) -> bool:
        return self == Rules()


DEFAULT_RULES = Rules()


def _add(acc: dict, key, c) -> None:
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class Memo(dict):
    """A cache that empties itself once it holds ``limit`` entries, bounding memory in long sweeps."""

    __slots__ = ("limit",)

    def __init__(self, limit: int = 50_000):
        super().__init__()
        self.limit = limit

    def put(self, key, value):
        if len(self) >= self.limit:
            self.clear()
        self[key] = value
        return value


def _shift(m, delta, sign=1):
    return tuple(x + sign * y for x, y in zip(m, delta))


class GraftEngine:
    """Memoised grafting operators under a fixed set of :class:`Rules`."""

    _engines: dict[Rules, GraftEngine] = {}

    def __init__(self, rules: Rules = DEFAULT_RULES):
        self.rules = rules
        self.check = rules.faithful
        self._graft = Memo()
        self._dgraft = Memo()
        self._strata = Memo()
        self._up = Memo()
        self._plans: dict = {}

    @classmethod
    def for_rules(cls, rules: Rules = DEFAULT_RULES) -> GraftEngine:
        eng = cls._engines.get(rules)
        if eng is None:
            eng = cls._engines[rules] = cls(rules)
        return eng

    def _make(self, dec, children) -> DecoratedTree:
        return DecoratedTree._intern(dec, children, self.check)

    def _targets(self, tau: DecoratedTree) -> Iterator[tuple[int, object, DecoratedTree]]:
        skip = self.rules.graft_skips_xi
        for pos, (e, c) in enumerate(tau.children):
            if e is XI and skip:
                continue
            yield pos, e, c

    def _replace(self, tau: DecoratedTree, pos: int, edge, new_child) -> DecoratedTree:
        kids = list(tau.children)
        kids[pos] = (edge, new_child)
        return self._make(tau.dec, tuple(kids))

    # -- grafting -----------------------------------------------------------

    def graft(self, sigma: DecoratedTree, a: tuple, tau: DecoratedTree) -> TermDict:
        """``sigma ->^a tau``: one term per admissible node of ``tau``."""
        key = (sigma, a, tau)
        hit = self._graft.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        _add(out, self._make(tau.dec, tau.children + ((a, sigma),)), 1)
        for pos, e, c in self._targets(tau):
            for t2, k in self.graft(sigma, a, c).items():
                _add(out, self._replace(tau, pos, e, t2), k)
        self._graft.put(key, out)
        return out

    def graft_at(self, sigma: DecoratedTree, a: tuple, tau: DecoratedTree, v: int
                 ) -> DecoratedTree:
        """Graft at the node with preorder id ``v``."""
        for node, _, xi_leaf in tau.nodes():
            if node == v:
                if xi_leaf and self.rules.graft_skips_xi:
                    raise TreeError("grafting onto a noise leaf is forbidden")
                break
        else:
            raise IndexError(f"node {v} out of range")
        return self._rebuild_at(tau, v, lambda t: self._make(t.dec, t.children + ((a, sigma),)))

    def _rebuild_at(self, tau: DecoratedTree, v: int, fn) -> DecoratedTree | None:
        """Apply ``fn`` to the subtree at preorder id ``v`` and rebuild the path."""
        if v == 0:
            return fn(tau)
        offset = 1
        kids = tau.ordered_children
        for pos, (e, c) in enumerate(kids):
            if v < offset + c.n_nodes:
                new = self._rebuild_at(c, v - offset, fn)
                if new is None:
                    return None
                rebuilt = list(kids)
                rebuilt[pos] = (e, new)
                return self._make(tau.dec, tuple(rebuilt))
            offset += c.n_nodes
        raise IndexError(f"node {v} out of range")

    # -- raising ------------------------------------------------------------

    def uparrow(self, tau: DecoratedTree, i: int) -> TermDict:
        """``up^i tau``: add ``e_i`` at every node that is not a noise leaf."""
        key = (tau, i)
        hit = self._up.get(key)
        if hit is not None:
            return hit
        unit = tuple(int(j == i) for j in range(tau.width))
        out: dict = {}
        _add(out, self._make(_shift(tau.dec, unit), tau.children), 1)
        for pos, (e, c) in enumerate(tau.children):
            if e is XI and self.rules.uparrow_skips_xi:
                continue
            for t2, k in self.uparrow(c, i).items():
                _add(out, self._replace(tau, pos, e, t2), k)
        self._up.put(key, out)
        return out

    def uparrow_at(self, tau: DecoratedTree, v: int, delta: Sequence[int]) -> TermDict:
        """Shift the decoration of node ``v`` by ``delta``; zero if it turns negative."""
        def fn(t):
            new = _shift(t.dec, delta)
            if min(new, default=0) < 0:
                return None
            return self._make(new, t.children)

        t = self._rebuild_at(tau, v, fn)
        return {} if t is None else {t: 1}

    # -- deformed grafting ----------------------------------------------------

    def _root_plan(self, n: tuple, a: tuple) -> list[tuple[int, int, tuple, tuple]]:
        """``(|ell|, weight, n - ell, edge)`` for every surviving ``ell <= n``."""
        key = (n, a)
        plan = self._plans.get(key)
        if plan is not None:
            return plan
        plan = []
        for ell in mi_below(n):
            edge = tuple(x - y for x, y in zip(a, ell))
            if min(edge, default=0) < 0:
                if self.rules.edge_cutoff:
                    continue
                edge = tuple(max(x, 0) for x in edge)
            w = multi_binom(n, ell) if self.rules.binomial else 1
            if w:
                plan.append((sum(ell), w, tuple(x - y for x, y in zip(n, ell)), edge))
        self._plans[key] = plan
        return plan

    def _root_terms(self, sigma: DecoratedTree, a: tuple, tau: DecoratedTree
                    ) -> Iterator[tuple[int, int, DecoratedTree]]:
        """``(|ell|, weight, tree)`` for grafting at the root of ``tau``."""
        for size, w, dec, edge in self._root_plan(tau.dec, a):
            yield size, w, self._make(dec, tau.children + ((edge, sigma),))

    def deformed_graft(self, sigma: DecoratedTree, a: tuple, tau: DecoratedTree) -> TermDict:
        """Deformed grafting: at each node ``v``, sum over ``ell`` of
        ``(n_v choose ell) sigma ->^{a-ell}_v (up_v^{-ell} tau)``."""
        key = (sigma, a, tau)
        hit = self._dgraft.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        for _, w, t in self._root_terms(sigma, a, tau):
            _add(out, t, w)
        for pos, e, c in self._targets(tau):
            for t2, k in self.deformed_graft(sigma, a, c).items():
                _add(out, self._replace(tau, pos, e, t2), k)
        self._dgraft.put(key, out)
        return out

    def deformed_graft_strata(self, sigma: DecoratedTree, a: tuple, tau: DecoratedTree
                              ) -> dict[int, TermDict]:
        """Deformed grafting split by the length ``|ell|`` of the transferred decoration."""
        key = (sigma, a, tau)
        hit = self._strata.get(key)
        if hit is not None:
            return hit
        out: dict[int, dict] = {}
        for size, w, t in self._root_terms(sigma, a, tau):
            _add(out.setdefault(size, {}), t, w)
        for pos, e, c in self._targets(tau):
            for k, terms in self.deformed_graft_strata(sigma, a, c).items():
                bucket = out.setdefault(k, {})
                for t2, w in terms.items():
                    _add(bucket, self._replace(tau, pos, e, t2), w)
        out = {k: v for k, v in out.items() if v}
        self._strata.put(key, out)
        return out


# ---------------------------------------------------------------------------


class TreeVector:
    """Finite linear combination with exact coefficients and no stored zeros."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | Iterable[tuple[object, object]] | None = None):
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, dict) else terms
            for k, c in items:
                _add(acc, k, _exact(c))
        self.terms = acc

    @classmethod
    def single(cls, item, coeff=1) -> TreeVector:
        return cls({item: coeff})

    def __add__(self, other: TreeVector) -> TreeVector:
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add(out, k, c)
        return _raw(out)

    def __sub__(self, other: TreeVector) -> TreeVector:
        return self + other.scale(-1)

    def __neg__(self) -> TreeVector:
        return self.scale(-1)

    def scale(self, c) -> TreeVector:
        c = _exact(c)
        if not c:
            return TreeVector()
        return _raw({k: v * c for k, v in self.terms.items()})

    def __rmul__(self, c) -> TreeVector:
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if isinstance(other, TreeVector):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.sorted_items())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, item):
        return self.terms.get(item, 0)

    def sorted_items(self) -> list[tuple[object, object]]:
        return sorted(self.terms.items(), key=lambda kv: _item_key(kv[0]))

    def map(self, fn) -> TreeVector:
        """Apply a linear map given on basis items (returning TreeVectors or dicts)."""
        out: dict = {}
        for k, c in self.terms.items():
            img = fn(k)
            items = img.terms if isinstance(img, TreeVector) else img
            for k2, c2 in items.items():
                _add(out, k2, c * c2)
        return _raw(out)

    def __repr__(self) -> str:
        return "TreeVector(" + ", ".join(f"{c}*{_item_key(k)[1]}" for k, c in
                                         self.sorted_items()) + ")"


def _exact(c):
    if isinstance(c, (int, Fraction)) and not isinstance(c, bool):
        return c
    if isinstance(c, float):
        raise TypeError("floating-point coefficients are not exact")
    return Fraction(c)


def _raw(d: dict) -> TreeVector:
    v = TreeVector.__new__(TreeVector)
    v.terms = d
    return v


def _item_key(item):
    if isinstance(item, DecoratedTree):
        return sort_key(item)
    return item.sort_key()


def _as_tree_terms(x) -> dict:
    if isinstance(x, TreeVector):
        return x.terms
    if isinstance(x, dict):
        return x
    return {canonicalize(x): 1}


def _bilinear(op, sigma, tau) -> TreeVector:
    out: dict = {}
    for s, cs in _as_tree_terms(sigma).items():
        for t, ct in _as_tree_terms(tau).items():
            for r, k in op(s, t).items():
                _add(out, r, cs * ct * k)
    return _raw(out)


# -- module-level API on the faithful conventions ----------------------------


def engine(rules: Rules = DEFAULT_RULES) -> GraftEngine:
    return GraftEngine.for_rules(rules)


def _label(a: Sequence[int]) -> tuple:
    a = tuple(a)
    if any(x < 0 for x in a):
        raise TreeError("negative edge label")
    return a


def _same_width(a: tuple, *trees: DecoratedTree) -> None:
    if any(t.width != len(a) for t in trees):
        raise TreeError("edge label and tree decorations differ in length")


def graft(sigma, a: Sequence[int], tau, rules: Rules = DEFAULT_RULES) -> TreeVector:
    eng = engine(rules)
    a = _label(a)

    def op(s, t):
        _same_width(a, s, t)
        return eng.graft(s, a, t)

    return _bilinear(op, sigma, tau)


def graft_at(sigma, a: Sequence[int], tau, v: int, rules: Rules = DEFAULT_RULES
             ) -> DecoratedTree:
    a, sigma, tau = _label(a), canonicalize(sigma), canonicalize(tau)
    _same_width(a, sigma, tau)
    return engine(rules).graft_at(sigma, a, tau, v)


def deformed_graft(sigma, a: Sequence[int], tau, rules: Rules = DEFAULT_RULES) -> TreeVector:
    eng = engine(rules)
    a = _label(a)

    def op(s, t):
        _same_width(a, s, t)
        return eng.deformed_graft(s, a, t)

    return _bilinear(op, sigma, tau)


def deformed_graft_stratum(sigma, a: Sequence[int], tau, k: int,
                           rules: Rules = DEFAULT_RULES) -> TreeVector:
    eng = engine(rules)
    a = _label(a)

    def op(s, t):
        _same_width(a, s, t)
        return eng.deformed_graft_strata(s, a, t).get(k, {})

    return _bilinear(op, sigma, tau)


def uparrow_i(tau, i: int, rules: Rules = DEFAULT_RULES) -> TreeVector:
    eng = engine(rules)

    def op(t):
        if not 0 <= i < t.width:
            raise IndexError(f"coordinate {i} outside 0..{t.width - 1}")
        return eng.uparrow(t, i)

    return TreeVector(_as_tree_terms(tau)).map(op)


def uparrow_at(tau, v: int, delta: Sequence[int], rules: Rules = DEFAULT_RULES) -> TreeVector:
    tau, delta = canonicalize(tau), tuple(delta)
    _same_width(delta, tau)
    return _raw(dict(engine(rules).uparrow_at(tau, v, delta)))
