"""The space spanned by planted trees ``I_a(tau)`` and the monomials ``X_i``, with its products.

Products are given on basis elements and extended bilinearly. Besides the
undeformed pre-Lie product and the post-Lie pair (bracket, deformed product), the
module exposes the deformation components ``pi`` and ``omega_i`` and the
one-parameter family in ``t``.
"""

from __future__ import annotations

from typing import Sequence

from ..exact import as_rational
from .grafting import DEFAULT_RULES, GraftEngine, Memo, Rules, TreeVector, _add, _raw, engine
from .tree import DecoratedTree, TreeSchemaError, canonicalize, planted_tree, scaled_norm
from .tree import grading as tree_grading


def _mi(m) -> str:
    return "[" + ",".join(str(x) for x in m) + "]"


class BasisElement:
    __slots__ = ()

    def sort_key(self) -> tuple:
        raise NotImplementedError


class Planted(BasisElement):
    """``I_a(tau)``; interned so equal elements are identical."""

    __slots__ = ("a", "tree", "_key")
    _table: dict = {}

    def __new__(cls, a: Sequence[int], tree: DecoratedTree):
        a = tuple(a)
        if len(a) != tree.width:
            raise ValueError("edge label and tree decorations differ in length")
        if min(a, default=0) < 0:
            raise ValueError("negative edge label")
        k = (a, tree)
        hit = cls._table.get(k)
        if hit is None:
            hit = object.__new__(cls)
            hit.a = a
            hit.tree = tree
            hit._key = None
            cls._table[k] = hit
        return hit

    def __reduce__(self):
        return (Planted, (self.a, self.tree))

    def sort_key(self) -> tuple:
        if self._key is None:
            self._key = (1 + self.tree.n_edges, '{"planted":{"edge":' + _mi(self.a)
                         + ',"tree":' + self.tree.key + "}}")
        return self._key

    @property
    def width(self) -> int:
        return len(self.a)

    def as_tree(self) -> DecoratedTree:
        return planted_tree(self.a, self.tree)

    def to_json(self) -> dict:
        return {"planted": {"edge": list(self.a), "tree": self.tree.to_json()}}

    def __repr__(self) -> str:
        return f"I_{list(self.a)}({self.tree.key})"


class Poly(BasisElement):
    """The monomial ``X_i``."""

    __slots__ = ("i", "width")
    _table: dict = {}

    def __new__(cls, i: int, width: int):
        if not 0 <= i < width:
            raise ValueError(f"coordinate {i} outside 0..{width - 1}")
        hit = cls._table.get((i, width))
        if hit is None:
            hit = object.__new__(cls)
            hit.i = i
            hit.width = width
            cls._table[(i, width)] = hit
        return hit

    def __reduce__(self):
        return (Poly, (self.i, self.width))

    def sort_key(self) -> tuple:
        return (0, f'{{"X":{self.i}}}')

    def to_json(self) -> dict:
        return {"X": self.i}

    def __repr__(self) -> str:
        return f"X_{self.i}"


def basis_from_json(obj, width: int | None = None, path: str = "$") -> BasisElement:
    if isinstance(obj, dict) and set(obj) == {"X"}:
        i = obj["X"]
        if not isinstance(i, int) or isinstance(i, bool) or width is None or not 0 <= i < width:
            raise TreeSchemaError(path + ".X", "expected a coordinate index in range")
        return Poly(i, width)
    if isinstance(obj, dict) and set(obj) == {"planted"}:
        p = obj["planted"]
        if not isinstance(p, dict) or set(p) != {"edge", "tree"}:
            raise TreeSchemaError(path + ".planted", "expected keys 'edge' and 'tree'")
        a = p["edge"]
        if not isinstance(a, list) or not all(isinstance(x, int) and x >= 0 for x in a):
            raise TreeSchemaError(path + ".planted.edge", "expected a list of naturals")
        t = canonicalize(p["tree"])
        if len(a) != t.width:
            raise TreeSchemaError(path + ".planted.edge", "length differs from tree decorations")
        return Planted(a, t)
    raise TreeSchemaError(path, 'expected {"X": i} or {"planted": {...}}')


# ---------------------------------------------------------------------------
# products on basis elements (plain dicts: element -> coefficient)

MODES = ("triangle", "hat_triangle", "bracket0", "bracket1")


def _planted_terms(b: tuple, terms: dict) -> dict:
    out: dict = {}
    for t, c in terms.items():
        _add(out, Planted(b, t), c)
    return out


class VProducts:
    """Basis-level products under fixed :class:`Rules`, memoised."""

    _cache: dict[Rules, VProducts] = {}

    def __init__(self, rules: Rules = DEFAULT_RULES):
        self.rules = rules
        self.eng: GraftEngine = engine(rules)
        self._tri = Memo()
        self._hat = Memo()
        self._strata = Memo()
        self._up = Memo()

    @classmethod
    def for_rules(cls, rules: Rules = DEFAULT_RULES) -> VProducts:
        p = cls._cache.get(rules)
        if p is None:
            p = cls._cache[rules] = cls(rules)
        return p

    def _raise(self, x: Poly, y: Planted) -> dict:
        k = (x, y)
        hit = self._up.get(k)
        if hit is None:
            hit = self._up.put(k, _planted_terms(y.a, self.eng.uparrow(y.tree, x.i)))
        return hit

    def triangle(self, x: BasisElement, y: BasisElement) -> dict:
        if type(y) is Poly:
            return {}
        if type(x) is Poly:
            return self._raise(x, y)
        k = (x, y)
        hit = self._tri.get(k)
        if hit is None:
            hit = self._tri.put(k, _planted_terms(y.a, self.eng.graft(x.tree, x.a, y.tree)))
        return hit

    def hat_triangle(self, x: BasisElement, y: BasisElement) -> dict:
        if type(y) is Poly:
            return {}
        if type(x) is Poly:
            return self._raise(x, y)
        k = (x, y)
        hit = self._hat.get(k)
        if hit is None:
            hit = self._hat.put(k, _planted_terms(y.a, self.eng.deformed_graft(x.tree, x.a, y.tree)))
        return hit

    def omega_strata(self, x: BasisElement, y: BasisElement) -> dict[int, dict]:
        """``{i: omega_i(x, y)}`` for planted pairs (``i = 0`` is the undeformed product)."""
        if type(x) is Poly or type(y) is Poly:
            return {}
        k = (x, y)
        hit = self._strata.get(k)
        if hit is None:
            raw = self.eng.deformed_graft_strata(x.tree, x.a, y.tree)
            hit = self._strata.put(k, {i: _planted_terms(y.a, terms) for i, terms in raw.items()})
        return hit

    def omega(self, x: BasisElement, y: BasisElement, i: int) -> dict:
        if i < 1:
            raise ValueError("deformation components start at order 1")
        return self.omega_strata(x, y).get(i, {})

    @staticmethod
    def bracket1(x: BasisElement, y: BasisElement) -> dict:
        """``[I_a(tau), X_i] = I_{a-e_i}(tau)``, zero when ``a_i = 0``; antisymmetric."""
        if type(x) is Planted and type(y) is Poly:
            sign, p, i = 1, x, y.i
        elif type(x) is Poly and type(y) is Planted:
            sign, p, i = -1, y, x.i
        else:
            return {}
        if p.a[i] == 0:
            return {}
        a = tuple(v - (j == i) for j, v in enumerate(p.a))
        return {Planted(a, p.tree): sign}

    @staticmethod
    def bracket0(x: BasisElement, y: BasisElement) -> dict:
        return {}

    def by_mode(self, mode: str):
        try:
            return {"triangle": self.triangle, "hat_triangle": self.hat_triangle,
                    "bracket0": self.bracket0, "bracket1": self.bracket1}[mode]
        except KeyError:
            raise ValueError(f"unknown mode {mode!r}") from None


def products(rules: Rules = DEFAULT_RULES) -> VProducts:
    return VProducts.for_rules(rules)


# -- public bilinear API --------------------------------------------------------


def _as_terms(x) -> dict:
    if isinstance(x, TreeVector):
        return x.terms
    if isinstance(x, BasisElement):
        return {x: 1}
    if isinstance(x, dict):
        return x
    raise TypeError(f"expected a basis element or TreeVector, got {type(x).__name__}")


def _extend(fn, x, y) -> TreeVector:
    out: dict = {}
    for a, ca in _as_terms(x).items():
        for b, cb in _as_terms(y).items():
            for r, c in fn(a, b).items():
                _add(out, r, ca * cb * c)
    return _raw(out)


def v_products(x, y, mode: str, rules: Rules = DEFAULT_RULES) -> TreeVector:
    """One of ``triangle``, ``hat_triangle``, ``bracket0``, ``bracket1`` on ``x, y``."""
    return _extend(products(rules).by_mode(mode), x, y)


def deformation_components(x, y, order: int, rules: Rules = DEFAULT_RULES
                           ) -> tuple[TreeVector, TreeVector]:
    """``(pi_order(x, y), omega_order(x, y))``; ``pi`` lives in order one only."""
    if order < 1:
        raise ValueError("order must be at least 1")
    p = products(rules)
    pi = _extend(p.bracket1, x, y) if order == 1 else TreeVector()
    return pi, _extend(lambda a, b: p.omega(a, b, order), x, y)


def t_family(x, y, t, mode: str, rules: Rules = DEFAULT_RULES) -> TreeVector:
    """``hat_triangle_t`` or ``bracket1_t`` at a concrete rational ``t``."""
    t = as_rational(t)
    p = products(rules)
    if mode == "bracket1_t":
        return _extend(p.bracket1, x, y).scale(t)
    if mode != "hat_triangle_t":
        raise ValueError(f"unknown mode {mode!r}")

    def fn(a, b):
        if type(a) is Poly or type(b) is Poly:
            return p.triangle(a, b)
        out: dict = {}
        for i, terms in p.omega_strata(a, b).items():
            w = t ** i
            for r, c in terms.items():
                _add(out, r, c * w)
        return out

    return _extend(fn, x, y)


def grading(x, scaling: Sequence[int]) -> int:
    """Grading of a tree or basis element (``X_i`` has grading zero)."""
    if isinstance(x, Poly):
        return 0
    if isinstance(x, Planted):
        return scaled_norm(x.a, scaling) + tree_grading(x.tree, scaling)
    return tree_grading(canonicalize(x), scaling)
