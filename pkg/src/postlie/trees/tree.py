"""Canonical non-planar decorated trees.

A tree has a node decoration (multi-index) at its root and a multiset of
children ``(edge, subtree)``; an edge is either ``I_a`` (stored as the
multi-index ``a``) or the noise edge :data:`XI`. Noise edges are terminal, end in
an undecorated leaf, and occur at most once per node.

Trees are interned: structurally equal trees are the same object, so identity
comparison and hashing are exact and cheap. Children are kept sorted by the
bytes of their canonical JSON serialisation.
"""

from __future__ import annotations

import itertools
import json
import weakref
from typing import Iterator, Sequence

from ..exact import MultiIndex


class TreeError(ValueError):
    """Raised when a tree violates the noise-edge constraints or shape rules."""


class _XiEdge:
    __slots__ = ()

    def __repr__(self) -> str:
        return "XI"

    def __reduce__(self):
        return "XI"


XI = _XiEdge()


def edge_json(edge) -> str:
    if edge is XI:
        return '{"Xi":null}'
    return '{"I":[' + ",".join(str(x) for x in edge) + "]}"


def _mi_json(m: MultiIndex) -> str:
    return "[" + ",".join(str(x) for x in m) + "]"


class DecoratedTree:
    __slots__ = ("dec", "children", "uid", "n_nodes", "n_edges", "width", "validated",
                 "_key", "_ordered", "__weakref__")

    # structural key -> tree; weak so that trees nobody refers to are released
    _table: weakref.WeakValueDictionary = weakref.WeakValueDictionary()
    _uids = itertools.count()

    def __init__(self, *a, **kw):
        raise TypeError("use DecoratedTree.make or canonicalize")

    # -- construction -------------------------------------------------------

    @classmethod
    def make(cls, dec: Sequence[int], children: Sequence[tuple] = (), check: bool = True
             ) -> DecoratedTree:
        """Interned tree with root decoration ``dec`` and the given children.

        ``check=False`` skips the noise-edge validation; it exists only to let
        mutation tests build trees that a broken operator would produce.
        """
        dec = tuple(dec)
        kids = tuple((e if e is XI else tuple(e), c) for e, c in children)
        width = len(dec)
        for e, c in kids:
            if c.width != width or (e is not XI and len(e) != width):
                raise TreeError("decorations of different lengths in one tree")
        if min(dec, default=0) < 0 or any(e is not XI and min(e, default=0) < 0 for e, _ in kids):
            raise TreeError("negative decoration")
        return cls._intern(dec, kids, check)

    @classmethod
    def _intern(cls, dec: tuple, kids: tuple, check: bool) -> DecoratedTree:
        """:meth:`make` for inputs already known to be well-formed tuples."""
        if len(kids) > 1:
            keyed = sorted(((_child_order(k), k) for k in kids), key=_first)
            kids = tuple(k for _, k in keyed)
            ident = (dec, tuple(o for o, _ in keyed))
        else:
            ident = (dec, tuple(_child_order(k) for k in kids))
        hit = cls._table.get(ident)
        if hit is not None:
            if check and not hit.validated:
                hit._validate()
            return hit
        self = object.__new__(cls)
        self.dec = dec
        self.children = kids
        self.uid = next(cls._uids)
        self.n_nodes = 1 + sum(c.n_nodes for _, c in kids)
        self.n_edges = len(kids) + sum(c.n_edges for _, c in kids)
        self.width = len(dec)
        self.validated = False
        self._key = None
        self._ordered = None
        if check:
            self._validate()
        cls._table[ident] = self
        return self

    def _validate(self) -> None:
        xi = 0
        for edge, child in self.children:
            if edge is XI:
                xi += 1
                if child.children:
                    raise TreeError("noise edge is not terminal")
                if any(child.dec):
                    raise TreeError("noise leaf carries a non-zero decoration")
            elif not child.validated:
                child._validate()
        if xi > 1:
            raise TreeError("more than one noise edge at a node")
        self.validated = True

    @classmethod
    def leaf(cls, dec: Sequence[int]) -> DecoratedTree:
        return cls.make(dec)

    @classmethod
    def unit(cls, width: int) -> DecoratedTree:
        """The single undecorated node ``1 = X^0``."""
        return cls.make((0,) * width)

    # -- canonical serialisation ----------------------------------------------

    @property
    def ordered_children(self) -> tuple:
        """Children in canonical order: sorted by the bytes of their serialisation."""
        if self._ordered is None:
            keyed = sorted(((_entry_json(e, c), e, c) for e, c in self.children),
                           key=lambda k: k[0])
            self._ordered = tuple((e, c) for _, e, c in keyed)
        return self._ordered

    @property
    def key(self) -> str:
        """Canonical JSON text (no whitespace)."""
        if self._key is None:
            self._key = '{"node":' + _mi_json(self.dec) + ',"children":[' + \
                ",".join(_entry_json(e, c) for e, c in self.ordered_children) + "]}"
        return self._key

    # -- inspection ---------------------------------------------------------

    def __repr__(self) -> str:
        return f"DecoratedTree({self.key})"

    def __lt__(self, other: DecoratedTree) -> bool:
        return sort_key(self) < sort_key(other)

    def __reduce__(self):
        return (_rebuild, (self.dec, self.children, self.validated))

    @property
    def has_xi(self) -> bool:
        return any(e is XI for e, _ in self.children)

    def nodes(self) -> Iterator[tuple[int, DecoratedTree, bool]]:
        """Preorder ``(node id, subtree rooted there, is-noise-leaf)`` in canonical order."""
        counter = [0]

        def walk(t, xi_leaf):
            yield counter[0], t, xi_leaf
            counter[0] += 1
            for e, c in t.ordered_children:
                yield from walk(c, e is XI)

        yield from walk(self, False)

    def to_json(self) -> dict:
        return json.loads(self.key)

    def edges(self) -> Iterator:
        for e, c in self.children:
            yield e
            yield from c.edges()


def _first(pair: tuple):
    return pair[0]


def _child_order(child: tuple) -> tuple:
    e, c = child
    return (() if e is XI else e), c.uid


def _entry_json(edge, child: DecoratedTree) -> str:
    return '{"edge":' + edge_json(edge) + ',"tree":' + child.key + "}"


def _rebuild(dec, children, validated):
    return DecoratedTree.make(dec, children, check=validated)


def sort_key(t: DecoratedTree) -> tuple[int, str]:
    """Enumeration order: edge count, then canonical encoding."""
    return (t.n_edges, t.key)


# ---------------------------------------------------------------------------
# parsing


def canonicalize(raw, check: bool = True) -> DecoratedTree:
    """Build the canonical tree from JSON-like input or ``(dec, [(edge, raw), ...])`` tuples.

    Edges are ``{"I": [...]}`` / ``{"Xi": None}`` in the JSON form and a
    multi-index or :data:`XI` in the tuple form.
    """
    if isinstance(raw, DecoratedTree):
        return raw
    if isinstance(raw, dict):
        return _from_json(raw, "$", check)
    dec, children = raw
    return DecoratedTree.make(dec, [(e, canonicalize(c, check)) for e, c in children], check)


class TreeSchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def _nat_list(v, path: str) -> tuple[int, ...]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool)
                                          for x in v):
        raise TreeSchemaError(path, "expected a list of integers")
    if any(x < 0 for x in v):
        raise TreeSchemaError(path, "decorations must be nonnegative")
    return tuple(v)


def _from_json(obj, path: str, check: bool) -> DecoratedTree:
    if not isinstance(obj, dict):
        raise TreeSchemaError(path, "expected an object")
    extra = set(obj) - {"node", "children"}
    if extra:
        raise TreeSchemaError(path, f"unexpected keys {sorted(extra)}")
    if "node" not in obj:
        raise TreeSchemaError(path, "missing 'node'")
    dec = _nat_list(obj["node"], path + ".node")
    kids = obj.get("children", [])
    if not isinstance(kids, list):
        raise TreeSchemaError(path + ".children", "expected a list")
    children = []
    for n, ch in enumerate(kids):
        p = f"{path}.children[{n}]"
        if not isinstance(ch, dict) or set(ch) != {"edge", "tree"}:
            raise TreeSchemaError(p, "expected an object with keys 'edge' and 'tree'")
        edge = ch["edge"]
        if edge == {"Xi": None}:
            e = XI
        elif isinstance(edge, dict) and set(edge) == {"I"}:
            e = _nat_list(edge["I"], p + ".edge.I")
        else:
            raise TreeSchemaError(p + ".edge", 'expected {"I": [...]} or {"Xi": null}')
        children.append((e, _from_json(ch["tree"], p + ".tree", check)))
    try:
        return DecoratedTree.make(dec, children, check)
    except TreeError as exc:
        raise TreeSchemaError(path, str(exc)) from None


def from_json_text(text: str) -> DecoratedTree:
    return canonicalize(json.loads(text))


# ---------------------------------------------------------------------------
# product decomposition


def tree_product(factors: Sequence) -> DecoratedTree:
    """Merge factors at a common root.

    Factors are ``("X", ell)`` (exactly one), ``"Xi"`` (at most one) and
    ``("I", a, tree)`` planted factors.
    """
    dec = None
    xi = 0
    children = []
    for f in factors:
        if f == "Xi" or f is XI:
            xi += 1
            continue
        tag = f[0]
        if tag == "X":
            if dec is not None:
                raise TreeError("conflicting root decorations")
            dec = tuple(f[1])
        elif tag == "I":
            children.append((tuple(f[1]), canonicalize(f[2])))
        else:
            raise TreeError(f"unknown factor {f!r}")
    if dec is None:
        raise TreeError("a product needs one X^ell factor (X^0 for the unit)")
    if xi > 1:
        raise TreeError("more than one noise factor")
    if xi:
        children.append((XI, DecoratedTree.unit(len(dec))))
    return DecoratedTree.make(dec, children)


def decompose(t: DecoratedTree) -> list:
    """Inverse of :func:`tree_product` with factors in canonical order."""
    out: list = [("X", t.dec)]
    for e, c in t.children:
        out.append("Xi" if e is XI else ("I", e, c))
    return out


def planted_tree(a: Sequence[int], t: DecoratedTree) -> DecoratedTree:
    """``I_a(t)`` as a tree with an undecorated root."""
    return DecoratedTree.make((0,) * t.width, [(tuple(a), t)])


def grading(t: DecoratedTree, scaling: Sequence[int]) -> int:
    """Sum of the scaled edge decorations; noise edges contribute zero."""
    if any(s < 1 for s in scaling):
        raise ValueError("scaling entries must be positive")
    return sum(sum(s * x for s, x in zip(scaling, e)) for e in t.edges() if e is not XI)


def scaled_norm(m: Sequence[int], scaling: Sequence[int]) -> int:
    return sum(s * x for s, x in zip(scaling, m))
