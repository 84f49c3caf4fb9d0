"""JSON encodings of algebras, deformations, cochains and tree vectors.

Rationals are strings ``"p/q"`` in lowest terms with ``q > 0``. Parse errors
raise :class:`SchemaError` carrying a JSONPath-like location.
"""

from __future__ import annotations

import hashlib
import json
import re
from fractions import Fraction
from typing import Any, Sequence

from .algebra import AxiomError, BilinearMap, FiniteAlgebra
from .deformation import FormalDeformation, FormalIsomorphism
from .exact import format_rational
from .trees.tree import DecoratedTree, TreeSchemaError, canonicalize
from .trees.vspace import BasisElement, Planted, Poly, basis_from_json

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def parse_rational(value, path: str) -> Fraction:
    """Accept ``"p/q"`` strings (and plain integers for convenience)."""
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if not isinstance(value, str) or not _RATIONAL.fullmatch(value.strip()):
        raise SchemaError(path, f'expected a rational string "p/q", got {value!r}')
    q = Fraction(value.strip())
    return q


def _int(value, path: str, lo: int = 0, hi: int | None = None) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(path, "expected an integer")
    if value < lo or (hi is not None and value >= hi):
        bound = f"{lo}..{hi - 1}" if hi is not None else f">= {lo}"
        raise SchemaError(path, f"{value} outside {bound}")
    return value


def _obj(value, path: str, required: Sequence[str], optional: Sequence[str] = ()) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(path, "expected an object")
    missing = [k for k in required if k not in value]
    if missing:
        raise SchemaError(path, f"missing key {missing[0]!r}")
    extra = sorted(set(value) - set(required) - set(optional))
    if extra:
        raise SchemaError(path, f"unexpected key {extra[0]!r}")
    return value


def _list(value, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, "expected a list")
    return value


# ---------------------------------------------------------------------------
# bilinear maps and algebras


def entries_from_json(raw, dim: int, path: str) -> list[tuple[int, int, int, Fraction]]:
    out = []
    for n, q in enumerate(_list(raw, path)):
        p = f"{path}[{n}]"
        if not isinstance(q, list) or len(q) != 4:
            raise SchemaError(p, "expected [i, j, k, \"p/q\"]")
        i, j, k = (_int(q[m], f"{p}[{m}]", 0, dim) for m in range(3))
        out.append((i, j, k, parse_rational(q[3], f"{p}[3]")))
    return out


def bilinear_from_json(raw, dim: int, path: str, antisymmetric: bool = False) -> BilinearMap:
    entries = entries_from_json(raw, dim, path)
    m = BilinearMap.from_entries(dim, entries)
    if antisymmetric:
        if not m.is_antisymmetric():
            raise SchemaError(path, "structure constants are not antisymmetric")
        m = m.as_antisymmetric()
    return m


def bilinear_to_json(m: BilinearMap) -> list:
    return [[i, j, k, format_rational(c)] for i, j, k, c in m.entries()]


ANTISYMMETRIC_PRODUCTS = ("bracket", "pi")


def algebra_from_json(obj, path: str = "$") -> FiniteAlgebra:
    """``{"dim": n, "basis": [names], "products": {"name": [[i, j, k, "p/q"], ...]}}``."""
    obj = _obj(obj, path, ("dim", "products"), ("basis", "name"))
    dim = _int(obj["dim"], path + ".dim", 1)
    labels = obj.get("basis", [f"e{i}" for i in range(dim)])
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise SchemaError(path + ".basis", "expected a list of names")
    if len(labels) != dim:
        raise SchemaError(path + ".basis", f"expected {dim} names, got {len(labels)}")
    if len(set(labels)) != dim:
        raise SchemaError(path + ".basis", "names must be distinct")
    prods = obj["products"]
    if not isinstance(prods, dict):
        raise SchemaError(path + ".products", "expected an object")
    products = {name: bilinear_from_json(raw, dim, f"{path}.products.{name}",
                                         name in ANTISYMMETRIC_PRODUCTS)
                for name, raw in prods.items()}
    return FiniteAlgebra(dim, list(labels), products)


def algebra_to_json(alg: FiniteAlgebra, name: str | None = None) -> dict:
    out: dict[str, Any] = {"dim": alg.dim, "basis": list(alg.basis_labels),
                           "products": {k: bilinear_to_json(v) for k, v in alg.products.items()}}
    if name is not None:
        out["name"] = name
    return out


def require_product(alg: FiniteAlgebra, name: str, path: str = "$") -> BilinearMap:
    if name not in alg.products:
        raise SchemaError(path + ".products", f"missing product {name!r}")
    return alg.products[name]


# ---------------------------------------------------------------------------
# deformations and isomorphisms


def _series(raw, dim: int, order: int, path: str, antisymmetric: bool) -> dict[int, BilinearMap]:
    if not isinstance(raw, dict):
        raise SchemaError(path, 'expected an object {"1": [...], ...}')
    out = {}
    for key, entries in raw.items():
        if not key.isdigit():
            raise SchemaError(path, f"order key {key!r} is not a natural number")
        n = int(key)
        if not 1 <= n <= order:
            raise SchemaError(f"{path}.{key}", f"order {n} outside 1..{order}")
        out[n] = bilinear_from_json(entries, dim, f"{path}.{key}", antisymmetric)
    return out


def deformation_from_json(obj, tri: BilinearMap, path: str = "$") -> FormalDeformation:
    """``{"order": N, "pi": {"1": [...]}, "omega": {"1": [...]}}`` around the product ``tri``."""
    obj = _obj(obj, path, ("order",), ("pi", "omega"))
    order = _int(obj["order"], path + ".order", 1)
    d = tri.dim
    pis = _series(obj.get("pi", {}), d, order, path + ".pi", True)
    omegas = _series(obj.get("omega", {}), d, order, path + ".omega", False)
    zero_pi = BilinearMap.zero(d, "antisymmetric")
    return FormalDeformation(d, order, [pis.get(n, zero_pi) for n in range(order + 1)],
                             [tri] + [omegas.get(n, BilinearMap.zero(d))
                                      for n in range(1, order + 1)])


def deformation_to_json(D: FormalDeformation) -> dict:
    return {"order": D.order,
            "pi": {str(n): bilinear_to_json(D.pi_coeffs[n]) for n in range(1, D.order + 1)
                   if not D.pi_coeffs[n].is_zero()},
            "omega": {str(n): bilinear_to_json(D.omega_coeffs[n]) for n in range(1, D.order + 1)
                      if not D.omega_coeffs[n].is_zero()}}


def matrix_to_json(m: Sequence[Sequence]) -> list:
    return [[format_rational(x) for x in row] for row in m]


def isomorphism_to_json(phi: FormalIsomorphism) -> dict:
    return {"order": phi.order,
            "phi": {str(n): matrix_to_json(phi.phi_coeffs[n]) for n in range(1, phi.order + 1)}}


def vector_to_json(v: Sequence) -> list[str]:
    return [format_rational(x) for x in v]


# ---------------------------------------------------------------------------
# trees


def tree_from_json(obj, path: str = "$") -> DecoratedTree:
    try:
        return canonicalize(obj)
    except TreeSchemaError as exc:
        raise SchemaError(path + exc.path[1:], exc.message) from None
    except (TypeError, ValueError) as exc:
        raise SchemaError(path, str(exc)) from None


def element_from_json(obj, width: int, path: str = "$") -> BasisElement:
    try:
        return basis_from_json(obj, width, path)
    except TreeSchemaError as exc:
        raise SchemaError(exc.path, exc.message) from None


def multi_index_from_json(raw, width: int | None, path: str) -> tuple[int, ...]:
    if not isinstance(raw, list):
        raise SchemaError(path, "expected a list of naturals")
    out = tuple(_int(x, f"{path}[{n}]") for n, x in enumerate(raw))
    if width is not None and len(out) != width:
        raise SchemaError(path, f"expected length {width}, got {len(out)}")
    return out


def term_to_json(term) -> dict:
    if isinstance(term, DecoratedTree):
        return term.to_json()
    if isinstance(term, (Planted, Poly)):
        return term.to_json()
    raise TypeError(f"cannot serialise {type(term).__name__}")


def _term_sort_key(term) -> tuple:
    if isinstance(term, DecoratedTree):
        return (term.n_edges, term.key)
    return term.sort_key()


def tree_vector_to_json(terms: dict) -> list[dict]:
    """Terms in enumeration order as ``{"term": ..., "coeff": "p/q"}``."""
    return [{"term": term_to_json(t), "coeff": format_rational(c)}
            for t, c in sorted(terms.items(), key=lambda kv: _term_sort_key(kv[0]))]


# ---------------------------------------------------------------------------
# reports


def canonical_dumps(obj) -> str:
    """Deterministic JSON text: insertion-ordered keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def config_hash(obj) -> str:
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


__all__ = [
    "AxiomError", "SchemaError", "parse_rational", "entries_from_json", "bilinear_from_json",
    "bilinear_to_json", "algebra_from_json", "algebra_to_json", "require_product",
    "deformation_from_json", "deformation_to_json", "matrix_to_json", "isomorphism_to_json",
    "vector_to_json", "tree_from_json", "element_from_json", "multi_index_from_json",
    "tree_vector_to_json", "canonical_dumps", "config_hash",
]
