"""Command-line interface: ``postlie <command> [INPUT] [-o OUTPUT] [options]``.

Every command reads one JSON document (a file path, or stdin when the path is
omitted or ``-``) and writes one JSON report (``-o`` path, or stdout). Exit
status is 0 when every requested check passes, 1 when a check fails and 2 when
the input violates its schema.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .algebra import (AxiomError, AxiomReport, BilinearMap, check_associative,
                      check_deformation_conditions, check_jacobi, check_post_lie, check_pre_lie,
                      derivation_space)
from .cochains import mc_residual
from .cohomology import (cohomology_basis, les_verify, two_cocycle_residual)
from .deformation import (FormalDeformation, infinitesimal, random_deformation,
                          residuals_by_order, trivialize)
from .exact import as_rational, format_rational
from .serialize import (SchemaError, algebra_from_json, bilinear_to_json, canonical_dumps,
                        config_hash, deformation_from_json, deformation_to_json,
                        element_from_json, isomorphism_to_json,
                        multi_index_from_json, require_product, tree_from_json,
                        tree_vector_to_json, vector_to_json)
from .trees import grafting
from .trees.tree import TreeError
from .trees.vspace import deformation_components, grading, t_family, v_products
from .trees.verify import TreeVerifyConfig, mutation_report, verify_axioms_truncated

THREADS_ENV = "POSTLIE_THREADS"
WITNESS_LIMIT = 5


# ---------------------------------------------------------------------------
# helpers


def _read_input(path: str | None) -> Any:
    if path is None or path == "-":
        text = sys.stdin.read()
        where = "<stdin>"
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SchemaError("$", f"cannot read {path}: {exc.strerror}") from None
        where = path
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"{where} is not JSON (line {exc.lineno}: {exc.msg})") from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _vec(v: Sequence) -> list[str]:
    return [format_rational(x) for x in v]


def axiom_report_json(report: AxiomReport, limit: int = WITNESS_LIMIT) -> dict:
    return {"holds": report.holds, "checked": report.checked,
            "failed_axioms": report.failed_axioms(),
            "witnesses": [{"axiom": name, "triple": list(triple), "defect": _vec(defect)}
                          for name, triple, defect in report.witnesses[:limit]]}


def _threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise SchemaError("$env." + THREADS_ENV, f"expected an integer, got {raw!r}") from None
    return 1


# ---------------------------------------------------------------------------
# algebra commands


def cmd_check(args, doc) -> tuple[dict, bool]:
    alg = algebra_from_json(doc)
    report: dict[str, Any] = {}
    ok = True
    axioms = args.axioms or _default_axioms(alg.products)
    for name in axioms:
        if name == "pre_lie":
            r = check_pre_lie(require_product(alg, "triangle"))
        elif name == "associative":
            r = check_associative(require_product(alg, "triangle"))
        elif name == "jacobi":
            r = check_jacobi(require_product(alg, "bracket"))
        elif name == "post_lie":
            r = check_post_lie(require_product(alg, "bracket"), require_product(alg, "triangle"))
        else:
            raise SchemaError("$args.axioms", f"unknown axiom {name!r}")
        report[name] = axiom_report_json(r)
        ok &= r.holds
    return {"axioms": report}, ok


def _default_axioms(products: dict) -> list[str]:
    out = []
    if "triangle" in products:
        out.append("pre_lie")
    if "bracket" in products:
        out.append("jacobi")
        if "triangle" in products:
            out.append("post_lie")
    return out


def cmd_mc(args, doc) -> tuple[dict, bool]:
    alg = algebra_from_json(doc)
    tri = require_product(alg, "triangle")
    d = alg.dim
    pi = alg.products.get("pi", BilinearMap.zero(d, "antisymmetric"))
    omega = alg.products.get("omega", BilinearMap.zero(d))
    if not check_pre_lie(tri).holds:
        raise AxiomError("the product 'triangle' is not pre-Lie")
    res = mc_residual(tri, pi, omega)
    conditions = check_deformation_conditions(tri, pi, omega)
    deformed = check_post_lie(pi, tri + omega)
    mc_zero = res.is_zero()
    verdicts = [mc_zero, conditions.holds, deformed.holds]
    out = {"mc_residual": {"vanishes": mc_zero,
                           "entries": [[i, list(l), list(r), k, format_rational(c)]
                                       for i, l, r, k, c in res.entries()]},
           "conditions": axiom_report_json(conditions),
           "post_lie_deformed": axiom_report_json(deformed),
           "predicates_agree": len(set(verdicts)) == 1,
           "is_post_lie_deformation": all(verdicts)}
    return out, all(verdicts)


def cmd_cohomology(args, doc) -> tuple[dict, bool]:
    alg = algebra_from_json(doc)
    tri = require_product(alg, "triangle")
    if not check_pre_lie(tri).holds:
        raise AxiomError("the product 'triangle' is not pre-Lie")
    out: dict[str, Any] = {}
    ok = True
    degrees = args.degree or ([] if args.les else [1, 2])
    groups = {}
    for n in degrees:
        rep = cohomology_basis(tri, n)
        g = {"degree": n, "betti": rep.betti, "cochain_dim": rep.dim_cochains,
             "rank_in": rep.rank_in, "rank_out": rep.rank_out}
        if args.representatives:
            g["representatives"] = [[[i, list(l), list(r), k, format_rational(c)]
                                     for i, l, r, k, c in f.entries()]
                                    for f in rep.representative_basis]
        if n == 1:
            der = len(derivation_space(tri))
            g["derivation_dimension"] = der
            g["matches_derivations"] = der == rep.betti
            ok &= der == rep.betti
        groups[str(n)] = g
    out["cohomology"] = groups
    if args.les:
        les = les_verify(tri, args.les)
        out["les"] = {
            "max_degree": les.max_degree,
            "betti_plie": {str(k): v for k, v in les.betti_plie.items()},
            "betti_postlie": {str(k): v for k, v in les.betti_postlie.items()},
            "betti_plie_k": {str(n): {str(s): b for s, b in row.items()}
                             for n, row in les.betti_plie_k.items()},
            "nodes": [{"name": node.name, "dim": node.dim, "image_rank": node.image_rank,
                       "kernel_dim": node.kernel_dim, "composite_zero": node.composite_zero,
                       "exact": node.exact} for node in les.nodes],
            "short_exact": {str(k): v for k, v in les.short_exact.items()},
            "exact": les.exact}
        ok &= les.holds
    return out, ok


def _deformation_input(args, doc) -> tuple[BilinearMap, FormalDeformation]:
    if not isinstance(doc, dict) or "algebra" not in doc:
        raise SchemaError("$", "expected an object with key 'algebra' (and optionally "
                               "'deformation')")
    extra = sorted(set(doc) - {"algebra", "deformation"})
    if extra:
        raise SchemaError("$", f"unexpected key {extra[0]!r}")
    alg = algebra_from_json(doc["algebra"], "$.algebra")
    tri = require_product(alg, "triangle", "$.algebra")
    if not check_pre_lie(tri).holds:
        raise AxiomError("the product 'triangle' is not pre-Lie")
    if "deformation" in doc:
        return tri, deformation_from_json(doc["deformation"], tri, "$.deformation")
    if args.order is None:
        raise SchemaError("$", "no 'deformation' given; pass --order (and --seed) to draw one")
    return tri, random_deformation(tri, args.order, random.Random(args.seed))


def cmd_deform(args, doc) -> tuple[dict, bool]:
    tri, D = _deformation_input(args, doc)
    res = residuals_by_order(D)
    valid = all(r.vanishes for r in res)
    out: dict[str, Any] = {
        "deformation": deformation_to_json(D),
        "residuals": [{"order": r.order, "vanishes": r.vanishes,
                       "first_defect": _defect_json(r.first_defect())} for r in res],
        "valid": valid}
    ok = valid
    if valid and D.order >= 1:
        pi1, om1 = infinitesimal(D)
        cocycle = two_cocycle_residual(tri, pi1, om1)
        out["infinitesimal"] = {"pi": bilinear_to_json(pi1), "omega": bilinear_to_json(om1),
                                "is_two_cocycle": cocycle.vanishes}
        ok &= cocycle.vanishes
    if args.trivialize:
        if not valid:
            out["trivialize"] = {"success": False, "reason": "invalid deformation"}
        else:
            Phi, reduced, obstruction = trivialize(tri, D)
            t: dict[str, Any] = {"success": obstruction is None,
                                 "isomorphism": isomorphism_to_json(Phi),
                                 "reduced": deformation_to_json(reduced),
                                 "reduced_is_undeformed": reduced.is_undeformed()}
            if obstruction is not None:
                t["obstruction"] = {"order": obstruction.order,
                                    "class_coordinates": vector_to_json(
                                        obstruction.class_coordinates)}
            out["trivialize"] = t
            ok &= obstruction is None
    return out, ok


def _defect_json(found) -> dict | None:
    if found is None:
        return None
    name, triple, defect = found
    return {"identity": name, "triple": list(triple), "defect": _vec(defect)}


# ---------------------------------------------------------------------------
# trees


TREE_OPS = ("canonicalize", "graft", "graft-at", "deformed-graft", "uparrow", "uparrow-at",
            "product", "components", "grading")


def _key(doc: dict, name: str):
    if name not in doc:
        raise SchemaError("$", f"missing key {name!r}")
    return doc[name]


def _tree_width(*trees) -> int:
    widths = {t.width for t in trees}
    if len(widths) != 1:
        raise SchemaError("$", "trees have decorations of different lengths")
    return widths.pop()


def cmd_trees(args, doc) -> tuple[dict, bool]:
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected an object")
    op = args.op
    out: dict[str, Any] = {"op": op}
    if op == "canonicalize":
        out["tree"] = tree_from_json(_key(doc, "tree"), "$.tree").to_json()
    elif op in ("graft", "deformed-graft", "graft-at"):
        sigma = tree_from_json(_key(doc, "sigma"), "$.sigma")
        tau = tree_from_json(_key(doc, "tau"), "$.tau")
        w = _tree_width(sigma, tau)
        a = multi_index_from_json(_key(doc, "a"), w, "$.a")
        if op == "graft":
            out["result"] = tree_vector_to_json(grafting.graft(sigma, a, tau).terms)
        elif op == "graft-at":
            node = _node(doc, tau)
            out["result"] = grafting.graft_at(sigma, a, tau, node).to_json()
        else:
            out["result"] = tree_vector_to_json(grafting.deformed_graft(sigma, a, tau).terms)
            eng = grafting.engine()
            out["strata"] = {str(k): tree_vector_to_json(v) for k, v in
                             sorted(eng.deformed_graft_strata(sigma, a, tau).items())}
    elif op == "uparrow":
        tau = tree_from_json(_key(doc, "tau"), "$.tau")
        i = _key(doc, "i")
        if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < tau.width:
            raise SchemaError("$.i", f"expected a coordinate index in 0..{tau.width - 1}")
        out["result"] = tree_vector_to_json(grafting.uparrow_i(tau, i).terms)
    elif op == "uparrow-at":
        tau = tree_from_json(_key(doc, "tau"), "$.tau")
        node = _node(doc, tau)
        delta = _key(doc, "delta")
        if (not isinstance(delta, list) or len(delta) != tau.width
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in delta)):
            raise SchemaError("$.delta", f"expected {tau.width} integers")
        out["result"] = tree_vector_to_json(grafting.uparrow_at(tau, node, delta).terms)
    elif op in ("product", "components"):
        width = _key(doc, "width")
        if not isinstance(width, int) or isinstance(width, bool) or width < 1:
            raise SchemaError("$.width", "expected a positive integer")
        x = element_from_json(_key(doc, "x"), width, "$.x")
        y = element_from_json(_key(doc, "y"), width, "$.y")
        if op == "product":
            mode = doc.get("mode", "hat_triangle")
            if "t" in doc:
                t = _rational(doc["t"], "$.t")
                if mode not in ("hat_triangle_t", "bracket1_t"):
                    raise SchemaError("$.mode", "with 't' the mode is hat_triangle_t or bracket1_t")
                vec = t_family(x, y, t, mode)
            else:
                if mode not in ("triangle", "hat_triangle", "bracket0", "bracket1"):
                    raise SchemaError("$.mode", f"unknown mode {mode!r}")
                vec = v_products(x, y, mode)
            out["mode"] = mode
            out["result"] = tree_vector_to_json(vec.terms)
        else:
            order = doc.get("order", 1)
            if not isinstance(order, int) or isinstance(order, bool) or order < 1:
                raise SchemaError("$.order", "expected an integer >= 1")
            pi, omega = deformation_components(x, y, order)
            out["order"] = order
            out["pi"] = tree_vector_to_json(pi.terms)
            out["omega"] = tree_vector_to_json(omega.terms)
    elif op == "grading":
        scaling = doc.get("scaling")
        if "element" in doc:
            width = _key(doc, "width")
            target = element_from_json(doc["element"], width, "$.element")
            w = width
        else:
            target = tree_from_json(_key(doc, "tree"), "$.tree")
            w = target.width
        s = multi_index_from_json(scaling, w, "$.scaling") if scaling is not None else (1,) * w
        if any(v < 1 for v in s):
            raise SchemaError("$.scaling", "entries must be positive")
        out["grading"] = grading(target, s)
    else:
        raise SchemaError("$args.op", f"unknown op {op!r}")
    return out, True


def _node(doc: dict, tau) -> int:
    node = _key(doc, "node")
    if not isinstance(node, int) or isinstance(node, bool) or not 0 <= node < tau.n_nodes:
        raise SchemaError("$.node", f"expected a node id in 0..{tau.n_nodes - 1}")
    return node


def _rational(value, path: str) -> Fraction:
    try:
        return as_rational(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(path, f"expected a rational, got {value!r}") from None


def cmd_trees_verify(args, doc) -> tuple[dict, bool]:
    samples = tuple(_rational(t, "$args.t_samples") for t in args.t_samples.split(","))
    scaling = tuple(int(s) for s in args.scaling.split(",")) if args.scaling else None
    cfg = TreeVerifyConfig(d=args.d, max_edges=args.max_edges,
                           max_decoration=args.max_decoration, scaling=scaling,
                           t_samples=samples, max_order=args.max_order,
                           modes=tuple(args.modes.split(",")))
    report = verify_axioms_truncated(cfg, threads=_threads(args.threads))
    out: dict[str, Any] = {"basis_size": report.basis_size,
                           "results": {k: _sweep_json(r) for k, r in report.results.items()},
                           "holds": report.holds}
    ok = report.holds
    if args.mutations:
        detected = {}
        for name, rep in mutation_report(cfg).items():
            detected[name] = {"detected": not rep.holds, "failed": rep.failed()}
        out["mutations"] = detected
        ok &= all(v["detected"] for v in detected.values())
    return out, ok


def _sweep_json(r) -> dict:
    return {"checked": r.checked, "holds": r.holds,
            "witnesses": [{"elements": [e.to_json() for e in triple],
                           "defect": _defect_terms(defect)}
                          for triple, defect in r.witnesses[:WITNESS_LIMIT]]}


def _defect_terms(defect) -> Any:
    if isinstance(defect, str):
        return defect
    flat: dict = {}
    for k, c in defect.items():
        if isinstance(k, tuple):
            elem, power = k
            flat.setdefault(str(power), {})[elem] = c
        else:
            flat.setdefault("0", {})[k] = c
    return {p: tree_vector_to_json(terms) for p, terms in sorted(flat.items())}


# ---------------------------------------------------------------------------
# parser and entry point


COMMANDS = {"check": cmd_check, "mc": cmd_mc, "cohomology": cmd_cohomology,
            "deform": cmd_deform, "trees": cmd_trees, "trees-verify": cmd_trees_verify}

NO_INPUT = {"trees-verify"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="postlie", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"postlie {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_input=True):
        if with_input:
            sp.add_argument("input", nargs="?", default=None,
                            help="JSON input file (stdin when omitted or '-')")
        sp.add_argument("-o", "--output", default=None, help="report path (stdout by default)")
        sp.add_argument("--threads", type=int, default=None,
                        help=f"worker processes for sweeps (default ${THREADS_ENV} or 1)")

    sp = sub.add_parser("check", help="axiom sweeps on an algebra")
    common(sp)
    sp.add_argument("--axioms", type=lambda s: s.split(","), default=None,
                    help="comma list of pre_lie, associative, jacobi, post_lie")

    sp = sub.add_parser("mc", help="Maurer-Cartan residual of (pi, omega) around 'triangle'")
    common(sp)

    sp = sub.add_parser("cohomology", help="betti numbers, representatives, long exact sequence")
    common(sp)
    sp.add_argument("--degree", type=int, action="append", default=None,
                    help="cohomology degree (repeatable; default 1 and 2)")
    sp.add_argument("--representatives", action="store_true",
                    help="include canonical class representatives")
    sp.add_argument("--les", type=int, default=None, metavar="N",
                    help="verify the long exact sequence through degree N")

    sp = sub.add_parser("deform", help="residuals, infinitesimal and trivialization")
    common(sp)
    sp.add_argument("--order", type=int, default=None,
                    help="draw a random valid deformation of this order when none is given")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trivialize", action="store_true")

    sp = sub.add_parser("trees", help="grafting operators on JSON trees")
    sp.add_argument("op", choices=TREE_OPS)
    common(sp)

    sp = sub.add_parser("trees-verify", help="truncated post-Lie sweeps on planted trees")
    common(sp, with_input=False)
    sp.add_argument("--d", type=int, default=0)
    sp.add_argument("--max-edges", type=int, default=2)
    sp.add_argument("--max-decoration", type=int, default=2)
    sp.add_argument("--scaling", default=None, help="comma list of positive integers")
    sp.add_argument("--t-samples", default="0,1,1/2,-1,3")
    sp.add_argument("--max-order", type=int, default=4)
    sp.add_argument("--modes", default="pre_lie,post_lie,t_family,reconstruction,invariants")
    sp.add_argument("--mutations", action="store_true",
                    help="also run the deliberately broken rule sets")
    return p


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("output", "threads", "input")}
    return json.loads(json.dumps(cfg, default=str))


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config(args)
    report: dict[str, Any] = {"tool": {"name": "postlie", "version": __version__},
                              "command": args.command, "config": config}
    try:
        doc = None if args.command in NO_INPUT else _read_input(args.input)
        report["config_hash"] = config_hash({"config": config, "input": doc})
        body, ok = COMMANDS[args.command](args, doc)
    except SchemaError as exc:
        report.update({"status": "schema_error", "error": {"path": exc.path, "message": exc.message}})
        _write(canonical_dumps(report), args.output)
        print(f"postlie: schema error at {exc}", file=sys.stderr)
        return 2
    except (AxiomError, TreeError) as exc:
        report.update({"status": "invalid_input", "error": {"path": "$", "message": str(exc)}})
        _write(canonical_dumps(report), args.output)
        print(f"postlie: {exc}", file=sys.stderr)
        return 2
    report.update(body)
    report["status"] = "pass" if ok else "fail"
    _write(canonical_dumps(report), args.output)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
