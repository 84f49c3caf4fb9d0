"""Decorated trees, grafting and the post-Lie structure on planted trees."""

from .grafting import (Rules, TreeVector, deformed_graft, deformed_graft_stratum, engine, graft,
                       graft_at, uparrow_at, uparrow_i)
from .tree import (XI, DecoratedTree, TreeError, TreeSchemaError, canonicalize, decompose,
                   grading, planted_tree, tree_product)
from .verify import (MUTATIONS, TreeVerifyConfig, enumerate_basis, enumerate_trees,
                     mutation_report, verify_axioms_truncated)
from .vspace import (BasisElement, Planted, Poly, basis_from_json, deformation_components,
                     products, t_family, v_products)

__all__ = [
    "XI", "BasisElement", "DecoratedTree", "MUTATIONS", "Planted", "Poly", "Rules",
    "TreeError", "TreeSchemaError", "TreeVector", "TreeVerifyConfig", "basis_from_json",
    "canonicalize", "decompose", "deformation_components", "deformed_graft",
    "deformed_graft_stratum", "engine", "enumerate_basis", "enumerate_trees", "graft",
    "graft_at", "grading", "mutation_report", "planted_tree", "products", "t_family",
    "tree_product", "uparrow_at", "uparrow_i", "v_products", "verify_axioms_truncated",
]
