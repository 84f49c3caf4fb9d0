"""Exact computations for post-Lie deformations of pre-Lie algebras.

Submodules: :mod:`exact` (rationals, multi-indices, matrices), :mod:`algebra`
(structure constants and axiom sweeps), :mod:`cochains` (the graded Lie algebra
of multi-cochains), :mod:`cohomology` (the deformation complex),
:mod:`deformation` (formal deformations and isomorphisms), :mod:`trees`
(decorated trees and grafting) and :mod:`cli`.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .algebra import (AxiomError, AxiomReport, BilinearMap, FiniteAlgebra, check_post_lie,
                      check_pre_lie, derivation_space, pre_lie_corpus)
from .cochains import MultiCochain, circle_product, differential, graded_bracket, mc_residual
from .cohomology import (cohomology_basis, coboundary_apply, coboundary_matrix, les_verify,
                         two_cocycle_residual)
from .deformation import (FormalDeformation, FormalIsomorphism, conjugate, infinitesimal,
                          residuals_by_order, trivialize, trivialize_step)

__all__ = [
    "__version__", "AxiomError", "AxiomReport", "BilinearMap", "FiniteAlgebra",
    "check_post_lie", "check_pre_lie", "derivation_space", "pre_lie_corpus", "MultiCochain",
    "circle_product", "differential", "graded_bracket", "mc_residual", "cohomology_basis",
    "coboundary_apply", "coboundary_matrix", "les_verify", "two_cocycle_residual",
    "FormalDeformation", "FormalIsomorphism", "conjugate", "infinitesimal",
    "residuals_by_order", "trivialize", "trivialize_step",
]
