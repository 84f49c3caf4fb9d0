from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from postlie.algebra import (AxiomError, BilinearMap, FiniteAlgebra, check_associative,
                             check_deformation_conditions, check_jacobi, check_post_lie,
                             check_pre_lie, derivation_extension, derivation_space,
                             random_bilinear, sub_adjacent)

from .conftest import load_algebra

F = Fraction


def cross_product() -> BilinearMap:
    entries = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        entries += [(i, j, k, 1), (j, i, k, -1)]
    return BilinearMap.from_entries(3, entries, "antisymmetric")


def affine_bracket() -> BilinearMap:
    """``[e0, e1] = e0`` on dim 2."""
    return BilinearMap.from_entries(2, [(0, 1, 0, 1), (1, 0, 0, -1)], "antisymmetric")


def negative_bracket_product(pi: BilinearMap) -> BilinearMap:
    return BilinearMap(pi.dim, pi.scale(-1).coeffs)


# -- structure constants --------------------------------------------------------


def test_bilinear_evaluation_and_tags():
    m = BilinearMap.from_entries(2, [(0, 1, 1, 3)])
    assert m([1, 0], [0, 1]) == [0, 3]
    assert m([2, 0], [F(1, 2), 1]) == [0, 6]
    with pytest.raises(AxiomError):
        BilinearMap.from_entries(2, [(0, 1, 1, 1)], "antisymmetric")
    assert m.opposite().basis(1, 0) == [0, 3]


def test_finite_algebra_invariants():
    with pytest.raises(ValueError):
        FiniteAlgebra(2, ["a", "a"], {})
    with pytest.raises(ValueError):
        FiniteAlgebra(2, ["a", "b"], {"triangle": BilinearMap.zero(3)})


# -- Jacobi -------------------------------------------------------------------------


def test_jacobi_examples():
    assert check_jacobi(BilinearMap.zero(3, "antisymmetric")).holds
    assert check_jacobi(cross_product()).holds
    assert check_jacobi(affine_bracket()).holds


def test_jacobi_failure_and_rejection():
    # [e0,e1] = e2, [e0,e2] = e0, [e1,e2] = e1 fails Jacobi
    pi = BilinearMap.from_entries(3, [(0, 1, 2, 1), (1, 0, 2, -1), (0, 2, 0, 1), (2, 0, 0, -1),
                                      (1, 2, 1, 1), (2, 1, 1, -1)], "antisymmetric")
    report = check_jacobi(pi)
    assert not report.holds and report.failed_axioms() == ["jacobi"]
    with pytest.raises(AxiomError):
        check_jacobi(BilinearMap.from_entries(2, [(0, 1, 0, 1)]))


# -- pre-Lie --------------------------------------------------------------------------


def test_pre_lie_examples(corpus):
    assert check_pre_lie(corpus["dual_numbers"]).holds
    assert check_pre_lie(BilinearMap.zero(2)).holds


def test_pre_lie_witness():
    # e0 > e0 = e1, e1 > e0 = e0; defect at (e0, e1, e0) is -2 e1 by hand
    m = BilinearMap.from_entries(2, [(0, 0, 1, 1), (1, 0, 0, 1)])
    report = check_pre_lie(m)
    assert report.checked == 8
    assert report.witnesses == [("pre_lie", (0, 1, 0), [0, -2]), ("pre_lie", (1, 0, 0), [0, 2])]
    assert all(any(v) for _, _, v in report.witnesses)


def test_corpus_is_pre_lie(corpus):
    assert len(corpus) >= 10
    assert {m.dim for m in corpus.values()} == {2, 3}
    for name, m in corpus.items():
        assert check_pre_lie(m).holds, name
    for name in ("dual_numbers", "truncated_poly3", "split2", "split3", "upper_triangular",
                 "left_unit2", "nilpotent2"):
        assert check_associative(corpus[name]).holds, name


def test_corpus_files_match_builtin(corpus):
    for name, m in corpus.items():
        assert load_algebra(name).triangle == m


def test_derivation_extension_requires_commuting_maps():
    with pytest.raises(AxiomError):
        derivation_extension(BilinearMap.zero(2), [[[1, 0], [0, 0]], [[0, 1], [0, 0]]])


# -- post-Lie ------------------------------------------------------------------------


def test_post_lie_examples(corpus):
    zero_pi = BilinearMap.zero(2, "antisymmetric")
    assert check_post_lie(zero_pi, corpus["left_unit2"]).holds
    assert check_post_lie(affine_bracket(), BilinearMap.zero(2)).holds
    assert check_post_lie(cross_product(), BilinearMap.zero(3)).holds
    assert check_post_lie(cross_product(), negative_bracket_product(cross_product())).holds


def test_post_lie_random_failure():
    rng = random.Random(5)
    pi = random_bilinear(2, rng, antisymmetric=True, density=1.0, lo=1, hi=2)
    rho = random_bilinear(2, rng, density=1.0, lo=1, hi=2)
    report = check_post_lie(pi, rho)
    assert not report.holds
    assert set(report.failed_axioms()) <= {"post1", "post2"}
    assert all(any(v) for _, _, v in report.witnesses)
    assert check_post_lie(pi, rho).witnesses == report.witnesses


def test_post_lie_rejects_non_antisymmetric():
    with pytest.raises(AxiomError):
        check_post_lie(BilinearMap.from_entries(2, [(0, 1, 0, 1)]), BilinearMap.zero(2))


# -- sub-adjacent ----------------------------------------------------------------------


def test_sub_adjacent_examples():
    sym = BilinearMap.from_entries(2, [(0, 1, 0, 1), (1, 0, 0, 1), (1, 1, 1, 2)])
    zero_pi = BilinearMap.zero(2, "antisymmetric")
    assert sub_adjacent(zero_pi, sym).is_zero()
    assert sub_adjacent(affine_bracket(), BilinearMap.zero(2)) == affine_bracket()
    rho = BilinearMap.from_entries(2, [(0, 1, 1, 1)])
    assert check_pre_lie(rho).holds
    assert sub_adjacent(zero_pi, rho) == \
        BilinearMap.from_entries(2, [(0, 1, 1, 1), (1, 0, 1, -1)], "antisymmetric")


def test_sub_adjacent_is_lie_for_post_lie(corpus):
    cases = [(BilinearMap.zero(m.dim, "antisymmetric"), m) for m in corpus.values()]
    cases += [(cross_product(), negative_bracket_product(cross_product())),
              (affine_bracket(), negative_bracket_product(affine_bracket()))]
    for pi, rho in cases:
        assert check_post_lie(pi, rho).holds
        assert check_jacobi(sub_adjacent(pi, rho)).holds


# -- deformation conditions --------------------------------------------------------------


def test_deformation_condition_examples(corpus):
    tri = corpus["dual_numbers"]
    zero_pi = BilinearMap.zero(2, "antisymmetric")
    assert check_deformation_conditions(tri, zero_pi, BilinearMap.zero(2)).holds
    assert check_deformation_conditions(BilinearMap.zero(2), affine_bracket(),
                                        BilinearMap.zero(2)).holds
    assert check_deformation_conditions(tri, zero_pi, -tri).holds


def test_deformation_conditions_reject_non_pre_lie():
    bad = BilinearMap.from_entries(2, [(0, 0, 1, 1), (1, 0, 0, 1)])
    with pytest.raises(AxiomError, match=r"\(0, 1, 0\)"):
        check_deformation_conditions(bad, BilinearMap.zero(2, "antisymmetric"),
                                     BilinearMap.zero(2))


def test_deformation_conditions_agree_with_post_lie(corpus):
    rng = random.Random(11)
    names = sorted(corpus)
    agree = positives = 0
    for n in range(1000):
        tri = corpus[names[n % len(names)]]
        d = tri.dim
        pi = random_bilinear(d, rng, antisymmetric=True, density=0.3, lo=-1, hi=1)
        if n % 4 == 0:
            omega = -tri
        elif n % 4 == 1:
            omega = negative_bracket_product(pi) - tri
        else:
            omega = random_bilinear(d, rng, density=0.3, lo=-1, hi=1)
        a = check_deformation_conditions(tri, pi, omega).holds
        b = check_post_lie(pi, tri + omega).holds
        assert a == b
        agree += 1
        positives += a
    assert agree == 1000 and positives > 100


# -- derivations -------------------------------------------------------------------------


def _sympy_derivation_dim(tri: BilinearMap) -> int:
    d = tri.dim
    D = sympy.Matrix(d, d, lambda r, c: sympy.Symbol(f"D{r}_{c}"))
    c = [[sympy.Matrix([tri.coeffs[i][j][k] for k in range(d)]) for j in range(d)]
         for i in range(d)]

    def prod(u, v):
        out = sympy.zeros(d, 1)
        for i in range(d):
            for j in range(d):
                out += u[i] * v[j] * c[i][j]
        return out

    e = [sympy.Matrix([int(k == i) for k in range(d)]) for i in range(d)]
    eqs = []
    for i in range(d):
        for j in range(d):
            eqs += list(D * prod(e[i], e[j]) - prod(D * e[i], e[j]) - prod(e[i], D * e[j]))
    syms = list(D)
    a, _ = sympy.linear_eq_to_matrix(eqs, syms)
    return d * d - a.rank()


def test_derivation_examples(corpus):
    assert len(derivation_space(BilinearMap.zero(2))) == 4
    # e_i > e_j = delta_ij e_i on dim 2
    assert len(derivation_space(corpus["split2"])) == _sympy_derivation_dim(corpus["split2"]) == 0
    assert len(derivation_space(corpus["dual_numbers"])) == 1


def test_derivation_space_matches_sympy(corpus):
    for name, tri in corpus.items():
        basis = derivation_space(tri)
        assert len(basis) == _sympy_derivation_dim(tri), name
        d = tri.dim
        for D in basis:
            for i in range(d):
                for j in range(d):
                    x = [F(int(k == i)) for k in range(d)]
                    y = [F(int(k == j)) for k in range(d)]

                    def ap(v):
                        return [sum(D[r][c] * v[c] for c in range(d)) for r in range(d)]

                    lhs = ap(tri(x, y))
                    rhs = [p + q for p, q in zip(tri(ap(x), y), tri(x, ap(y)))]
                    assert lhs == rhs
