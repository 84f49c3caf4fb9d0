from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postlie.exact import (Matrix, NegativeIndexError, as_rational, compose, format_rational,
                           kernel_basis, mi_add, mi_below, mi_leq, mi_sub, mi_sub_or_none,
                           mi_unit, multi_binom, multi_shuffles, perm_sign, rank_of_vectors,
                           shuffles, sort_sign)


def _inversions(s):
    return sum(1 for a, b in itertools.combinations(range(len(s)), 2) if s[a] > s[b])


def _blockwise_increasing(sigma, parts):
    pos = 0
    for p in parts:
        block = sigma[pos:pos + p]
        if list(block) != sorted(block):
            return False
        pos += p
    return True


def _filtered(parts):
    n = sum(parts)
    return sorted(s for s in itertools.permutations(range(1, n + 1))
                  if _blockwise_increasing(s, parts))


# -- rationals --------------------------------------------------------------


def test_rationals_are_normalised():
    q = as_rational(" -6/4 ")
    assert (q.numerator, q.denominator) == (-3, 2)
    assert format_rational(Fraction(4, 2)) == "2/1"
    assert format_rational(Fraction(-6, 4)) == "-3/2"


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)


# -- multi-indices ------------------------------------------------------------


def test_multi_index_arithmetic():
    assert mi_add((1, 2), (0, 3)) == (1, 5)
    assert mi_sub((2, 1), (1, 0)) == (1, 1)
    assert mi_sub_or_none((1, 0), (0, 1)) is None
    with pytest.raises(NegativeIndexError):
        mi_sub((1, 0), (2, 0))
    with pytest.raises(ValueError):
        mi_add((1,), (1, 2))
    assert mi_unit(1, 3) == (0, 1, 0)
    with pytest.raises(IndexError):
        mi_unit(3, 3)
    assert mi_leq((0, 1), (1, 1)) and not mi_leq((2, 0), (1, 1))
    assert mi_below((1, 1)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_multi_binom_examples():
    assert multi_binom((2, 1), (1, 0)) == 2
    assert multi_binom((0, 0), (0, 0)) == 1
    assert multi_binom((1, 0), (0, 2)) == 0


def test_multi_binom_vandermonde():
    box = list(itertools.product(range(4), repeat=2))
    for n in box:
        for m in box:
            for k in itertools.product(range(7), repeat=2):
                lhs = sum(multi_binom(n, ell) * multi_binom(m, tuple(a - b for a, b in zip(k, ell)))
                          for ell in mi_below(k))
                assert lhs == multi_binom(tuple(a + b for a, b in zip(n, m)), k)


# -- permutations -------------------------------------------------------------


def test_shuffle_examples():
    assert shuffles(0, 3) == [(1, 2, 3)]
    assert shuffles(3, 0) == [(1, 2, 3)]
    assert shuffles(1, 1) == [(1, 2), (2, 1)]
    assert sorted(shuffles(2, 2)) == _filtered((2, 2))
    assert len(shuffles(2, 2)) == 6


@pytest.mark.parametrize("i,j", [(i, j) for i in range(5) for j in range(5)])
def test_shuffles_match_filtered_permutations(i, j):
    got = shuffles(i, j)
    assert len(got) == math.comb(i + j, i)
    assert sorted(got) == _filtered((i, j))
    assert got[0] == tuple(range(1, i + j + 1))


def test_multi_shuffle_examples():
    assert sorted(multi_shuffles(1, 1, 1)) == sorted(itertools.permutations((1, 2, 3)))
    assert sorted(multi_shuffles(2, 0, 1)) == sorted(shuffles(2, 1))
    assert len(multi_shuffles(1, 2, 1)) == 12
    assert sorted(multi_shuffles(1, 2, 1)) == _filtered((1, 2, 1))


@given(st.lists(st.integers(0, 3), min_size=1, max_size=4).filter(lambda p: sum(p) <= 6))
def test_multi_shuffle_count_is_multinomial(parts):
    got = multi_shuffles(*parts)
    expected = math.factorial(sum(parts))
    for p in parts:
        expected //= math.factorial(p)
    assert len(got) == len(set(got)) == expected
    assert all(_blockwise_increasing(s, parts) for s in got)


def test_perm_sign_examples():
    assert perm_sign((1, 2, 3)) == 1
    assert perm_sign((2, 1, 3)) == -1
    assert perm_sign((2, 3, 1)) == 1


def test_perm_sign_matches_inversions_and_is_multiplicative():
    perms = list(itertools.permutations(range(1, 5)))
    for s in perms:
        assert perm_sign(s) == (-1) ** _inversions(s)
    rng = random.Random(3)
    for _ in range(200):
        s, t = rng.choice(perms), rng.choice(perms)
        assert perm_sign(compose(s, t)) == perm_sign(s) * perm_sign(t)


def test_sort_sign():
    assert sort_sign((2, 0, 1)) == (1, (0, 1, 2))
    assert sort_sign((1, 0)) == (-1, (0, 1))
    assert sort_sign((1, 1))[0] == 0


# -- matrices -------------------------------------------------------------------


def test_kernel_examples():
    assert len(kernel_basis(Matrix.zeros(2, 2))) == 2
    assert kernel_basis(Matrix.identity(3)) == []
    (v,) = kernel_basis(Matrix([[1, 1], [2, 2]]))
    assert v[0] == -v[1] != 0


def test_solve_and_inconsistency():
    m = Matrix([[1, 2], [3, 4]])
    assert m.solve([5, 6]) == [Fraction(-4), Fraction(9, 2)]
    assert Matrix([[1, 1], [1, 1]]).solve([1, 2]) is None


def test_matmul_shape_check():
    with pytest.raises(ValueError):
        Matrix([[1, 2]]) @ Matrix([[1, 2]])


small = st.integers(-3, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_kernel_is_exact_and_independent(rows, cols, data):
    grid = [[Fraction(data.draw(small), data.draw(st.integers(1, 3))) for _ in range(cols)]
            for _ in range(rows)]
    m = Matrix(grid)
    ker = kernel_basis(m)
    assert m.rank() + len(ker) == cols
    for v in ker:
        assert not any(m.apply(v))
    assert rank_of_vectors(ker, cols) == len(ker)
