from __future__ import annotations

from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from binomial_betti.ideals import edge_binomial
from binomial_betti.polylinalg import (
    DEFAULT_PRIME,
    Monomial,
    PrimeField,
    fine_basis,
    intersect,
    is_prime,
    monomial_basis,
    normal_form,
    rank_mod_p,
    rref,
    span_reduce,
    sum_spaces,
    zero_subspace,
)

P = DEFAULT_PRIME


def dense_rank(rows: list[list[int]], p: int) -> int:
    """Textbook Gaussian elimination on dense lists (reference for the sparse code)."""
    A = [[x % p for x in r] for r in rows]
    rank, ncols = 0, len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((k for k in range(rank, len(A)) if A[k][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], p - 2, p)
        A[rank] = [x * inv % p for x in A[rank]]
        for k in range(len(A)):
            if k != rank and A[k][c]:
                f = A[k][c]
                A[k] = [(x - f * y) % p for x, y in zip(A[k], A[rank])]
        rank += 1
    return rank


def _row(poly: dict, basis) -> dict:
    index = {m: k for k, m in enumerate(basis)}
    return {index[m]: c % P for m, c in poly.items()}


def _times(m: tuple, poly: dict) -> dict:
    return {tuple(a + b for a, b in zip(m, k)): c for k, c in poly.items()}


# fields and monomials ------------------------------------------------------


def test_prime_field():
    F = PrimeField(7)
    assert F.inv(3) * 3 % 7 == 1
    assert F(-1) == 6
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    for bad in (2, 9, 1):
        with pytest.raises(ValueError):
            PrimeField(bad)
    assert is_prime(32003) and not is_prime(32001)


def test_monomial_gradings():
    m = Monomial((2, 0, 1, 1, 0, 3))  # x1^2 x3 y1 y3^3
    assert m.degree == 7
    assert m.multidegree == (3, 0, 4)
    assert m.bidegree == (3, 4)
    assert str(m) == "x1^2*x3*y1*y3^3"
    with pytest.raises(ValueError):
        Monomial((1, -1))
    with pytest.raises(ValueError):
        Monomial((1, 1, 1))


@pytest.mark.parametrize("n, d, count", [(1, 1, 2), (2, 2, 10), (7, 4, 2380)])
def test_monomial_basis_counts(n, d, count):
    B = monomial_basis(n, d)
    assert len(B) == count == comb(2 * n - 1 + d, d)
    assert len(set(B)) == count


def test_monomial_order_is_grevlex():
    # x1 > x2 > y1 > y2; in degree 2 grevlex puts x1^2 first and y2^2 last
    B = monomial_basis(2, 2)
    assert B[0] == (2, 0, 0, 0) and B[-1] == (0, 0, 0, 2)
    assert B.index((0, 1, 1, 0)) < B.index((1, 0, 0, 1))  # x2*y1 > x1*y2
    assert monomial_basis(1, 1) == ((1, 0), (0, 1))


@given(st.integers(1, 3), st.integers(0, 4))
def test_fine_bases_partition_the_slice(n, d):
    from binomial_betti.ideals import fine_blocks

    seen = [m for a, b in fine_blocks(n, d) for m in fine_basis(a, b)]
    assert sorted(seen) == sorted(monomial_basis(n, d))


# span_reduce --------------------------------------------------------------


def test_span_reduce_examples():
    B = monomial_basis(2, 2)
    assert span_reduce([[1] * 10, [1] * 10], B).dim == 1
    f = edge_binomial(2, 1, 2)
    assert span_reduce([_row(f, B)], B).dim == 1
    # x1 f, x2 f, y1 f, y2 f in degree 3: rank frozen from dense elimination
    B3 = monomial_basis(2, 3)
    rows = []
    for k in range(4):
        z = tuple(int(t == k) for t in range(4))
        rows.append(_row(_times(z, f), B3))
    W = span_reduce(rows, B3)
    dense = [[r.get(c, 0) for c in range(len(B3))] for r in rows]
    assert W.dim == dense_rank(dense, P) == 4


def _check_rref(W):
    seen = set()
    for r in W.rows:
        c = min(r)
        assert r[c] == 1
        assert c not in seen
        seen.add(c)
        for other in W.rows:
            if other is not r:
                assert c not in other
    assert list(W.pivots) == sorted(W.pivots)


rows_strategy = st.lists(st.lists(st.integers(0, 4), min_size=8, max_size=8), max_size=8)


@given(rows_strategy)
def test_rref_shape_and_rank(rows):
    W = span_reduce(rows, range(8), p=5)
    _check_rref(W)
    assert W.dim == dense_rank(rows, 5) if rows else W.dim == 0
    assert rank_mod_p([{c: x for c, x in enumerate(r) if x % 5} for r in rows], 5) == W.dim


@given(rows_strategy)
def test_rref_idempotent(rows):
    W = span_reduce(rows, range(8), p=5)
    again = span_reduce(list(W.rows), range(8), p=5)
    assert again.rows == W.rows


@given(rows_strategy, st.randoms())
def test_rref_independent_of_row_order(rows, rnd):
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    A = span_reduce(rows, range(8), p=5)
    B = span_reduce(shuffled, range(8), p=5)
    assert A.rows == B.rows


# intersections and normal forms ----------------------------------------------


@given(rows_strategy, rows_strategy)
def test_intersection_dimension_formula(ra, rb):
    A = span_reduce(ra, range(8), p=5)
    B = span_reduce(rb, range(8), p=5)
    M = intersect(A, B)
    _check_rref(M)
    assert M.dim + sum_spaces(A, B).dim == A.dim + B.dim
    for r in M.rows:
        assert A.contains(r) and B.contains(r)


def test_intersection_examples():
    A = span_reduce([[1, 0, 0], [0, 1, 1]], range(3))
    assert intersect(A, A).rows == A.rows
    B = span_reduce([[0, 0, 1]], range(3))
    assert intersect(A, B).dim == 0
    with pytest.raises(ValueError):
        intersect(A, span_reduce([[1, 0]], range(2)))


@given(rows_strategy, st.lists(st.integers(0, 4), min_size=8, max_size=8))
def test_normal_form_properties(rows, v):
    W = span_reduce(rows, range(8), p=5)
    nf = normal_form(v, W)
    assert not set(nf) & set(W.pivots)
    diff = {c: (x - nf.get(c, 0)) % 5 for c, x in enumerate(v)}
    diff = {c: x for c, x in diff.items() if x}
    assert W.contains(diff)
    assert (not nf) == W.contains({c: x for c, x in enumerate(v) if x % 5})
    # linearity
    nf2 = normal_form([2 * x for x in v], W)
    assert nf2 == {c: 2 * x % 5 for c, x in nf.items()}


def test_normal_form_examples():
    B = monomial_basis(2, 2)
    f = edge_binomial(2, 1, 2)
    W = span_reduce([_row(f, B)], B)
    x1y2 = {B.index((1, 0, 0, 1)): 1}
    x2y1 = {B.index((0, 1, 1, 0)): 1}
    # x2*y1 is the pivot (larger in grevlex), so both reduce to x1*y2
    assert normal_form(x2y1, W) == x1y2
    assert normal_form(x1y2, W) == x1y2
    assert normal_form(_row(f, B), W) == {}
    Z = zero_subspace(B)
    assert normal_form(x1y2, Z) == x1y2
    with pytest.raises(ValueError):
        normal_form([1, 2], W)


def test_rref_rows_sorted_by_pivot():
    rows = [{3: 1, 5: 2}, {1: 4, 3: 1}, {0: 1}]
    out = rref(rows, 7)
    assert [min(r) for r in out] == [0, 1, 3]
