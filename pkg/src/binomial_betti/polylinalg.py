"""Exact graded linear algebra over a prime field.

Vectors over a slice of ``R = k[x_1..x_n, y_1..y_n]`` are sparse rows: dicts
mapping a column index (position in an ordered monomial basis) to a nonzero
residue mod ``p``.  Monomials are exponent tuples of length ``2n`` laid out as
``(x_1, ..., x_n, y_1, ..., y_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from math import comb
from typing import Hashable, Iterable, Sequence

DEFAULT_PRIME = 32003

Row = dict  # column -> nonzero residue


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field GF(p) for an odd prime ``p``."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.p == 2 or not is_prime(self.p):
            raise ValueError(f"field modulus must be an odd prime, got {self.p}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, self.p - 2, self.p)

    def __call__(self, a: int) -> int:
        return a % self.p


# --------------------------------------------------------------------------
# monomials and gradings
# --------------------------------------------------------------------------


class Monomial(tuple):
    """Exponent vector over ``(x_1..x_n, y_1..y_n)`` with the three gradings."""

    __slots__ = ()

    def __new__(cls, exps: Iterable[int]):
        exps = tuple(exps)
        if len(exps) % 2:
            raise ValueError("exponent vector must have even length 2n")
        if any(e < 0 for e in exps):
            raise ValueError("exponents must be non-negative")
        return super().__new__(cls, exps)

    @property
    def n(self) -> int:
        return len(self) // 2

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def multidegree(self) -> tuple[int, ...]:
        return multidegree(self)

    @property
    def bidegree(self) -> tuple[int, int]:
        return bidegree(self)

    def __mul__(self, other):
        return Monomial(a + b for a, b in zip(self, other))

    def __str__(self):
        return monomial_str(self)


def multidegree(m: Sequence[int]) -> tuple[int, ...]:
    n = len(m) // 2
    return tuple(m[v] + m[n + v] for v in range(n))


def bidegree(m: Sequence[int]) -> tuple[int, int]:
    n = len(m) // 2
    return (sum(m[:n]), sum(m[n:]))


def monomial_str(m: Sequence[int]) -> str:
    n = len(m) // 2
    parts = []
    for k, e in enumerate(m):
        if e:
            name = f"x{k + 1}" if k < n else f"y{k - n + 1}"
            parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts) or "1"


def grevlex_key(m: Sequence[int]) -> tuple[int, ...]:
    """Sort key putting same-degree monomials in descending grevlex order.

    Variables are ranked x_1 > ... > x_n > y_1 > ... > y_n; the larger of two
    monomials is the one with the smaller exponent at the last differing
    variable.
    """
    return tuple(reversed(m))


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def monomial_basis(n: int, d: int) -> tuple[Monomial, ...]:
    """All degree-``d`` monomials in ``2n`` variables, grevlex-descending."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    mons = [Monomial(c) for c in _compositions(d, 2 * n)]
    mons.sort(key=grevlex_key)
    assert len(mons) == comb(2 * n - 1 + d, d) if n else True
    return tuple(mons)


@lru_cache(maxsize=None)
def fine_basis(a: tuple[int, ...], b: int) -> tuple[tuple[int, ...], ...]:
    """Monomials of vertex multidegree ``a`` and x-degree ``b``, grevlex-descending.

    A monomial in this block is fixed by the x-exponents ``p_v <= a_v``
    summing to ``b``; the y-exponents are ``a_v - p_v``.
    """
    out = []
    for xs in product(*(range(av + 1) for av in a)):
        if sum(xs) == b:
            out.append(xs + tuple(av - pv for av, pv in zip(a, xs)))
    out.sort(key=grevlex_key)
    return tuple(out)


# --------------------------------------------------------------------------
# sparse row arithmetic
# --------------------------------------------------------------------------


def _clean(row: Row, p: int) -> Row:
    out = {}
    for c, v in row.items():
        v %= p
        if v:
            out[c] = v
    return out


def _reduce_leading(row: Row, pivots: dict, p: int) -> Row:
    """Cancel the leading term of ``row`` against ``pivots`` until it is new."""
    while row:
        c = min(row)
        prow = pivots.get(c)
        if prow is None:
            return row
        f = row[c]
        for k, v in prow.items():
            nv = (row.get(k, 0) - f * v) % p
            if nv:
                row[k] = nv
            else:
                row.pop(k, None)
    return row


def echelon(rows: Iterable[Row], p: int) -> dict:
    """Row-echelon pivots ``{leading column: monic row}`` (not back-reduced)."""
    pivots: dict = {}
    for r in sorted((_clean(r, p) for r in rows), key=len):
        r = _reduce_leading(r, pivots, p)
        if r:
            c = min(r)
            inv = pow(r[c], p - 2, p)
            if inv != 1:
                r = {k: v * inv % p for k, v in r.items()}
            pivots[c] = r
    return pivots


def rank_mod_p(rows: Iterable[Row], p: int = DEFAULT_PRIME) -> int:
    """Rank of a sparse matrix over GF(p)."""
    return len(echelon((r for r in rows if r), p))


def _back_reduce(pivots: dict, p: int) -> list[Row]:
    done: dict = {}
    for c in sorted(pivots, reverse=True):
        r = dict(pivots[c])
        for k in sorted(k for k in r if k != c and k in done):
            f = r.get(k)
            if not f:
                continue
            for kk, vv in done[k].items():
                nv = (r.get(kk, 0) - f * vv) % p
                if nv:
                    r[kk] = nv
                else:
                    r.pop(kk, None)
        done[c] = r
    return [done[c] for c in sorted(done)]


def rref(rows: Iterable[Row], p: int) -> list[Row]:
    """Reduced row-echelon basis of the row span, ordered by pivot column."""
    return _back_reduce(echelon(rows, p), p)


# --------------------------------------------------------------------------
# graded subspaces
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedSubspace:
    """A subspace of one graded slice, stored as its reduced row-echelon basis.

    ``degree`` is any hashable grading key (an integer for the standard
    grading, ``(a, b)`` for a fine block).  ``basis`` is the ordered monomial
    basis of the ambient slice; ``rows`` are sparse rows over it.
    """

    degree: Hashable
    basis: tuple
    rows: tuple
    p: int = DEFAULT_PRIME
    pivots: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "pivots", tuple(min(r) for r in self.rows))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def ambient_dim(self) -> int:
        return len(self.basis)

    @cached_property
    def index(self) -> dict:
        return {m: k for k, m in enumerate(self.basis)}

    @cached_property
    def pivot_row(self) -> dict:
        return dict(zip(self.pivots, self.rows))

    @cached_property
    def standard_columns(self) -> tuple[int, ...]:
        """Columns that are not pivots: a basis of the quotient slice."""
        piv = set(self.pivots)
        return tuple(c for c in range(len(self.basis)) if c not in piv)

    def contains(self, v: Row) -> bool:
        return not normal_form(v, self)

    def dense_rows(self) -> list[list[int]]:
        out = []
        for r in self.rows:
            dense = [0] * len(self.basis)
            for c, v in r.items():
                dense[c] = v
            out.append(dense)
        return out


def span_reduce(
    vectors: Iterable[Row], basis: Sequence, degree: Hashable = None, p: int = DEFAULT_PRIME
) -> GradedSubspace:
    """Reduced row-echelon basis of the span of ``vectors``."""
    basis = tuple(basis)
    rows = []
    for v in vectors:
        if isinstance(v, (list, tuple)):
            v = {c: x for c, x in enumerate(v) if x % p}
        if any(c >= len(basis) or c < 0 for c in v):
            raise ValueError("vector has a column outside the basis")
        rows.append(v)
    return GradedSubspace(degree, basis, tuple(rref(rows, p)), p)


def _check_same(A: GradedSubspace, B: GradedSubspace) -> None:
    if A.basis != B.basis or A.p != B.p:
        raise ValueError("subspaces live on different bases or fields")


def normal_form(v: Row, W: GradedSubspace) -> Row:
    """The representative of ``v + W`` vanishing on every pivot column of ``W``."""
    p = W.p
    if isinstance(v, (list, tuple)):
        if len(v) != len(W.basis):
            raise ValueError("vector length does not match the basis")
        v = {c: x for c, x in enumerate(v)}
    out = _clean(v, p)
    if any(c >= len(W.basis) or c < 0 for c in out):
        raise ValueError("vector has a column outside the basis")
    prow = W.pivot_row
    for c in sorted(c for c in out if c in prow):
        f = out.get(c)
        if not f:
            continue
        for k, x in prow[c].items():
            nv = (out.get(k, 0) - f * x) % p
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return out


def sum_spaces(A: GradedSubspace, B: GradedSubspace) -> GradedSubspace:
    _check_same(A, B)
    return GradedSubspace(A.degree, A.basis, tuple(rref(list(A.rows) + list(B.rows), A.p)), A.p)


def left_kernel(rows: Sequence[Row], p: int) -> list[Row]:
    """Basis of ``{c : sum_k c_k rows[k] = 0}`` as sparse rows indexed by k."""
    m = len(rows)
    if m == 0:
        return []
    # augment with an identity block placed after every data column
    shift = 1 + max((max(r) for r in rows if r), default=-1)
    aug = []
    for k, r in enumerate(rows):
        a = dict(r)
        a[shift + k] = 1
        aug.append(a)
    out = []
    for r in rref(aug, p):
        if min(r) >= shift:
            out.append({c - shift: v for c, v in r.items()})
    return out


def intersect(A: GradedSubspace, B: GradedSubspace) -> GradedSubspace:
    """``A ∩ B`` from the kernel of ``[A; -B]``."""
    _check_same(A, B)
    p = A.p
    if not A.rows or not B.rows:
        return GradedSubspace(A.degree, A.basis, (), p)
    stacked = list(A.rows) + [{c: -v % p for c, v in r.items()} for r in B.rows]
    vecs = []
    na = len(A.rows)
    for ker in left_kernel(stacked, p):
        v: dict = {}
        for k, coef in ker.items():
            if k < na:
                for c, x in A.rows[k].items():
                    v[c] = (v.get(c, 0) + coef * x) % p
        vecs.append(v)
    return GradedSubspace(A.degree, A.basis, tuple(rref(vecs, p)), p)


def zero_subspace(basis: Sequence, degree: Hashable = None, p: int = DEFAULT_PRIME) -> GradedSubspace:
    return GradedSubspace(degree, tuple(basis), (), p)
