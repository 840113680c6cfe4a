"""Homogeneous ideals of ``R = k[x_1..x_n, y_1..y_n]`` presented slice by slice.

An :class:`IdealSpec` never stores a Gröbner basis; it answers "what is the
degree-``d`` piece" (:meth:`IdealSpec.slice`) or "what is the piece in fine
degree ``(a, b)``" (:meth:`IdealSpec.block`), where ``a`` is the vertex
multidegree and ``b`` the total x-degree.  Every ideal built here is
homogeneous for that fine grading, so the fine blocks are the unit of work
for the Koszul oracle.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Optional

from .graph import Graph, GraphError, completion_along_edge, is_cut_edge, make_edge
from .polylinalg import (
    DEFAULT_PRIME,
    GradedSubspace,
    fine_basis,
    intersect,
    left_kernel,
    monomial_basis,
    normal_form,
    rref,
)

Poly = dict  # exponent tuple -> coefficient


def edge_binomial(n: int, u: int, v: int) -> Poly:
    """``f_e = x_u y_v - x_v y_u`` for ``u < v`` in the ring with ``2n`` variables."""
    u, v = make_edge(u, v)
    a = [0] * (2 * n)
    a[u - 1] = 1
    a[n + v - 1] = 1
    b = [0] * (2 * n)
    b[v - 1] = 1
    b[n + u - 1] = 1
    return {tuple(a): 1, tuple(b): -1}


def fine_degree(m) -> tuple[tuple[int, ...], int]:
    n = len(m) // 2
    return tuple(m[v] + m[n + v] for v in range(n)), sum(m[:n])


def poly_fine_degree(f: Poly) -> tuple[tuple[int, ...], int]:
    degs = {fine_degree(m) for m, c in f.items() if c}
    if len(degs) != 1:
        raise ValueError("polynomial is zero or not homogeneous in the fine grading")
    return degs.pop()


def swap_xy(m):
    n = len(m) // 2
    return tuple(m[n:]) + tuple(m[:n])


def _mul(m1, m2):
    return tuple(a + b for a, b in zip(m1, m2))


def _sub_degree(a, b):
    d = tuple(x - y for x, y in zip(a, b))
    return d if min(d, default=0) >= 0 else None


def fine_blocks(n: int, d: int, vertices: Optional[Iterable[int]] = None, cap: Optional[int] = None):
    """Fine degrees ``(a, b)`` of standard degree ``d`` supported on ``vertices``.

    ``vertices`` are 1-based; ``cap`` bounds each ``a_v``.
    """
    vs = sorted(vertices) if vertices is not None else list(range(1, n + 1))
    top = d if cap is None else min(cap, d)
    for vals in product(range(top + 1), repeat=len(vs)):
        if sum(vals) != d:
            continue
        a = [0] * n
        for v, x in zip(vs, vals):
            a[v - 1] = x
        a = tuple(a)
        for b in range(d + 1):
            yield a, b


class IdealSpec:
    """Base class: a homogeneous ideal given by its graded pieces."""

    n: int
    p: int

    def __init__(self, n: int, p: int = DEFAULT_PRIME):
        if n < 1:
            raise ValueError("ring size must be positive")
        self.n = n
        self.p = p
        self._blocks: dict = {}
        self._slices: dict = {}

    # subclasses implement these two -------------------------------------
    def _compute_block(self, a, b) -> GradedSubspace:
        raise NotImplementedError

    def _compute_slice(self, d: int) -> GradedSubspace:
        raise NotImplementedError

    @property
    def support(self) -> frozenset:
        """Vertices whose variables occur in the ideal's generators."""
        raise NotImplementedError

    @property
    def swap_symmetric(self) -> bool:
        """Whether the swap ``x_i <-> y_i`` maps the ideal to itself."""
        raise NotImplementedError

    # public API -------------------------------------------------------
    def block(self, a, b) -> GradedSubspace:
        key = (tuple(a), b)
        got = self._blocks.get(key)
        if got is None:
            if len(key[0]) != self.n:
                raise ValueError("multidegree has the wrong length")
            if min(key[0], default=0) < 0 or b < 0 or b > sum(key[0]):
                got = GradedSubspace(key, (), (), self.p)
            else:
                got = self._compute_block(*key)
            self._blocks[key] = got
        return got

    def slice(self, d: int) -> GradedSubspace:
        """Degree-``d`` piece over the grevlex monomial basis of ``R_d``."""
        if d < 0:
            raise ValueError("degree must be non-negative")
        got = self._slices.get(d)
        if got is None:
            got = self._compute_slice(d)
            self._slices[d] = got
        return got

    def slice_from_blocks(self, d: int) -> GradedSubspace:
        """Degree-``d`` piece assembled from the fine blocks (cross-check of :meth:`slice`)."""
        basis = monomial_basis(self.n, d)
        index = {m: k for k, m in enumerate(basis)}
        rows = []
        for a, b in fine_blocks(self.n, d):
            blk = self.block(a, b)
            for r in blk.rows:
                rows.append({index[blk.basis[c]]: v for c, v in r.items()})
        rows.sort(key=min)
        return GradedSubspace(d, basis, tuple(rows), self.p)

    def block_dim(self, a, b) -> int:
        return self.block(a, b).dim


class GeneratorList(IdealSpec):
    """Ideal generated by finitely many fine-homogeneous polynomials."""

    def __init__(self, n: int, generators: Iterable, p: int = DEFAULT_PRIME, labels: Optional[Iterable] = None):
        super().__init__(n, p)
        gens = []
        for g in generators:
            g = {tuple(m): c % p for m, c in g.items() if c % p}
            if not g:
                continue
            if any(len(m) != 2 * n for m in g):
                raise ValueError("generator lives in a ring of the wrong size")
            gens.append(g)
        self.generators = tuple(gens)
        self.labels = tuple(labels) if labels is not None else tuple(range(len(gens)))
        self.gen_degrees = tuple(poly_fine_degree(g) for g in self.generators)

    @property
    def support(self) -> frozenset:
        out = set()
        for a, _ in self.gen_degrees:
            out.update(v + 1 for v, x in enumerate(a) if x)
        return frozenset(out)

    @property
    def swap_symmetric(self) -> bool:
        p = self.p
        for g in self.generators:
            sg = {swap_xy(m): c for m, c in g.items()}
            # swapped generator must be a scalar multiple of itself
            m0 = next(iter(g))
            if swap_xy(m0) not in g:
                return False
            lam = g[swap_xy(m0)] * pow(g[m0], p - 2, p) % p
            if any((sg.get(m, 0) - lam * c) % p for m, c in g.items()) or set(sg) != set(g):
                return False
        return True

    def _rows(self, basis, multipliers_for):
        index = {m: k for k, m in enumerate(basis)}
        rows = []
        for g, deg in zip(self.generators, self.gen_degrees):
            for mult in multipliers_for(deg):
                rows.append({index[_mul(mult, m)]: c for m, c in g.items()})
        return rows

    def _compute_block(self, a, b):
        basis = fine_basis(a, b)

        def mults(deg):
            rest = _sub_degree(a, deg[0])
            if rest is None or b - deg[1] < 0:
                return ()
            return fine_basis(rest, b - deg[1])

        return GradedSubspace((a, b), basis, tuple(rref(self._rows(basis, mults), self.p)), self.p)

    def _compute_slice(self, d):
        basis = monomial_basis(self.n, d)

        def mults(deg):
            e = sum(deg[0])
            return monomial_basis(self.n, d - e) if d >= e else ()

        return GradedSubspace(d, basis, tuple(rref(self._rows(basis, mults), self.p)), self.p)


class EdgeIdeal(GeneratorList):
    """``J_G`` for a graph ``G`` (or an explicit list of edges on ``n`` vertices)."""

    def __init__(self, G: Graph, edges: Optional[Iterable] = None, p: int = DEFAULT_PRIME):
        edges = tuple(G.edges if edges is None else sorted(make_edge(*e) for e in edges))
        self.graph = G
        self.edges = edges
        super().__init__(G.n, [edge_binomial(G.n, u, v) for u, v in edges], p, labels=edges)

    @property
    def swap_symmetric(self) -> bool:
        return True


class Intersection(IdealSpec):
    def __init__(self, A: IdealSpec, B: IdealSpec):
        if A.n != B.n or A.p != B.p:
            raise ValueError("ideals live in different rings")
        super().__init__(A.n, A.p)
        self.A, self.B = A, B

    @property
    def support(self):
        return self.A.support | self.B.support

    @property
    def swap_symmetric(self):
        return self.A.swap_symmetric and self.B.swap_symmetric

    def _compute_block(self, a, b):
        return intersect(self.A.block(a, b), self.B.block(a, b))

    def _compute_slice(self, d):
        return intersect(self.A.slice(d), self.B.slice(d))


class Colon(IdealSpec):
    """``A : <f>`` for a single fine-homogeneous quadric ``f``."""

    def __init__(self, A: IdealSpec, f: Poly):
        super().__init__(A.n, A.p)
        f = {tuple(m): c % A.p for m, c in f.items() if c % A.p}
        if sum(next(iter(f))) != 2:
            raise ValueError("colon is implemented only for degree-2 divisors")
        self.A, self.f = A, f
        self.f_degree = poly_fine_degree(f)

    @property
    def support(self):
        out = set(self.A.support)
        out.update(v + 1 for v, x in enumerate(self.f_degree[0]) if x)
        return frozenset(out)

    @property
    def swap_symmetric(self):
        fs = {swap_xy(m): c for m, c in self.f.items()}
        same = all((fs.get(m, 0) - c) % self.A.p == 0 for m, c in self.f.items())
        neg = all((fs.get(m, 0) + c) % self.A.p == 0 for m, c in self.f.items())
        return self.A.swap_symmetric and set(fs) == set(self.f) and (same or neg)

    def _solve(self, basis, target: GradedSubspace, degree):
        tindex = target.index
        images = []
        for m in basis:
            v = {}
            for fm, c in self.f.items():
                k = tindex[_mul(m, fm)]
                v[k] = (v.get(k, 0) + c) % self.p
            images.append(normal_form(v, target))
        return GradedSubspace(degree, tuple(basis), tuple(rref(left_kernel(images, self.p), self.p)), self.p)

    def _compute_block(self, a, b):
        fa, fb = self.f_degree
        target = self.A.block(tuple(x + y for x, y in zip(a, fa)), b + fb)
        return self._solve(fine_basis(a, b), target, (a, b))

    def _compute_slice(self, d):
        return self._solve(monomial_basis(self.n, d), self.A.slice(d + 2), d)


class Principal(GeneratorList):
    def __init__(self, n: int, f: Poly, p: int = DEFAULT_PRIME):
        super().__init__(n, [f], p)


def edge_ideal_spec(G: Graph, p: int = DEFAULT_PRIME) -> EdgeIdeal:
    return EdgeIdeal(G, p=p)


# --------------------------------------------------------------------------
# derived quantities
# --------------------------------------------------------------------------


def _times_linear_forms(spec: IdealSpec, a, b) -> list:
    """Rows spanning ``R_1 · I`` inside the fine block ``(a, b)``."""
    n = spec.n
    basis = fine_basis(a, b)
    index = {m: k for k, m in enumerate(basis)}
    rows = []
    for v in range(n):
        if a[v] == 0:
            continue
        a1 = tuple(x - (k == v) for k, x in enumerate(a))
        for is_x in (True, False):
            b1 = b - 1 if is_x else b
            if b1 < 0 or b1 > sum(a1):
                continue
            z = [0] * (2 * n)
            z[v if is_x else n + v] = 1
            lower = spec.block(a1, b1)
            for r in lower.rows:
                rows.append({index[_mul(lower.basis[c], z)]: x for c, x in r.items()})
    return rows


def minimal_generator_profile(spec: IdealSpec, d_max: int) -> dict:
    """``{d: dim I_d - dim R_1 I_{d-1}}`` for ``d <= d_max``, zero entries omitted."""
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    out = {}
    for d in range(d_max + 1):
        count = 0
        for a, b in fine_blocks(spec.n, d):
            blk = spec.block(a, b)
            if not blk.dim:
                continue
            count += blk.dim - len(rref(_times_linear_forms(spec, a, b), spec.p))
        if count:
            out[d] = count
    return out


def linear_extension_contained(spec: IdealSpec, d: int) -> bool:
    """Ideal property check: ``R_1 · I_d ⊆ I_{d+1}`` on the full slices."""
    lower, upper = spec.slice(d), spec.slice(d + 1)
    index = upper.index
    n = spec.n
    for r in lower.rows:
        for k in range(2 * n):
            z = tuple(int(j == k) for j in range(2 * n))
            v = {index[_mul(lower.basis[c], z)]: x for c, x in r.items()}
            if normal_form(v, upper):
                return False
    return True


def subspaces_equal(A: GradedSubspace, B: GradedSubspace) -> bool:
    return A.basis == B.basis and A.rows == B.rows


def verify_colon_completion(G: Graph, e, d_max: int, p: int = DEFAULT_PRIME) -> bool:
    """Check ``J_G : f_e = J_{G_e}`` slice by slice for ``d <= d_max``."""
    e = make_edge(*e)
    if G.has_edge(*e):
        raise GraphError(f"{e} is already an edge")
    Ge = G.add_edges([e])
    if not is_cut_edge(Ge, e):
        raise GraphError(f"{e} is not a cut edge of G ∪ {{e}}")
    colon = Colon(EdgeIdeal(G, p=p), edge_binomial(G.n, *e))
    target = EdgeIdeal(completion_along_edge(G, e), p=p)
    for d in range(d_max + 1):
        for a, b in fine_blocks(G.n, d):
            if not subspaces_equal(colon.block(a, b), target.block(a, b)):
                return False
    return True
