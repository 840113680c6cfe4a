"""Generator partitions ``I = J + K`` of binomial edge ideals and where they split.

For a partition of the generators of ``I`` into those of ``J`` and ``K`` the
mapping cone of ``J ∩ K -> J ⊕ K`` gives

    beta_{i,j}(I) <= beta_{i,j}(J) + beta_{i,j}(K) + beta_{i-1,j}(J ∩ K).

The residual ``delta(i, j)`` is the right side minus the left.  The
splitting is complete when ``delta`` vanishes everywhere and an
``(r, s)``-splitting when it vanishes wherever ``i >= r`` or ``j >= i + s``.
Everything here is computed on a finite window; validity outside it is never
claimed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .formulas import betti_linear_strand, free_cut_endpoint
from .graph import (
    Graph,
    GraphError,
    completion_along_edge,
    delete_edge,
    is_cut_edge,
    is_triangle_free,
    largest_clique_containing,
    make_edge,
    s_partition_subgraphs,
)
from .ideals import EdgeIdeal, IdealSpec, Intersection, _mul, edge_binomial, fine_blocks
from .koszul import BettiTable, betti_table, betti_table_multigraded
from .polylinalg import DEFAULT_PRIME, PrimeField, span_reduce

KINDS = ("edge", "vertex", "custom")
GRADINGS = ("standard", "Nn")


# --------------------------------------------------------------------------
# partitions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorPartition:
    """``J_G = J + K`` with the edges of ``G`` split between ``J`` and ``K``."""

    graph: Graph
    J_edges: tuple
    K_edges: tuple
    kind: str
    pivot: object = None  # the edge for "edge", the vertex for "vertex"
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        J, K = set(self.J_edges), set(self.K_edges)
        if len(J) != len(self.J_edges) or len(K) != len(self.K_edges):
            raise GraphError("a generator is listed twice")
        if J & K:
            raise GraphError(f"generators {sorted(J & K)} lie on both sides")
        if J | K != set(self.graph.edges):
            raise GraphError("the two sides do not make up the generators of J_G")

    @property
    def I(self) -> EdgeIdeal:
        return _spec(self.graph, None, self.p)

    @property
    def J(self) -> EdgeIdeal:
        return _spec(self.graph, self.J_edges, self.p)

    @property
    def K(self) -> EdgeIdeal:
        return _spec(self.graph, self.K_edges, self.p)

    @property
    def JK(self) -> Intersection:
        key = ("meet", self.graph.n, tuple(sorted(self.J_edges)), tuple(sorted(self.K_edges)), self.p)
        got = _SPECS.get(key)
        if got is None:
            got = Intersection(self.J, self.K)
            _SPECS[key] = got
        return got

    def describe(self) -> str:
        if self.kind == "edge":
            return f"edge splitting at {self.pivot}"
        if self.kind == "vertex":
            return f"s-partition at vertex {self.pivot}"
        return "custom partition"


_SPECS: dict = {}


def _spec(G: Graph, edges: Optional[tuple], p: int) -> EdgeIdeal:
    # one spec object per edge set, so block caches are shared between reports
    key = (G.n, G.edges if edges is None else tuple(sorted(edges)), p)
    got = _SPECS.get(key)
    if got is None:
        got = EdgeIdeal(G, key[1], p)
        _SPECS[key] = got
    return got


def edge_splitting(G: Graph, e, p: int = DEFAULT_PRIME) -> GeneratorPartition:
    """``J = J_{G∖e}``, ``K = <f_e>``."""
    e = make_edge(*e)
    if not G.has_edge(*e):
        raise GraphError(f"{e} is not an edge of the graph")
    rest = tuple(f for f in G.edges if f != e)
    return GeneratorPartition(G, rest, (e,), "edge", e, p)


def s_partition(G: Graph, s: int, p: int = DEFAULT_PRIME) -> GeneratorPartition:
    """``J`` = star at ``s``, ``K = J_{G∖s}``."""
    G1, G2 = s_partition_subgraphs(G, s)
    return GeneratorPartition(G, G1.edges, G2.edges, "vertex", s, p)


def custom_partition(G: Graph, J_edges: Iterable, p: int = DEFAULT_PRIME) -> GeneratorPartition:
    """Any bipartition: ``J_edges`` on one side, the remaining edges on the other."""
    J = [make_edge(*e) for e in J_edges]
    for e in J:
        if not G.has_edge(*e):
            raise GraphError(f"{e} is not an edge of the graph")
    chosen = set(J)
    K = tuple(e for e in G.edges if e not in chosen)
    return GeneratorPartition(G, tuple(sorted(J)), K, "custom", None, p)


def parse_bipartition(text: str, G: Graph, p: int = DEFAULT_PRIME) -> GeneratorPartition:
    """Bipartition file: one ``u v`` edge of the ``J`` side per line; ``#`` comments allowed."""
    J = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v'")
        try:
            J.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphError(f"line {lineno}: vertices must be integers") from None
    return custom_partition(G, J, p)


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------


def _region(r: int, s: int, i: int, j: int) -> bool:
    return i >= r or j >= i + s


@dataclass
class SplittingReport:
    partition: GeneratorPartition
    window: tuple
    TI: BettiTable
    TJ: BettiTable
    TK: BettiTable
    TJK: BettiTable
    delta: dict  # nonzero residuals only
    complete: bool
    minimal_pairs: list  # Pareto-minimal (r, s) valid on the window
    guarantee: Optional[tuple]
    guarantee_reason: str
    guarantee_holds: Optional[bool]
    window_limited: bool
    notes: list = field(default_factory=list)

    def predicted(self, i: int, j: int) -> int:
        return self.TJ[i, j] + self.TK[i, j] + self.TJK[i - 1, j]

    def valid_pair(self, r: int, s: int) -> bool:
        return _valid(self.delta, r, s)

    @property
    def inequality_holds(self) -> bool:
        return all(v >= 0 for v in self.delta.values())

    def counterexample(self) -> Optional[tuple]:
        """The first ``(i, j)`` (by ``i`` then ``j``) where the identity fails."""
        return min(self.delta, default=None)

    def summary(self) -> str:
        scope = " within the window" if self.window_limited else ""
        if self.complete:
            head = f"complete{scope}"
        else:
            cells = ", ".join(
                f"({i},{j}): {self.TI[i, j]} ≠ {self.TJ[i, j]}+{self.TK[i, j]}+{self.TJK[i - 1, j]}"
                for i, j in sorted(self.delta)
            )
            head = f"not complete; counterexample{'s' if len(self.delta) > 1 else ''} {cells}"
        if self.guarantee is not None:
            r, s = self.guarantee
            head += f"; guaranteed ({r},{s})"
        return head


def _valid(delta: dict, r: int, s: int) -> bool:
    return not any(_region(r, s, i, j) for (i, j) in delta)


def pareto_pairs(delta: dict, i_max: int, j_max: int) -> list:
    """Componentwise-minimal ``(r, s)`` with ``0 <= r <= i_max + 1``, ``0 <= s <= j_max + 1``
    such that ``delta`` vanishes on ``{i >= r} ∪ {j >= i + s}``."""
    out = []
    best = j_max + 2
    for r in range(i_max + 2):
        s = next((s for s in range(j_max + 2) if _valid(delta, r, s)), None)
        if s is not None and s < best:
            out.append((r, s))
            best = s
        if best == 0:
            break
    return out


def guarantee_for(partition: GeneratorPartition) -> tuple[Optional[tuple], str]:
    """The ``(r, s)`` known to hold for this kind of partition, with the reason."""
    G = partition.graph
    if partition.kind == "edge":
        e = partition.pivot
        v = free_cut_endpoint(G, e)
        if v is not None:
            why = "pendant edge" if G.degree(v) == 1 else f"cut edge, vertex {v} free after removal"
            return (0, 0), why
        return None, "no guarantee applies (not a cut edge with a free endpoint)"
    if partition.kind == "vertex":
        s = partition.pivot
        if is_triangle_free(G):
            return (0, 0), "s-partition of a triangle-free graph"
        c = largest_clique_containing(G, s)
        return (c, 4), f"s-partition, largest clique through {s} has size {c}"
    return None, "custom partition"


_TABLES: dict = {}


def _table(spec: IdealSpec, window: tuple) -> BettiTable:
    # specs are shared through _SPECS, so identity is a sound cache key
    key = (id(spec), tuple(window))
    got = _TABLES.get(key)
    if got is None:
        got = betti_table(spec, tuple(window))
        _TABLES[key] = got
    return got


def four_tables(partition: GeneratorPartition, window: tuple) -> tuple:
    return tuple(_table(spec, window) for spec in (partition.I, partition.J, partition.K, partition.JK))


def default_split_window(partition: GeneratorPartition) -> tuple[int, int]:
    # every table vanishes beyond j = 2 |support| (multidegrees are capped at 2)
    m = 2 * len(partition.I.support)
    return m, m


def residuals(TI: BettiTable, TJ: BettiTable, TK: BettiTable, TJK: BettiTable, i_max: int, j_max: int) -> dict:
    out = {}
    for i in range(i_max + 1):
        for j in range(j_max + 1):
            d = TJ[i, j] + TK[i, j] + TJK[i - 1, j] - TI[i, j]
            if d:
                out[(i, j)] = d
    return out


def classify(
    partition: GeneratorPartition,
    window: Optional[tuple] = None,
    field: Optional[PrimeField] = None,
    tables: Optional[tuple] = None,
) -> SplittingReport:
    """Four Betti tables, residuals, completeness, minimal ``(r, s)`` and the known guarantee."""
    if field is not None and field.p != partition.p:
        raise ValueError("the partition was built over a different prime")
    window = tuple(window) if window is not None else default_split_window(partition)
    i_max, j_max = window
    TI, TJ, TK, TJK = tables if tables is not None else four_tables(partition, window)
    delta = residuals(TI, TJ, TK, TJK, i_max, j_max)
    notes = []
    if any(v < 0 for v in delta.values()):
        notes.append("mapping-cone inequality violated; the tables are inconsistent")
    guarantee, why = guarantee_for(partition)
    holds = None if guarantee is None else _valid(delta, *guarantee)
    limited = any(T.truncated for T in (TI, TJ, TK, TJK))
    return SplittingReport(
        partition,
        window,
        TI,
        TJ,
        TK,
        TJK,
        delta,
        not delta,
        pareto_pairs(delta, i_max, j_max),
        guarantee,
        why,
        holds,
        limited,
        notes,
    )


# --------------------------------------------------------------------------
# vanishing hypotheses
# --------------------------------------------------------------------------


@dataclass
class VanishingReport:
    grading: str
    window: tuple
    failures: set  # (i, deg) where the hypothesis at homological index i - 1 fails
    certified: set  # standard (i, j) cells where the identity is forced
    certified_pairs: list  # Pareto-minimal (r, s) whose whole region is forced
    observed_pairs: list  # Pareto-minimal (r, s) with delta = 0 on the region
    delta: dict

    def hypothesis_holds(self, i: int, deg) -> bool:
        """``beta_{i-1,deg}(J ∩ K) > 0`` implies ``beta_{i-1,deg}(J) = beta_{i-1,deg}(K) = 0``."""
        return (i, deg) not in self.failures

    @property
    def consistent(self) -> bool:
        """Certified cells carry zero residual (the hypotheses are sufficient)."""
        return all(c not in self.delta for c in self.certified)


def _failures(BJ: dict, BK: dict, BJK: dict) -> set:
    out = set()
    for (i, deg), v in BJK.items():
        if v and (BJ.get((i, deg), 0) or BK.get((i, deg), 0)):
            out.add((i + 1, deg))
    return out


def _graded(spec: IdealSpec, window: tuple, grading: str) -> dict:
    if grading == "standard":
        return dict(_table(spec, window).entries)
    return {k: v for k, v in betti_table_multigraded(spec, window, grading="Nn").items() if v}


def check_vanishing_hypotheses(
    partition: GeneratorPartition,
    window: Optional[tuple] = None,
    field: Optional[PrimeField] = None,
    grading: str = "standard",
    report: Optional[SplittingReport] = None,
) -> VanishingReport:
    """Where the vanishing conditions force the splitting identity.

    The identity at ``(i, deg)`` is forced when the condition holds at both
    ``(i, deg)`` and ``(i + 1, deg)``.  A pair ``(r, s)`` is certified when the
    condition holds on its whole region inside the window.  In the ``Nn``
    grading a standard cell ``(i, j)`` is certified when every multidegree of
    total ``j`` is.
    """
    if grading not in GRADINGS:
        raise ValueError(f"grading must be one of {GRADINGS}")
    if field is not None and field.p != partition.p:
        raise ValueError("the partition was built over a different prime")
    window = tuple(window) if window is not None else default_split_window(partition)
    i_max, j_max = window
    if report is None:
        report = classify(partition, window)
    BJ, BK, BJK = (_graded(S, window, grading) for S in (partition.J, partition.K, partition.JK))
    fails = _failures(BJ, BK, BJK)

    def total(deg):
        return deg if grading == "standard" else sum(deg)

    bad_cells = {(i, total(deg)) for i, deg in fails}
    certified = set()
    for i in range(i_max + 1):
        for j in range(j_max + 1):
            if (i, j) not in bad_cells and (i + 1, j) not in bad_cells:
                certified.add((i, j))
    # a region is certified when every cell of it inside the window is
    uncertified = {(i, j): 1 for i in range(i_max + 1) for j in range(j_max + 1) if (i, j) not in certified}
    return VanishingReport(
        grading,
        window,
        fails,
        certified,
        pareto_pairs(uncertified, i_max, j_max),
        report.minimal_pairs,
        report.delta,
    )


# --------------------------------------------------------------------------
# the intersection for s-partitions and cut edges
# --------------------------------------------------------------------------


def _poly_row(poly: dict, index: dict) -> dict:
    return {index[m]: c for m, c in poly.items()}


def intersection_degree3_basis(G: Graph, s: int, p: int = DEFAULT_PRIME, verify: bool = True) -> list:
    """``x_s f_{a,b}`` and ``y_s f_{a,b}`` over the edges ``{a, b}`` inside ``N(s)``.

    With ``verify`` the list is checked to be a basis of the degree-3 piece
    of ``J_{G_1} ∩ J_{G_2}``.
    """
    part = s_partition(G, s, p)
    n = G.n
    nb = G.neighbors(s)
    out = []
    for a, b in G.edges:
        if a in nb and b in nb:
            f = edge_binomial(n, a, b)
            for name, k in (("x", s - 1), ("y", n + s - 1)):
                z = tuple(int(t == k) for t in range(2 * n))
                out.append((f"{name}{s}*f({a},{b})", {_mul(m, z): c for m, c in f.items()}))
    if verify:
        target = part.JK.slice(3)
        index = target.index
        span = span_reduce((_poly_row(g, index) for _, g in out), target.basis, 3, p)
        if span.dim != len(out):
            raise ArithmeticError("the degree-3 elements are linearly dependent")
        if span.rows != target.rows:
            raise ArithmeticError("the degree-3 elements do not span the intersection")
    return out


def intersection_linear_strand(G: Graph, s: int) -> list[int]:
    """``beta_{i,i+3}(J_{G_1} ∩ J_{G_2}) = 2 beta_{i,i+2}(J_{G'}) + beta_{i-1,i+1}(J_{G'})``, ``G'`` induced on ``N(s)``."""
    G._check_vertex(s)
    if G.degree(s) == 0:
        raise GraphError(f"vertex {s} is isolated")
    L = betti_linear_strand(G.induced_subgraph(G.neighbors(s)))
    if not L or not any(L):
        return []
    out = [2 * L[i] + (L[i - 1] if i else 0) for i in range(len(L))] + [L[-1]]
    while out and out[-1] == 0:
        out.pop()
    return out


def intersection_via_colon(partition: GeneratorPartition, window: tuple) -> BettiTable:
    """Table of ``J_{G∖e} ∩ <f_e>`` as ``J_{(G∖e)_e}`` shifted by 2 (cut edges only).

    Used only to cross-check the direct subspace intersection.
    """
    if partition.kind != "edge":
        raise GraphError("the colon shift applies to edge splittings")
    G, e = partition.graph, partition.pivot
    if not is_cut_edge(G, e):
        raise GraphError(f"{e} is not a cut edge")
    He = completion_along_edge(delete_edge(G, e), e)
    i_max, j_max = window
    T = betti_table(EdgeIdeal(He, p=partition.p), (i_max, max(j_max - 2, 0)))
    out = T.shift(0, 2)
    out.i_max, out.j_max, out.truncated = i_max, j_max, T.truncated
    return out


def check_intersection_shift(partition: GeneratorPartition, d_max: int) -> bool:
    """Block by block up to degree ``d_max``: ``(J_{G∖e} ∩ <f_e>)_{a,b} = f_e · (J_{(G∖e)_e})_{a-e_u-e_v, b-1}``."""
    if partition.kind != "edge":
        raise GraphError("the colon shift applies to edge splittings")
    G, (u, v) = partition.graph, partition.pivot
    if not is_cut_edge(G, (u, v)):
        raise GraphError(f"{(u, v)} is not a cut edge")
    n, p = G.n, partition.p
    JK = partition.JK
    He = EdgeIdeal(completion_along_edge(delete_edge(G, (u, v)), (u, v)), p=p)
    f = edge_binomial(n, u, v)
    for d in range(d_max + 1):
        for a, b in fine_blocks(n, d, sorted(JK.support)):
            direct = JK.block(a, b)
            a0 = list(a)
            a0[u - 1] -= 1
            a0[v - 1] -= 1
            if min(a0) < 0 or b < 1 or b - 1 > d - 2:
                rows = []
            else:
                low = He.block(tuple(a0), b - 1)
                index = {m: k for k, m in enumerate(direct.basis)}
                rows = []
                for r in low.rows:
                    acc: dict = {}
                    for c, x in r.items():
                        for m, y in f.items():
                            k = index[_mul(low.basis[c], m)]
                            acc[k] = (acc.get(k, 0) + x * y) % p
                    rows.append({k: x for k, x in acc.items() if x})
            shifted = span_reduce(rows, direct.basis, (a, b), p)
            if shifted.rows != direct.rows:
                return False
    return True
