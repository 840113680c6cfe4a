"""Closed forms, recursions and bounds for Betti numbers of binomial edge ideals.

Every function here works from the graph alone (or from Betti tables handed
to it).  The Koszul oracle is only consulted as the last resort of
:func:`betti_by_formula`, for graphs no formula covers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Optional

from .graph import (
    Graph,
    GraphError,
    clique_f_vector,
    completion_along_edge,
    connected_components,
    count_caterpillars,
    decompose_at_free_vertex,
    delete_edge,
    is_cut_edge,
    is_free_vertex,
    is_tree,
    make_edge,
    maximal_cliques,
)
from .koszul import BettiTable, ideal_table, quotient_table
from .polylinalg import DEFAULT_PRIME


def binom(a: int, b: int) -> int:
    """``C(a, b)``, taken to be 0 when ``b < 0``, ``a < 0`` or ``a < b``."""
    if a < 0 or b < 0 or a < b:
        return 0
    return comb(a, b)


@dataclass
class FormulaResult:
    value: object
    provenance: str
    hypotheses_checked: list = field(default_factory=list)


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------


def betti_complete_graph(n: int) -> BettiTable:
    """``beta_{i,i+2}(J_{K_n}) = (i+1) C(n, i+2)``; the resolution is linear."""
    if n < 2:
        raise ValueError("the complete graph needs n >= 2")
    return BettiTable({(i, i + 2): (i + 1) * comb(n, i + 2) for i in range(n - 1)})


def betti_linear_strand(G: Graph) -> list[int]:
    """``[beta_{i,i+2}(J_G)]`` from the clique complex: ``(i+1) f_{i+1}``."""
    f = clique_f_vector(G) if G.edges else (G.n,)
    return [(i + 1) * f[i + 1] for i in range(len(f) - 1)]


def betti_star(n: int) -> BettiTable:
    """Star ``S_n`` on ``n`` vertices: ``beta_{0,2} = n-1`` and ``beta_{i,i+3} = i C(n, i+2)``."""
    if n < 2:
        raise ValueError("the star needs n >= 2")
    out = {(0, 2): n - 1}
    for i in range(1, n - 1):
        out[(i, i + 3)] = i * comb(n, i + 2)
    return BettiTable(out)


def betti_product_decomposable(T1: BettiTable, T2: BettiTable) -> BettiTable:
    """Product of the Betti polynomials of two quotient tables ``R/J_{G1}``, ``R/J_{G2}``."""
    for T in (T1, T2):
        if T.truncated:
            raise ValueError("cannot multiply truncated Betti tables")
        if T[0, 0] != 1:
            raise ValueError("expected the table of a quotient R/I (with beta_{0,0} = 1)")
    out: dict = {}
    for (i1, j1), v1 in T1.entries.items():
        for (i2, j2), v2 in T2.entries.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + v1 * v2
    return BettiTable(out)


# --------------------------------------------------------------------------
# family recognition
# --------------------------------------------------------------------------


def _core(G: Graph) -> Graph:
    """``G`` without isolated vertices, relabelled densely."""
    return G.compact()[0]


def is_complete_graph(G: Graph) -> bool:
    H = _core(G)
    return bool(H.edges) and H.num_edges == H.n * (H.n - 1) // 2


def star_center(G: Graph) -> Optional[int]:
    """The centre of ``G`` (original label) if its edges form a star with >= 2 edges."""
    ends = G.non_isolated()
    if len(ends) < 3:
        return None
    for v in ends:
        if G.degree(v) == len(ends) - 1 and G.num_edges == len(ends) - 1:
            return v
    return None


# --------------------------------------------------------------------------
# cut edges and the dispatching engine
# --------------------------------------------------------------------------


Provider = Callable[[Graph], BettiTable]


def free_cut_endpoint(G: Graph, e) -> Optional[int]:
    """Endpoint ``v`` of the cut edge ``e`` that is free in ``G ∖ e`` (prefers a pendant one)."""
    u, v = make_edge(*e)
    if not G.has_edge(u, v) or not is_cut_edge(G, (u, v)):
        return None
    H = delete_edge(G, (u, v))
    cands = sorted((u, v), key=lambda w: (G.degree(w) != 1, w))
    for w in cands:
        if is_free_vertex(H, w):
            return w
    return None


def cut_edge_recursion(G: Graph, e, provider: Optional[Provider] = None) -> FormulaResult:
    """Betti table of ``J_G`` from ``G ∖ e`` and ``(G ∖ e)_e``.

    Needs ``e`` to be a cut edge with an endpoint that is free in ``G ∖ e``;
    then ``beta_{i,j}(J_G) = beta_{i,j}(J_{G∖e}) + beta_{i-1,j-2}(J_{(G∖e)_e})``
    for ``i >= 1`` and ``beta_{0,2} = |E(G)|``.
    """
    e = make_edge(*e)
    if not G.has_edge(*e):
        raise GraphError(f"{e} is not an edge")
    if not is_cut_edge(G, e):
        raise GraphError(f"hypothesis failed: {e} is not a cut edge")
    v = free_cut_endpoint(G, e)
    if v is None:
        raise GraphError(f"hypothesis failed: no endpoint of {e} is free in G minus the edge")
    provider = provider or betti_table_by_formula
    H = delete_edge(G, e)
    He = completion_along_edge(H, e)
    TH = provider(H)
    THe = provider(He)
    if TH.truncated or THe.truncated:
        raise ValueError("sub-tables must be untruncated")
    out = {(0, 2): G.num_edges}
    for (i, j), val in TH.entries.items():
        if i >= 1:
            out[(i, j)] = out.get((i, j), 0) + val
    for (i, j), val in THe.entries.items():
        out[(i + 1, j + 2)] = out.get((i + 1, j + 2), 0) + val
    checks = [f"{e} is a cut edge", f"vertex {v} is free in G minus {e}"]
    return FormulaResult(BettiTable(out), "cut-edge recursion", checks)


_MEMO: dict = {}


def _oracle_table(G: Graph, p: int) -> BettiTable:
    from .ideals import EdgeIdeal
    from .koszul import betti_table

    H = _core(G)
    return betti_table(EdgeIdeal(H, p=p))


def betti_by_formula(G: Graph, allow_oracle: bool = True, p: int = DEFAULT_PRIME, memo: Optional[dict] = None) -> FormulaResult:
    """Betti table of ``J_G`` by the first applicable rule.

    Order: edgeless, disjoint union, complete graph, star, gluing at a free
    vertex, cut edge with a free endpoint, then (if allowed) the oracle.
    Results are memoised on the graph's canonical form.
    """
    memo = _MEMO if memo is None else memo
    key = (G.canonical_key(), allow_oracle, p)
    got = memo.get(key)
    if got is not None:
        return got
    res = _dispatch(G, allow_oracle, p, memo)
    memo[key] = res
    return res


def _dispatch(G: Graph, allow_oracle: bool, p: int, memo: dict) -> FormulaResult:
    H = _core(G)
    if not G.edges:
        return FormulaResult(BettiTable({}), "edgeless graph", [])

    def sub(X: Graph) -> BettiTable:
        return betti_by_formula(X, allow_oracle, p, memo).value

    comps = [c for c in connected_components(H) if len(c) > 1]
    if len(comps) > 1:
        Q = quotient_table(BettiTable({}))
        for c in comps:
            Q = betti_product_decomposable(Q, quotient_table(sub(H.induced_subgraph(c))))
        return FormulaResult(ideal_table(Q), "disjoint union: product of Betti polynomials", [f"{len(comps)} components"])
    if is_complete_graph(H):
        return FormulaResult(betti_complete_graph(H.n), "complete graph closed form", ["graph is complete"])
    if star_center(H) is not None:
        return FormulaResult(betti_star(H.n), "star closed form", ["graph is a star"])
    dec = decompose_at_free_vertex(H)
    if dec is not None:
        G1, G2, v = dec
        Q = betti_product_decomposable(quotient_table(sub(G1)), quotient_table(sub(G2)))
        return FormulaResult(ideal_table(Q), "decomposable graph: product of Betti polynomials", [f"glued at free vertex {v}"])
    for e in H.edges:
        if free_cut_endpoint(H, e) is not None:
            return cut_edge_recursion(H, e, sub)
    if not allow_oracle:
        raise GraphError("no formula applies to this graph")
    return FormulaResult(_oracle_table(H, p), "Koszul oracle", [])


def betti_table_by_formula(G: Graph) -> BettiTable:
    return betti_by_formula(G).value


def formula_family(G: Graph) -> Optional[str]:
    """Name of the formula family that covers ``G`` without any oracle call, if one does."""
    try:
        return betti_by_formula(G, allow_oracle=False).provenance
    except GraphError:
        return None


# --------------------------------------------------------------------------
# trees and tree-like graphs
# --------------------------------------------------------------------------


def _require_tree(T: Graph) -> None:
    if not is_tree(T):
        raise GraphError("graph is not a tree")


def find_clique_sum(G: Graph, a: int, m: int) -> frozenset:
    """The vertex set of ``K_m`` when ``G = T ∪_a K_m``; raises if ``G`` is not of that shape.

    The clique must contain ``a``, its other vertices must have no
    neighbours outside it, and removing them must leave a tree through ``a``.
    """
    G._check_vertex(a)
    if m < 1:
        raise GraphError("m must be positive")
    if G.non_isolated() != tuple(G.vertices) and G.n > 1:
        raise GraphError("graph has isolated vertices")
    if m == 1:
        cands = [frozenset([a])]
    else:
        cands = sorted((c for c in maximal_cliques(G) if a in c and len(c) == m), key=sorted)
    for C in cands:
        if any(G.closed_neighborhood(w) != C for w in C if w != a):
            continue
        rest = [v for v in G.vertices if v not in C or v == a]
        T = G.induced_subgraph(rest)
        if len(rest) == 1:
            return C
        T2, _ = T.compact()
        if is_tree(T2) and T2.n == len(rest):
            return C
    raise GraphError(f"graph is not a tree clique-summed with K_{m} at vertex {a}")


def beta1_tree_clique_sum(G: Graph, a: int, m: int) -> int:
    """``beta_1(J_G)`` for ``G = T ∪_a K_m`` (six-term formula)."""
    C = find_clique_sum(G, a, m)
    n = G.n
    da = G.degree(a)
    return (
        binom(n - 1, 2)
        + 2 * binom(m, 3)
        + sum(binom(G.degree(w), 3) for w in G.vertices if w not in C)
        + binom(da - m + 1, 3)
        + (n - m - 1) * binom(m - 1, 2)
        + (m - 1) * binom(da - m + 1, 2)
    )


def beta1_tree(T: Graph) -> int:
    """``beta_1(J_T) = C(n-1, 2) + sum_w C(deg w, 3)``."""
    _require_tree(T)
    return binom(T.n - 1, 2) + sum(binom(T.degree(w), 3) for w in T.vertices)


def beta2_tree(T: Graph) -> int:
    """``beta_2(J_T)``, including the double-fork count ``P(T)``."""
    _require_tree(T)
    n = T.n
    return (
        binom(n - 1, 3)
        + 2 * sum(binom(T.degree(w), 4) for w in T.vertices)
        + sum(binom(T.degree(w), 3) * (1 + (n - 1 - T.degree(w))) for w in T.vertices)
        + count_caterpillars(T)
    )


def betti_third_row_tree(T: Graph, k: int) -> int:
    """``beta_{k,k+3}(J_T) = sum_w k C(deg w + 1, k + 2)`` for ``k >= 2``."""
    if k < 2:
        raise ValueError("the third-row formula needs k >= 2")
    _require_tree(T)
    return sum(k * binom(T.degree(w) + 1, k + 2) for w in T.vertices)


# --------------------------------------------------------------------------
# regularity and projective dimension from a splitting
# --------------------------------------------------------------------------


@dataclass
class RegPdBounds:
    m: Optional[int]
    p: Optional[int]
    p_with_pd_I: Optional[int]  # variant using pd(I) in place of pd(K); None without T_I
    reg_conclusion: Optional[int]  # reg(I) when m >= s, else None (inconclusive)
    pd_conclusion: Optional[int]
    variants_disagree: bool


def _mx(*vals):
    vals = [v for v in vals if v is not None]
    return max(vals) if vals else None


def splitting_reg_pd_bounds(
    TJ: BettiTable, TK: BettiTable, TJK: BettiTable, r: int, s: int, TI: Optional[BettiTable] = None
) -> RegPdBounds:
    """reg/pd of ``I = J + K`` from an ``(r, s)``-Betti splitting.

    ``m = max{reg J, reg K, reg(J∩K) - 1}`` and ``p = max{pd J, pd K, pd(J∩K) + 1}``;
    ``reg I = m`` is concluded when ``m >= s`` and ``pd I = p`` when ``p >= r``.
    With ``TI`` given, the variant ``max{pd I, pd J, pd(J∩K) + 1}`` is also
    evaluated and any disagreement with ``p`` is flagged.
    """
    for T in (TJ, TK, TJK) + ((TI,) if TI is not None else ()):
        if T.truncated:
            raise ValueError("reg/pd bounds need untruncated tables")
    m = _mx(TJ.reg, TK.reg, None if TJK.reg is None else TJK.reg - 1)
    p = _mx(TJ.pd, TK.pd, None if TJK.pd is None else TJK.pd + 1)
    p2 = None
    if TI is not None:
        p2 = _mx(TI.pd, TJ.pd, None if TJK.pd is None else TJK.pd + 1)
    reg_c = m if m is not None and m >= s else None
    pd_c = p if p is not None and p >= r else None
    return RegPdBounds(m, p, p2, reg_c, pd_c, p2 is not None and p2 != p)
