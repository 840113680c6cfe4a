"""Finite simple graphs on ``{1..n}`` and the graph operations used for binomial edge ideals."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, NamedTuple, Optional


class GraphError(ValueError):
    """Invalid graph input or a violated precondition of a graph operation."""


Edge = tuple  # (u, v) with u < v


def make_edge(u: int, v: int) -> Edge:
    if u == v:
        raise GraphError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple graph on ``{1..n}``; ``edges`` is a sorted tuple of ``(u, v)`` with ``u < v``."""

    n: int
    edges: tuple = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        canon = []
        for e in self.edges:
            u, v = e
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise GraphError(f"edge {e} has an endpoint outside 1..{self.n}")
            canon.append(make_edge(u, v))
        if len(set(canon)) != len(canon):
            raise GraphError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Graph":
        return cls(n, tuple(tuple(e) for e in edges))

    # basic accessors ------------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(s) for v, s in adj.items()}

    def neighbors(self, v: int) -> frozenset:
        self._check_vertex(v)
        return self.adjacency[v]

    def closed_neighborhood(self, v: int) -> frozenset:
        return self.neighbors(v) | {v}

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and make_edge(u, v) in self.edge_set

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def _check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 1 <= v <= self.n):
            raise GraphError(f"vertex {v!r} not in 1..{self.n}")

    def _check_edge(self, e) -> Edge:
        e = make_edge(*e)
        self._check_vertex(e[0])
        self._check_vertex(e[1])
        return e

    def non_isolated(self) -> tuple[int, ...]:
        return tuple(v for v in self.vertices if self.adjacency[v])

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return all(self.has_edge(a, b) for a, b in combinations(vs, 2))

    # constructions ----------------------------------------------------------

    def add_edges(self, edges: Iterable[Iterable[int]]) -> "Graph":
        new = set(self.edges)
        for e in edges:
            new.add(make_edge(*e))
        return Graph(self.n, tuple(new))

    def induced_subgraph(self, vs: Iterable[int]) -> "Graph":
        """Induced subgraph on ``vs`` with original labels; other vertices become isolated."""
        keep = set(vs)
        return Graph(self.n, tuple(e for e in self.edges if e[0] in keep and e[1] in keep))

    def relabel(self, mapping: dict, n: Optional[int] = None) -> "Graph":
        n = self.n if n is None else n
        return Graph(n, tuple(make_edge(mapping[u], mapping[v]) for u, v in self.edges))

    def compact(self) -> tuple["Graph", dict]:
        """Drop isolated vertices; returns the relabelled graph and the new->old map."""
        keep = self.non_isolated()
        if not keep:
            return Graph(1), {1: 1}
        old_to_new = {v: k + 1 for k, v in enumerate(keep)}
        return self.relabel(old_to_new, len(keep)), {k + 1: v for k, v in enumerate(keep)}

    def canonical_key(self) -> tuple:
        """Labelled key ignoring isolated vertices (memo key for Betti computations)."""
        g, _ = self.compact()
        return (g.n if g.edges else 0, g.edges)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g) -> "Graph":
        nodes = sorted(g.nodes())
        lab = {v: k + 1 for k, v in enumerate(nodes)}
        return cls(len(nodes), tuple(make_edge(lab[u], lab[v]) for u, v in g.edges()))

    def __str__(self):
        es = ", ".join(f"{{{u},{v}}}" for u, v in self.edges)
        return f"Graph(n={self.n}; {es})"


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------


def delete_edge(G: Graph, e) -> Graph:
    e = G._check_edge(e)
    if e not in G.edge_set:
        raise GraphError(f"edge {e} is not in the graph")
    return Graph(G.n, tuple(f for f in G.edges if f != e))


def remove_vertex_edges(G: Graph, s: int) -> Graph:
    """``G ∖ {s}`` kept on the same label set (``s`` becomes isolated)."""
    G._check_vertex(s)
    return Graph(G.n, tuple(e for e in G.edges if s not in e))


def delete_vertex(G: Graph, s: int) -> tuple[Graph, dict]:
    """``G ∖ {s}`` on ``n - 1`` dense labels, with the new->old label map."""
    G._check_vertex(s)
    if G.n == 1:
        raise GraphError("cannot delete the only vertex")
    old = [v for v in G.vertices if v != s]
    old_to_new = {v: k + 1 for k, v in enumerate(old)}
    H = Graph(G.n - 1, tuple(make_edge(old_to_new[u], old_to_new[v]) for u, v in G.edges if s not in (u, v)))
    return H, {k + 1: v for k, v in enumerate(old)}


def completion_along_edge(G: Graph, e) -> Graph:
    """``G_e``: make ``N(i)`` and ``N(j)`` cliques, for a non-edge ``e = {i, j}``."""
    i, j = G._check_edge(e)
    if G.has_edge(i, j):
        raise GraphError(f"{(i, j)} is an edge; completion needs a non-edge")
    new = list(combinations(sorted(G.neighbors(i)), 2)) + list(combinations(sorted(G.neighbors(j)), 2))
    return G.add_edges(new)


def connected_components(G: Graph) -> list[frozenset]:
    seen: set = set()
    comps = []
    for v in G.vertices:
        if v in seen:
            continue
        stack, comp = [v], {v}
        while stack:
            w = stack.pop()
            for x in G.adjacency[w]:
                if x not in comp:
                    comp.add(x)
                    stack.append(x)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_free_vertex(G: Graph, v: int) -> bool:
    """``N(v)`` induces a clique."""
    return G.is_clique(G.neighbors(v))


def is_free_vertex_by_cliques(G: Graph, v: int) -> bool:
    """``v`` lies in exactly one maximal clique (isolated vertices count as free)."""
    G._check_vertex(v)
    return sum(1 for c in maximal_cliques(G) if v in c) == 1


def is_cut_edge(G: Graph, e) -> bool:
    e = G._check_edge(e)
    if e not in G.edge_set:
        raise GraphError(f"edge {e} is not in the graph")
    return len(connected_components(delete_edge(G, e))) > len(connected_components(G))


def is_tree(G: Graph) -> bool:
    return G.num_edges == G.n - 1 and len(connected_components(G)) == 1


def is_forest(G: Graph) -> bool:
    return G.num_edges == G.n - len(connected_components(G))


class StructuralReport(NamedTuple):
    is_tree: bool
    is_triangle_free: bool
    connected_components: list
    cut_edges: frozenset
    free_vertices: frozenset


def structural_predicates(G: Graph) -> StructuralReport:
    return StructuralReport(
        is_tree=is_tree(G),
        is_triangle_free=is_triangle_free(G),
        connected_components=connected_components(G),
        cut_edges=frozenset(e for e in G.edges if is_cut_edge(G, e)),
        free_vertices=frozenset(v for v in G.vertices if is_free_vertex(G, v)),
    )


def is_triangle_free(G: Graph) -> bool:
    adj = G.adjacency
    return not any(adj[u] & adj[v] for u, v in G.edges)


# cliques ----------------------------------------------------------------------


def maximal_cliques(G: Graph) -> list[frozenset]:
    """Bron–Kerbosch with Tomita pivoting; isolated vertices are singleton cliques."""
    adj = G.adjacency
    out: list = []

    def expand(R: set, P: set, X: set):
        if not P and not X:
            out.append(frozenset(R))
            return
        pivot = max(P | X, key=lambda u: len(adj[u] & P))
        for v in sorted(P - adj[pivot]):
            expand(R | {v}, P & adj[v], X & adj[v])
            P = P - {v}
            X = X | {v}

    expand(set(), set(G.vertices), set())
    return sorted(out, key=lambda c: (len(c), sorted(c)))


def all_cliques(G: Graph) -> list[tuple[int, ...]]:
    """Every nonempty clique, grown by extending with larger common neighbours."""
    adj = G.adjacency
    out = []
    stack = [((v,), {w for w in adj[v] if w > v}) for v in G.vertices]
    while stack:
        clique, cand = stack.pop()
        out.append(clique)
        for w in sorted(cand):
            stack.append((clique + (w,), {x for x in cand if x > w and x in adj[w]}))
    return sorted(out, key=lambda c: (len(c), c))


def clique_f_vector(G: Graph) -> tuple[int, ...]:
    """``(f_0, f_1, ...)``: f_k counts the (k+1)-cliques, i.e. k-faces of the clique complex."""
    counts: dict = {}
    for c in all_cliques(G):
        counts[len(c)] = counts.get(len(c), 0) + 1
    return tuple(counts[k] for k in range(1, max(counts) + 1))


def clique_f_vector_from_maximal(G: Graph) -> tuple[int, ...]:
    """Same f-vector, counted as the union of the subsets of maximal cliques."""
    faces: set = set()
    for c in maximal_cliques(G):
        s = sorted(c)
        for k in range(1, len(s) + 1):
            faces.update(combinations(s, k))
    top = max(len(f) for f in faces)
    return tuple(sum(1 for f in faces if len(f) == k) for k in range(1, top + 1))


def largest_clique_containing(G: Graph, s: int) -> int:
    G._check_vertex(s)
    return max(len(c) for c in maximal_cliques(G) if s in c)


# trees -------------------------------------------------------------------------


def _require_tree(T: Graph) -> None:
    if not is_tree(T):
        raise GraphError("graph is not a tree")


def find_reduction_vertex(T: Graph) -> int:
    """Smallest ``a`` with ``deg a > 1`` having at most one neighbour of degree > 1."""
    _require_tree(T)
    if T.n <= 2:
        raise GraphError("a single edge has no reduction vertex")
    for a in T.vertices:
        if T.degree(a) > 1 and sum(1 for u in T.neighbors(a) if T.degree(u) > 1) <= 1:
            return a
    raise AssertionError("every tree with >= 3 vertices has a reduction vertex")


def count_caterpillars(T: Graph) -> int:
    """Number of subgraphs of the tree isomorphic to the double fork ``P``.

    ``P`` is the path 1-2-3-4 with one extra leaf on each of 2 and 3; in a
    copy its spine is the unique edge joining its two degree-3 vertices.
    """
    _require_tree(T)
    return sum(comb(T.degree(u) - 1, 2) * comb(T.degree(v) - 1, 2) for u, v in T.edges)


# splittings ------------------------------------------------------------------


def s_partition_subgraphs(G: Graph, s: int) -> tuple[Graph, Graph]:
    """Star at ``s`` and ``G ∖ {s}``, both on the full label set."""
    G._check_vertex(s)
    if G.degree(s) == 0:
        raise GraphError(f"vertex {s} is isolated; the star side would be empty")
    G1 = Graph(G.n, tuple(make_edge(s, k) for k in G.neighbors(s)))
    return G1, remove_vertex_edges(G, s)


def decompose_at_free_vertex(G: Graph) -> Optional[tuple[Graph, Graph, int]]:
    """A splitting ``G = G1 ∪_v G2`` with ``v`` free in both parts, or ``None``.

    ``v`` must have neighbours in exactly two components of ``G - v``, each
    meeting ``N(v)`` in a clique.  ``G1`` is induced on ``v`` and the component
    with the smaller minimum vertex; ``G2`` holds everything else.
    """
    for v in G.vertices:
        nb = G.adjacency[v]
        if len(nb) < 2:
            continue
        rest = remove_vertex_edges(G, v)
        touching = [c for c in connected_components(rest) if c & nb]
        if len(touching) != 2:
            continue
        touching.sort(key=min)
        if not all(G.is_clique(c & nb) for c in touching):
            continue
        side = touching[0] | {v}
        G1 = G.induced_subgraph(side)
        G2 = G.induced_subgraph(set(G.vertices) - touching[0])
        return G1, G2, v
    return None


# text format -------------------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse ``n`` on the first line followed by ``u v`` edge lines (``#`` comments)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("empty graph file")
    try:
        n = int(lines[0])
    except ValueError:
        raise GraphError(f"first line must be the vertex count, got {lines[0]!r}") from None
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"malformed edge line {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"malformed edge line {ln!r}") from None
        if not u < v:
            raise GraphError(f"edge line {ln!r} must satisfy u < v")
        edges.append((u, v))
    if len(set(edges)) != len(edges):
        raise GraphError("duplicate edge")
    return Graph(n, tuple(edges))


def format_graph(G: Graph) -> str:
    return "\n".join([str(G.n)] + [f"{u} {v}" for u, v in G.edges]) + "\n"


def read_graph(path: str) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())
