from __future__ import annotations

import os
from contextlib import contextmanager

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from binomial_betti.graph import Graph
from binomial_betti.ideals import EdgeIdeal
from binomial_betti.koszul import betti_table

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def all_trees(max_n: int, min_n: int = 2) -> list[Graph]:
    return [Graph.from_networkx(g) for n in range(min_n, max_n + 1) for g in nx.nonisomorphic_trees(n)]


def connected_graphs(max_n: int, min_n: int = 2) -> list[Graph]:
    """All connected graphs up to isomorphism, from the graph atlas (n <= 7)."""
    return [
        Graph.from_networkx(g)
        for g in nx.graph_atlas_g()
        if min_n <= g.number_of_nodes() <= max_n and nx.is_connected(g)
    ]


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def star(n: int) -> Graph:
    return Graph.from_edges(n, [(1, v) for v in range(2, n + 1)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(v, v + 1) for v in range(1, n)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(v, v + 1) for v in range(1, n)] + [(1, n)])


@st.composite
def graphs(draw, max_n: int = 7):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


_ORACLE: dict = {}


def oracle(G: Graph):
    """Oracle table of ``J_G`` on the default window, memoised per isomorphism class."""
    g = G.compact()[0].to_networkx() if G.edges else nx.Graph()
    bucket = _ORACLE.setdefault(nx.weisfeiler_lehman_graph_hash(g), [])
    for h, T in bucket:
        if nx.is_isomorphic(g, h):
            return T
    T = betti_table(EdgeIdeal(G))
    bucket.append((g, T))
    return T


def same_graph(G: Graph, H: Graph) -> bool:
    return nx.is_isomorphic(G.to_networkx(), H.to_networkx())


def glue(G1: Graph, v1: int, G2: Graph, v2: int) -> Graph:
    """Union of ``G1`` and ``G2`` with ``v2`` identified with ``v1``."""
    rename = {v2: v1}
    nxt = G1.n + 1
    for w in G2.vertices:
        if w != v2:
            rename[w] = nxt
            nxt += 1
    edges = list(G1.edges) + [(rename[a], rename[b]) for a, b in G2.edges]
    return Graph.from_edges(G1.n + G2.n - 1, edges)


def leaf_gluings(max_n: int) -> list:
    """Two trees glued at a leaf of each, deduplicated up to isomorphism."""
    out: list = []
    trees = all_trees(max_n - 1)
    for T1 in trees:
        for T2 in trees:
            if T1.n + T2.n - 1 > max_n:
                continue
            for v1 in (v for v in T1.vertices if T1.degree(v) == 1):
                for v2 in (v for v in T2.vertices if T2.degree(v) == 1):
                    G = glue(T1, v1, T2, v2)
                    if not any(same_graph(G, H) for _, _, H in out):
                        out.append((T1, T2, G))
    return out


# acceptance criteria report their outcome here; printed in the terminal summary
ACCEPTANCE: dict = {}


@contextmanager
def criterion(k: int, label: str):
    """Record the outcome of a block belonging to acceptance criterion ``k``.

    A criterion split over several tests passes only if every block does.
    """
    ok = False
    try:
        yield
        ok = True
    finally:
        prev = ACCEPTANCE.get(k, (True, label))[0]
        ACCEPTANCE[k] = (prev and ok, label)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, label = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {label}")


@pytest.fixture
def tmp_graph(tmp_path):
    def write(G: Graph, name: str = "g.txt") -> str:
        from binomial_betti.graph import format_graph

        path = tmp_path / name
        path.write_text(format_graph(G))
        return str(path)

    return write
