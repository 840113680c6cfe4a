"""Published Betti tables used as regression fixtures.

Tables are written the way they are printed: ``{r: [beta_{0,r}, beta_{1,1+r}, ...]}``.
"""

from __future__ import annotations

from .graph import Graph
from .koszul import BettiTable

# seven vertices, eleven edges; the standard worked example for splittings
EXAMPLE_GRAPH = Graph.from_edges(
    7,
    [(1, 2), (1, 3), (1, 4), (1, 5), (1, 7), (2, 4), (2, 5), (2, 7), (3, 7), (4, 5), (6, 7)],
)

# a tree glued to a triangle at vertex 4
TREE_WITH_TRIANGLE = Graph.from_edges(7, [(1, 2), (2, 3), (2, 4), (4, 5), (4, 6), (4, 7), (6, 7)])

# tree containing three copies of the double fork
DOUBLE_FORK_TREE = Graph.from_edges(7, [(1, 2), (2, 3), (3, 4), (2, 5), (3, 6), (3, 7)])


def table_from_rows(rows: dict) -> BettiTable:
    return BettiTable({(i, i + r): v for r, vals in rows.items() for i, v in enumerate(vals)})


EXAMPLE_TABLE = table_from_rows({2: [11, 12, 3], 3: [0, 32, 62, 39, 8], 4: [0, 0, 24, 64, 62, 26, 4]})
EXAMPLE_TOTALS = [11, 44, 89, 103, 70, 26, 4]

# the s-partition at vertex 1: star side, the rest, and their intersection
EXAMPLE_STAR_TABLE = table_from_rows({2: [5], 3: [0, 20, 30, 18, 4]})
EXAMPLE_REST_TABLE = table_from_rows({2: [6, 2], 3: [0, 13, 8], 4: [0, 0, 12, 14, 4]})
EXAMPLE_INTERSECTION_TABLE = table_from_rows({3: [10, 9, 2], 4: [5, 26, 21, 4], 5: [0, 12, 50, 58, 26, 4]})
EXAMPLE_INTERSECTION_TOTALS = [15, 47, 73, 62, 26, 4]
EXAMPLE_SPLIT_VERTEX = 1
EXAMPLE_GUARANTEE = (4, 4)
# a failing cell of the identity: 3 on the left, 0 + 0 + 9 on the right
# (it also fails at (1, 4), with 32 against 20 + 13 + 5)
EXAMPLE_COUNTEREXAMPLE = (2, 4)
EXAMPLE_WINDOW = (7, 11)

DOUBLE_FORK_TABLE = table_from_rows({2: [6], 3: [0, 20, 12, 3], 4: [0, 0, 29, 40, 21, 4]})
DOUBLE_FORK_TOTALS = [6, 20, 41, 43, 21, 4]
DOUBLE_FORK_COUNT = 3
# not printed; computed by the oracle and by the clique-sum formula, which agree
TREE_WITH_TRIANGLE_BETA1 = 23
