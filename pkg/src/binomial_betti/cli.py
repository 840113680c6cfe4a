"""Command line: Betti tables, splitting analysis and verification sweeps.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from typing import Optional

from .formulas import (
    beta1_tree,
    beta2_tree,
    betti_by_formula,
    betti_linear_strand,
    betti_third_row_tree,
)
from .graph import Graph, GraphError, parse_graph
from .ideals import EdgeIdeal
from .koszul import BettiTable, betti_table, default_window
from .polylinalg import DEFAULT_PRIME, is_prime
from .splitting import (
    SplittingReport,
    check_vanishing_hypotheses,
    classify,
    custom_partition,
    default_split_window,
    edge_splitting,
    parse_bipartition,
    s_partition,
)

PRIME_ENV = "BINOMIAL_BETTI_PRIME"
SECOND_PRIME = 32749
METHODS = ("oracle", "formula", "auto")
FORMATS = ("table", "json")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    graph: Optional[str]
    field: int
    window: Optional[tuple]
    method: str
    format: str
    seed: int
    second_prime: bool
    verify: bool
    strict: bool

    def __post_init__(self):
        if self.field == 2 or not is_prime(self.field):
            raise UsageError(f"field must be an odd prime, got {self.field}")
        if self.window is not None and min(self.window) < 1:
            raise UsageError("window bounds must be positive")
        if self.method not in METHODS:
            raise UsageError(f"method must be one of {METHODS}")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------


def render_table(T: BettiTable) -> str:
    """Grid with columns ``i``, a ``total:`` row and one ``r:`` row per ``j - i``; zeros as ``.``."""
    if T.is_zero:
        return "       (zero ideal)"
    cols = range(T.pd + 1)
    rows = T.rows_present()
    lines = [["", *map(str, cols)], ["total:", *map(str, T.totals())]]
    for r in range(rows[0], rows[-1] + 1):
        lines.append([f"{r}:", *(str(v) if v else "." for v in T.row(r))])
    widths = [max(len(line[k]) for line in lines) for k in range(len(lines[0]))]
    widths[0] = max(widths[0], 6)
    return "\n".join(" ".join(cell.rjust(w) for cell, w in zip(line, widths)).rstrip() for line in lines)


def table_json(T: BettiTable, n: int, p: int) -> dict:
    return {
        "n": n,
        "field": p,
        "window": {"i_max": T.i_max, "j_max": T.j_max},
        "truncated": T.truncated,
        "entries": [{"i": i, "j": j, "beta": v} for (i, j), v in sorted(T.entries.items())],
        "reg": T.reg,
        "pd": T.pd,
    }


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# --------------------------------------------------------------------------
# betti
# --------------------------------------------------------------------------


def _read(path: Optional[str]) -> Graph:
    if not path:
        raise UsageError("--graph is required")
    try:
        with open(path) as fh:
            return parse_graph(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except GraphError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _window(cfg: RunConfig, spec) -> tuple:
    return cfg.window if cfg.window is not None else default_window(spec)


def oracle_table(G: Graph, p: int, window: Optional[tuple]) -> BettiTable:
    spec = EdgeIdeal(G, p=p)
    return betti_table(spec, window if window is not None else default_window(spec))


def formula_table(G: Graph, window: tuple) -> tuple[BettiTable, str]:
    res = betti_by_formula(G, allow_oracle=False)
    T = res.value
    i_max, j_max = window
    out = T.restricted(i_max, j_max)
    out.truncated = out != T
    return out, res.provenance


def cmd_betti(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    G = _read(cfg.graph)
    spec = EdgeIdeal(G, p=cfg.field)
    window = _window(cfg, spec)
    status = EXIT_OK
    notes = []
    if cfg.method == "oracle":
        T = betti_table(spec, window)
        source = "Koszul oracle"
    else:
        try:
            T, source = formula_table(G, window)
        except GraphError:
            if cfg.method == "formula":
                raise UsageError("no formula covers this graph (complete, star, tree, decomposable)") from None
            T, source = betti_table(spec, window), "Koszul oracle"
        else:
            if cfg.verify:
                O = betti_table(spec, window)
                if O.entries != T.entries:
                    notes.append("formula and oracle disagree")
                    status = EXIT_FAIL
                else:
                    notes.append("formula and oracle agree")
    if cfg.second_prime:
        other = SECOND_PRIME if cfg.field != SECOND_PRIME else DEFAULT_PRIME
        T2 = betti_table(EdgeIdeal(G, p=other), window)
        if T2.entries != T.entries:
            notes.append(f"table differs over GF({other})")
            status = EXIT_FAIL
        else:
            notes.append(f"same table over GF({other})")
    if T.truncated:
        notes.append("window may cut off nonzero entries")
        if cfg.strict:
            status = EXIT_FAIL
    if cfg.format == "json":
        doc = table_json(T, G.n, cfg.field)
        doc["source"] = source
        doc["notes"] = notes
        print(_dump(doc), file=out)
    else:
        print(render_table(T), file=out)
        print(f"# source: {source}; field GF({cfg.field}); window i <= {window[0]}, j <= {window[1]}", file=out)
        for note in notes:
            print(f"# {note}", file=out)
    return status


# --------------------------------------------------------------------------
# split
# --------------------------------------------------------------------------


def _parse_edge(text: str) -> tuple[int, int]:
    try:
        u, v = (int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise UsageError(f"--edge expects 'u,v', got {text!r}") from None
    return u, v


def build_partition(G: Graph, mode: str, args, p: int):
    try:
        if mode == "edge":
            if not args.edge:
                raise UsageError("split edge needs --edge u,v")
            return edge_splitting(G, _parse_edge(args.edge), p)
        if mode == "vertex":
            if args.vertex is None:
                raise UsageError("split vertex needs --vertex s")
            return s_partition(G, args.vertex, p)
        if not args.partition:
            raise UsageError("split custom needs --partition FILE")
        try:
            with open(args.partition) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.partition}: {exc.strerror}") from None
        return parse_bipartition(text, G, p)
    except GraphError as exc:
        raise UsageError(str(exc)) from None


def _fmt_pairs(pairs) -> str:
    return ", ".join(f"({r},{s})" for r, s in pairs) or "none"


def render_report(rep: SplittingReport, certified_pairs) -> str:
    part = rep.partition
    blocks = [f"{part.describe()}: |G(J)| = {len(part.J_edges)}, |G(K)| = {len(part.K_edges)}"]
    for name, T in (("I", rep.TI), ("J", rep.TJ), ("K", rep.TK), ("J ∩ K", rep.TJK)):
        blocks.append(f"Betti table of {name}:\n{render_table(T)}")
    if rep.delta:
        cells = ", ".join(f"({i},{j}): {v}" for (i, j), v in sorted(rep.delta.items()))
        blocks.append(f"residual delta (nonzero): {cells}")
    else:
        blocks.append("residual delta: zero on the window")
    lines = [rep.summary()]
    scope = " (window-limited)" if rep.window_limited else " (within the window)"
    lines.append(f"minimal (r,s){scope}: {_fmt_pairs(rep.minimal_pairs)}")
    if rep.guarantee is None:
        lines.append(f"guarantee: none; {rep.guarantee_reason}")
    else:
        verdict = "holds" if rep.guarantee_holds else "FAILS"
        lines.append(f"guarantee: ({rep.guarantee[0]},{rep.guarantee[1]}) from {rep.guarantee_reason}; {verdict} on the window")
    lines.append(f"vanishing conditions certify: {_fmt_pairs(certified_pairs)}")
    blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def report_json(rep: SplittingReport, certified_pairs) -> dict:
    part = rep.partition
    n, p = part.graph.n, part.p
    return {
        "partition": {
            "kind": part.kind,
            "pivot": part.pivot,
            "J": [list(e) for e in part.J_edges],
            "K": [list(e) for e in part.K_edges],
        },
        "window": {"i_max": rep.window[0], "j_max": rep.window[1]},
        "tables": {name: table_json(T, n, p) for name, T in (("I", rep.TI), ("J", rep.TJ), ("K", rep.TK), ("JK", rep.TJK))},
        "delta": [{"i": i, "j": j, "delta": v} for (i, j), v in sorted(rep.delta.items())],
        "complete": rep.complete,
        "window_limited": rep.window_limited,
        "minimal_pairs": [list(x) for x in rep.minimal_pairs],
        "guarantee": None if rep.guarantee is None else list(rep.guarantee),
        "guarantee_reason": rep.guarantee_reason,
        "guarantee_holds": rep.guarantee_holds,
        "certified_pairs": [list(x) for x in certified_pairs],
        "summary": rep.summary(),
    }


def cmd_split(cfg: RunConfig, mode: str, args, out=None) -> int:
    out = out or sys.stdout
    G = _read(cfg.graph)
    part = build_partition(G, mode, args, cfg.field)
    window = cfg.window if cfg.window is not None else default_split_window(part)
    rep = classify(part, window)
    van = check_vanishing_hypotheses(part, window, report=rep)
    if cfg.format == "json":
        print(_dump(report_json(rep, van.certified_pairs)), file=out)
    else:
        print(render_report(rep, van.certified_pairs), file=out)
    ok = rep.inequality_holds and rep.guarantee_holds is not False and van.consistent
    if cfg.strict and rep.window_limited:
        ok = False
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


class Suite:
    """Collects named checks; per-case timings go to stderr so stdout stays reproducible."""

    def __init__(self, name: str, out, err):
        self.name, self.out, self.err = name, out, err
        self.cases = 0
        self.failures: list = []
        self.start = time.perf_counter()

    def check(self, label: str, ok: bool, t0: float) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(label)
        print(f"{'ok  ' if ok else 'FAIL'} {label}", file=self.out)
        print(f"{label}: {time.perf_counter() - t0:.2f}s", file=self.err)

    def finish(self) -> int:
        summary = {"suite": self.name, "cases": self.cases, "failures": len(self.failures), "failed": self.failures}
        print(json.dumps(summary, sort_keys=True), file=self.out)
        print(f"total: {time.perf_counter() - self.start:.2f}s", file=self.err)
        return EXIT_OK if not self.failures else EXIT_FAIL


def _trees(max_n: int):
    import networkx as nx

    for n in range(2, max_n + 1):
        for g in nx.nonisomorphic_trees(n):
            yield Graph.from_networkx(g)


def verify_trees(suite: Suite, max_n: int, p: int) -> None:
    for T in _trees(max_n):
        t0 = time.perf_counter()
        O = oracle_table(T, p, None)
        F = betti_by_formula(T, allow_oracle=False).value
        ok = O == F and not O.truncated
        ok = ok and beta1_tree(T) == O.total(1)
        ok = ok and beta2_tree(T) == O.total(2)
        ok = ok and all(betti_third_row_tree(T, k) == O[k, k + 3] for k in range(2, (O.pd or 0) + 1))
        suite.check(f"tree {list(T.edges)}", ok, t0)


def _random_graph(rng: random.Random, max_n: int) -> Graph:
    while True:
        n = rng.randint(2, max_n)
        edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < 0.5]
        if edges:
            return Graph.from_edges(n, edges)


def verify_random(suite: Suite, count: int, max_n: int, seed: int, p: int) -> None:
    rng = random.Random(seed)
    for k in range(count):
        G = _random_graph(rng, max_n)
        J = [e for e in G.edges if rng.random() < 0.5]
        part = custom_partition(G, J, p)
        t0 = time.perf_counter()
        rep = classify(part)
        van = check_vanishing_hypotheses(part, rep.window, report=rep)
        strand = betti_linear_strand(G)
        ok = rep.inequality_holds and van.consistent
        ok = ok and all(rep.TI[i, i + 2] == v for i, v in enumerate(strand))
        ok = ok and all(v == 0 or j != i + 2 or i < len(strand) for (i, j), v in rep.TI.entries.items())
        suite.check(f"random #{k} n={G.n} edges={list(G.edges)} J={list(part.J_edges)}", ok, t0)


def verify_fixtures(suite: Suite, p: int) -> None:
    from . import reference as ref
    from .formulas import beta1_tree_clique_sum, betti_complete_graph, betti_star
    from .graph import count_caterpillars

    t0 = time.perf_counter()
    part = s_partition(ref.EXAMPLE_GRAPH, ref.EXAMPLE_SPLIT_VERTEX, p)
    rep = classify(part, ref.EXAMPLE_WINDOW)
    suite.check("example graph table", rep.TI == ref.EXAMPLE_TABLE and rep.TI.totals() == ref.EXAMPLE_TOTALS, t0)
    t0 = time.perf_counter()
    suite.check("star side table", rep.TJ == ref.EXAMPLE_STAR_TABLE, t0)
    suite.check("remaining side table", rep.TK == ref.EXAMPLE_REST_TABLE, t0)
    suite.check("intersection table", rep.TJK == ref.EXAMPLE_INTERSECTION_TABLE, t0)
    i, j = ref.EXAMPLE_COUNTEREXAMPLE
    suite.check(
        "splitting not complete, delta(2,4) = 6, guarantee holds",
        not rep.complete and rep.delta.get((i, j)) == 6 and rep.guarantee == ref.EXAMPLE_GUARANTEE and bool(rep.guarantee_holds),
        t0,
    )
    t0 = time.perf_counter()
    T = ref.DOUBLE_FORK_TREE
    F = betti_by_formula(T, allow_oracle=False).value
    ok = F == ref.DOUBLE_FORK_TABLE and F.totals() == ref.DOUBLE_FORK_TOTALS
    ok = ok and beta2_tree(T) == 41 and betti_third_row_tree(T, 2) == 12 and betti_third_row_tree(T, 3) == 3
    ok = ok and count_caterpillars(T) == ref.DOUBLE_FORK_COUNT
    suite.check("double-fork tree table by formula", ok, t0)
    t0 = time.perf_counter()
    suite.check("tree with triangle: beta_1", beta1_tree_clique_sum(ref.TREE_WITH_TRIANGLE, 4, 3) == ref.TREE_WITH_TRIANGLE_BETA1, t0)
    for n in range(2, 6):
        t0 = time.perf_counter()
        K = Graph.from_edges(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])
        suite.check(f"complete graph K_{n}", oracle_table(K, p, None) == betti_complete_graph(n), t0)
    for n in range(2, 7):
        t0 = time.perf_counter()
        S = Graph.from_edges(n, [(1, v) for v in range(2, n + 1)])
        suite.check(f"star S_{n}", oracle_table(S, p, None) == betti_star(n), t0)


def cmd_verify(cfg: RunConfig, args, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    suite = Suite(args.suite, out, err)
    if args.suite == "trees":
        verify_trees(suite, args.max_n, cfg.field)
    elif args.suite == "random":
        verify_random(suite, args.count, args.max_n, cfg.seed, cfg.field)
    else:
        verify_fixtures(suite, cfg.field)
    return suite.finish()


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _default_prime() -> int:
    raw = os.environ.get(PRIME_ENV)
    if raw is None:
        return DEFAULT_PRIME
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRIME_ENV} must be an integer") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file: n on the first line, then one 'u v' edge per line")
    common.add_argument("--field", type=int, default=None, help=f"prime p of GF(p) (default ${PRIME_ENV} or {DEFAULT_PRIME})")
    common.add_argument("--second-prime", action="store_true", help=f"recompute over a second prime ({SECOND_PRIME}) and compare")
    common.add_argument("--max-i", type=int, default=None, help="largest homological degree i")
    common.add_argument("--max-j", type=int, default=None, help="largest internal degree j")
    common.add_argument("--method", default="auto", choices=METHODS)
    common.add_argument("--format", default="table", choices=FORMATS)
    common.add_argument("--verify", action="store_true", help="cross-check formulas against the oracle")
    common.add_argument("--strict", action="store_true", help="fail when the window may cut off entries")
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="binomial-betti", description="Betti tables of binomial edge ideals.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("betti", parents=[common], help="print the Betti table of J_G")
    sp = sub.add_parser("split", parents=[common], help="analyse a splitting J_G = J + K")
    sp.add_argument("mode", choices=("edge", "vertex", "custom"))
    sp.add_argument("--edge", help="edge u,v (mode edge)")
    sp.add_argument("--vertex", type=int, help="vertex s (mode vertex)")
    sp.add_argument("--partition", help="file listing the edges of J (mode custom)")
    vp = sub.add_parser("verify", parents=[common], help="run a verification suite")
    vp.add_argument("--suite", default="paper-fixtures", choices=("trees", "random", "paper-fixtures"))
    vp.add_argument("--max-n", type=int, default=6)
    vp.add_argument("--count", type=int, default=25)
    return ap


def _config(args) -> RunConfig:
    if (args.max_i is None) != (args.max_j is None):
        raise UsageError("--max-i and --max-j go together")
    window = None if args.max_i is None else (args.max_i, args.max_j)
    field = args.field if args.field is not None else _default_prime()
    return RunConfig(args.graph, field, window, args.method, args.format, args.seed, args.second_prime, args.verify, args.strict)


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        if args.command == "betti":
            return cmd_betti(cfg)
        if args.command == "split":
            return cmd_split(cfg, args.mode, args)
        return cmd_verify(cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
