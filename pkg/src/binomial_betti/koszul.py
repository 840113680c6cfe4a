"""Betti numbers by brute-force Koszul homology.

``Tor_i(k, R/I)`` is the homology of ``K(x, y) ⊗ R/I``.  The complex splits
into fine blocks (vertex multidegree ``a``, x-degree ``b``); in each block the
chain groups have basis ``e_S ⊗ u`` with ``S`` a set of variables and ``u`` a
standard monomial of ``R/I`` (a non-pivot column of the ideal's block), and
the Betti number is ``dim K_i - rank d_i - rank d_{i+1}``.

Multidegrees are restricted to vertices that occur in the generators (the
Koszul complex on an unused pair of variables is exact).  By default each
``a_v`` is also capped at 2: binomial edge ideals have a squarefree initial
ideal, so by upper semicontinuity their ``N^n``-graded Betti numbers live in
``{0,1,2}^n``, and the same holds for the intersections and colons built
from them.  ``cap=None`` drops that assumption.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from .ideals import IdealSpec, fine_blocks
from ._kernels import block_ranks
from .polylinalg import PrimeField, rank_mod_p

log = logging.getLogger(__name__)

BACKENDS = ("compiled", "python")
MODULES = ("quotient", "ideal")


# --------------------------------------------------------------------------
# Betti tables
# --------------------------------------------------------------------------


@dataclass
class BettiTable:
    """Graded Betti numbers ``beta[i, j]`` of an ideal (absent entries are 0).

    ``i_max``/``j_max`` record the window that was computed; ``truncated``
    says whether nonzero entries may exist outside it.
    """

    entries: dict = field(default_factory=dict)
    i_max: Optional[int] = None
    j_max: Optional[int] = None
    truncated: bool = False

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if v < 0:
                raise ValueError(f"negative Betti number at {(i, j)}")
            if v:
                clean[(i, j)] = v
        self.entries = clean

    def __getitem__(self, key) -> int:
        return self.entries.get(tuple(key), 0)

    def __eq__(self, other):
        if isinstance(other, BettiTable):
            return self.entries == other.entries
        return NotImplemented

    def __iter__(self):
        return iter(sorted(self.entries.items()))

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def total(self, i: int) -> int:
        return sum(v for (ii, _), v in self.entries.items() if ii == i)

    def totals(self) -> list[int]:
        if not self.entries:
            return []
        return [self.total(i) for i in range(self.pd + 1)]

    def row(self, r: int) -> list[int]:
        """``beta[i, i + r]`` for ``i = 0..pd``."""
        if not self.entries:
            return []
        return [self[i, i + r] for i in range(self.pd + 1)]

    @property
    def pd(self) -> Optional[int]:
        return max((i for i, _ in self.entries), default=None)

    @property
    def reg(self) -> Optional[int]:
        return max((j - i for i, j in self.entries), default=None)

    def rows_present(self) -> list[int]:
        return sorted({j - i for i, j in self.entries})

    def shift(self, di: int = 0, dj: int = 0) -> "BettiTable":
        return BettiTable({(i + di, j + dj): v for (i, j), v in self.entries.items()})

    def restricted(self, i_max: int, j_max: int) -> "BettiTable":
        return BettiTable({k: v for k, v in self.entries.items() if k[0] <= i_max and k[1] <= j_max}, i_max, j_max)

    def betti_polynomial(self) -> dict:
        """Coefficients ``{(i, j): beta}`` of ``sum beta_{i,j} s^i t^j``."""
        return dict(self.entries)

    def __repr__(self):
        return f"BettiTable({dict(sorted(self.entries.items()))}, truncated={self.truncated})"


def quotient_table(T: BettiTable) -> BettiTable:
    """Betti table of ``R/I`` from that of ``I``: shift ``i`` by one and add ``beta_{0,0} = 1``."""
    out = {(i + 1, j): v for (i, j), v in T.entries.items()}
    out[(0, 0)] = 1
    return BettiTable(out, None if T.i_max is None else T.i_max + 1, T.j_max, T.truncated)


def ideal_table(Q: BettiTable) -> BettiTable:
    """Inverse of :func:`quotient_table`."""
    if Q[0, 0] != 1 or any(j != 0 for (i, j) in Q.entries if i == 0):
        raise ValueError("not the table of a cyclic quotient R/I")
    return BettiTable(
        {(i - 1, j): v for (i, j), v in Q.entries.items() if i > 0},
        None if Q.i_max is None else Q.i_max - 1,
        Q.j_max,
        Q.truncated,
    )


@dataclass
class TableStats:
    reg: Optional[int]
    pd: Optional[int]
    betti_polynomial: dict
    total_betti: list
    lower_bound: bool  # True when the table is truncated: reg/pd are only lower bounds


def table_stats(T: BettiTable) -> TableStats:
    return TableStats(T.reg, T.pd, T.betti_polynomial(), T.totals(), T.truncated)


# --------------------------------------------------------------------------
# the Koszul complex on one fine block
# --------------------------------------------------------------------------


class _QuotientBlocks:
    """Standard monomials and normal forms of ``R/I`` per fine block."""

    def __init__(self, spec: IdealSpec):
        self.spec = spec
        self.cache: dict = {}

    def get(self, a, b):
        key = (a, b)
        got = self.cache.get(key)
        if got is None:
            blk = self.spec.block(a, b)
            std_cols = blk.standard_columns
            pos = {c: k for k, c in enumerate(std_cols)}
            nf = {}
            for c in std_cols:
                nf[blk.basis[c]] = {pos[c]: 1}
            p = blk.p
            for piv, row in blk.pivot_row.items():
                nf[blk.basis[piv]] = {pos[k]: (-v) % p for k, v in row.items() if k != piv}
            got = (len(std_cols), nf)
            self.cache[key] = got
        return got


def _subsets(a, b, n):
    """Exterior supports ``S`` (bitmask over 2n variables) allowed in block ``(a, b)``.

    Yields ``(mask, size, vertex_degree_vector, x_count)``.
    """
    choices = []
    for v in range(n):
        if a[v] == 0:
            choices.append([(0, 0, 0, 0)])
            continue
        opts = [(0, 0, 0, 0), (1 << v, 1, 1, 1), (1 << (n + v), 1, 1, 0)]
        if a[v] >= 2:
            opts.append(((1 << v) | (1 << (n + v)), 2, 2, 1))
        choices.append(opts)
    out = [(0, 0, (), 0)]
    for v, opts in enumerate(choices):
        nxt = []
        for mask, size, t, xs in out:
            for m, s, tv, xv in opts:
                if xs + xv <= b:
                    nxt.append((mask | m, size + s, t + (tv,), xs + xv))
        out = nxt
    return out


class BlockStore:
    """Module bases and multiplication maps for every fine block up to some degree.

    ``module="quotient"`` uses standard monomials of ``R/I`` (coordinates are
    normal forms); ``module="ideal"`` uses the reduced rows of ``I`` itself
    (coordinates of a vector of ``I`` are its entries at the pivot columns).
    For each block and each variable ``z_t`` the store keeps the matrix of
    ``z_t·`` from that block to the next one, in one flat CSR layout that the
    compiled kernel reads directly.
    """

    def __init__(self, spec: IdealSpec, cap: Optional[int], module: str):
        if module not in MODULES:
            raise ValueError(f"module must be one of {MODULES}")
        self.spec = spec
        self.cap = cap
        self.module = module
        self.n = spec.n
        self.support = sorted(spec.support)
        self.gid: dict = {}
        self.dims: list = []
        self.starts: list = []
        self._data: list = []
        self._by_degree: dict = {}
        self._chunks: tuple = ([], [], [])
        self._nptr = 0
        self._nnz = 0
        self.degree = -1
        self._arrays = None

    def ensure(self, j: int) -> None:
        while self.degree < j:
            d = self.degree + 1
            new = []
            for c, bb in fine_blocks(self.n, d, self.support, self.cap):
                g = len(self.dims)
                self.gid[(c, bb)] = g
                data = self._block_data(c, bb)
                self._data.append(data)
                self.dims.append(data["dim"])
                self.starts.extend([-1] * (2 * self.n))
                new.append(g)
            self._by_degree[d] = new
            for g in self._by_degree.get(d - 1, ()):
                self._add_maps(g)
            self.degree = d
            self._arrays = None

    def _block_data(self, c, bb) -> dict:
        blk = self.spec.block(c, bb)
        p = self.spec.p
        data = {"c": c, "bb": bb, "basis": blk.basis, "index": blk.index}
        if self.module == "quotient":
            std = blk.standard_columns
            pos = {col: k for k, col in enumerate(std)}
            ptr = [0]
            idx: list = []
            val: list = []
            prow = blk.pivot_row
            for col in range(len(blk.basis)):
                if col in pos:
                    idx.append(pos[col])
                    val.append(1)
                else:
                    for k, v in prow[col].items():
                        if k != col:
                            idx.append(pos[k])
                            val.append((-v) % p)
                ptr.append(len(idx))
            data["dim"] = len(std)
            data["std"] = np.array(std, dtype=np.int64)
            data["nf"] = (np.array(ptr, dtype=np.int64), np.array(idx, dtype=np.int64), np.array(val, dtype=np.int64))
        else:
            rowid: list = []
            cols: list = []
            vals: list = []
            for k, r in enumerate(blk.rows):
                for col, v in r.items():
                    rowid.append(k)
                    cols.append(col)
                    vals.append(v)
            ppos = np.full(len(blk.basis), -1, dtype=np.int64)
            for k, col in enumerate(blk.pivots):
                ppos[col] = k
            data["dim"] = blk.dim
            data["rows"] = (np.array(rowid, dtype=np.int64), np.array(cols, dtype=np.int64), np.array(vals, dtype=np.int64))
            data["pivot_pos"] = ppos
        return data

    def _add_maps(self, g: int) -> None:
        src = self._data[g]
        dim = src["dim"]
        if dim == 0:
            return
        c, bb = src["c"], src["bb"]
        n = self.n
        for t in range(2 * n):
            v = t % n
            c2 = tuple(x + (k == v) for k, x in enumerate(c))
            g2 = self.gid.get((c2, bb + (t < n)))
            if g2 is None or self.dims[g2] == 0:
                continue
            tgt = self._data[g2]
            index2 = tgt["index"]
            shifted = np.array(
                [index2[m[:t] + (m[t] + 1,) + m[t + 1:]] for m in src["basis"]], dtype=np.int64
            )
            if self.module == "quotient":
                nf_ptr, nf_idx, nf_val = tgt["nf"]
                rows = shifted[src["std"]]
                lens = nf_ptr[rows + 1] - nf_ptr[rows]
                ptr = np.zeros(dim + 1, dtype=np.int64)
                np.cumsum(lens, out=ptr[1:])
                pos = np.repeat(nf_ptr[rows] - ptr[:-1], lens) + np.arange(ptr[-1], dtype=np.int64)
                idx, val = nf_idx[pos], nf_val[pos]
            else:
                rowid, cols, vals = src["rows"]
                pp = tgt["pivot_pos"][shifted[cols]]
                keep = pp >= 0
                ptr = np.zeros(dim + 1, dtype=np.int64)
                np.cumsum(np.bincount(rowid[keep], minlength=dim), out=ptr[1:])
                idx, val = pp[keep], vals[keep]
            self.starts[g * 2 * n + t] = self._nptr
            self._chunks[0].append(ptr + self._nnz)
            self._chunks[1].append(idx)
            self._chunks[2].append(val)
            self._nptr += dim + 1
            self._nnz += len(idx)

    def arrays(self):
        if self._arrays is None:
            empty = np.zeros(0, dtype=np.int64)
            cat = [np.concatenate(ch) if ch else empty for ch in self._chunks]
            self._arrays = (
                np.array(self.dims, dtype=np.int64),
                np.array(self.starts, dtype=np.int64),
                *cat,
            )
        return self._arrays

    def lookup_table(self, a, b, verts):
        """Local table ``(consumed multidegree code, consumed x-count) -> gid``.

        Blocks of one multidegree are registered for ``bb = 0..|c|`` in a
        row, so ``gid(c, bb) = gid(c, 0) + bb``.
        """
        strides = []
        s = 1
        for v in verts:
            strides.append(s)
            s *= a[v] + 1
        table = np.full((s, b + 1), -1, dtype=np.int64)
        xs = np.arange(b + 1)
        base = self.gid
        for tvals in product(*[range(a[v] + 1) for v in verts]):
            c = list(a)
            code = 0
            for v, x, st in zip(verts, tvals, strides):
                c[v] -= x
                code += x * st
            c = tuple(c)
            g0 = base.get((c, 0))
            if g0 is None:
                continue
            bb = b - xs
            ok = bb <= sum(c)
            table[code, ok] = g0 + bb[ok]
        return np.array(strides, dtype=np.int64), table.ravel()


class KoszulOracle:
    """Fine-graded Koszul homology of ``R/I`` with per-block caching.

    ``backend="compiled"`` (default) assembles and ranks each block's
    differentials in compiled code; ``backend="python"`` is the plain
    reference implementation over sparse dict rows.  ``module`` picks the
    coefficient module of the complex: ``R/I`` or ``I`` (same Betti numbers
    up to the homological shift); ``"auto"`` picks whichever has the smaller
    chain groups for the ideal at hand.
    """

    def __init__(self, spec: IdealSpec, cap: Optional[int] = 2, backend: str = "compiled", module: str = "auto"):
        if backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        if module != "auto" and module not in MODULES:
            raise ValueError(f"module must be 'auto' or one of {MODULES}")
        self.spec = spec
        self.cap = cap
        self.backend = backend
        self.module = module
        self.qb = _QuotientBlocks(spec)
        self._std_order: dict = {}
        self._store: Optional[BlockStore] = None
        self.cache: dict = {}

    def _std_list(self, c, bb):
        key = (c, bb)
        got = self._std_order.get(key)
        if got is None:
            blk = self.spec.block(c, bb)
            got = [blk.basis[k] for k in blk.standard_columns]
            self._std_order[key] = got
        return got

    def _pick_module(self) -> str:
        if self.module != "auto":
            return self.module
        # compare chain-group sizes on the middle degrees of the support
        d = max(2, len(self.spec.support))
        q = m = 0
        for dd in (d - 1, d):
            for c, bb in fine_blocks(self.spec.n, dd, sorted(self.spec.support), self.cap):
                blk = self.spec.block(c, bb)
                q += blk.ambient_dim - blk.dim
                m += blk.dim
        return "ideal" if m < q else "quotient"

    @property
    def store(self) -> BlockStore:
        if self._store is None:
            self._store = BlockStore(self.spec, self.cap, self._pick_module())
        return self._store

    def block_betti(self, a, b, i_top: int) -> dict:
        """``{i: beta_{i,(a,b)}(R/I)}`` for ``i <= i_top`` (zeros omitted)."""
        a = tuple(a)
        key = (a, b)
        got = self.cache.get(key)
        if got is not None and got[0] >= i_top:
            return {i: v for i, v in got[1].items() if i <= i_top}
        if self.backend == "python":
            dims, diffs = self._complex(a, b, i_top + 1)
            ranks = {i: rank_mod_p(rows, self.spec.p) for i, rows in diffs.items()}
            shift = 0
        else:
            dims, ranks, shift = self._compiled(a, b, i_top)
        out = {}
        if sum(a) == 0:
            out = {0: 1} if b == 0 and i_top >= 0 else {}
        else:
            for i in range(len(dims)):
                h = dims[i] - ranks.get(i, 0) - ranks.get(i + 1, 0)
                if h and i + shift <= i_top:
                    out[i + shift] = h
        self.cache[key] = (i_top, out)
        return out

    def _compiled(self, a, b, i_top):
        store = self.store
        j = sum(a)
        shift = 1 if store.module == "ideal" else 0
        top = min(i_top + 1 - shift, j)
        if j == 0 or top < 0:
            return [], {}, shift
        store.ensure(j)
        verts = [v for v in range(self.spec.n) if a[v]]
        strides, table = store.lookup_table(a, b, verts)
        dims_g, starts, m_ptr, m_idx, m_val = store.arrays()
        a_loc = np.array([a[v] for v in verts], dtype=np.int64)
        dims, ranks = block_ranks(
            a_loc, np.array(verts, dtype=np.int64), b, self.spec.n, top, self.spec.p,
            table, strides, dims_g, starts, m_ptr, m_idx, m_val,
        )
        # the top chain group was built only to rank d_top; drop its homology
        dims = [int(x) for x in dims[:top]] if top < j else [int(x) for x in dims]
        return dims, {i: int(r) for i, r in enumerate(ranks) if r}, shift

    def _complex(self, a, b, i_top):
        n = self.spec.n
        p = self.spec.p
        top = min(i_top, sum(a))
        layout: dict = {}
        dims = [0] * (top + 1)
        for mask, size, t, xs in _subsets(a, b, n):
            if size > top:
                continue
            c = tuple(x - y for x, y in zip(a, t))
            bb = b - xs
            if bb > sum(c):
                continue
            dim_q, _ = self.qb.get(c, bb)
            if dim_q == 0:
                continue
            layout[mask] = (size, dims[size], c, bb)
            dims[size] += dim_q
        diffs: dict = {}
        for i in range(1, top + 1):
            if dims[i] == 0 or dims[i - 1] == 0:
                continue
            rows = []
            for mask, (size, off, c, bb) in layout.items():
                if size != i:
                    continue
                terms = []
                below = 0
                for t in range(2 * n):
                    bit = 1 << t
                    if not mask & bit:
                        continue
                    sign = -1 if below & 1 else 1
                    below += 1
                    tgt = layout.get(mask ^ bit)
                    if tgt is None:
                        continue
                    _, toff, tc, tb = tgt
                    terms.append((t, sign, toff, self.qb.get(tc, tb)[1]))
                for u in self._std_list(c, bb):
                    row: dict = {}
                    for t, sign, toff, nf_tgt in terms:
                        zu = list(u)
                        zu[t] += 1
                        for k, v in nf_tgt[tuple(zu)].items():
                            col = toff + k
                            nv = (row.get(col, 0) + sign * v) % p
                            if nv:
                                row[col] = nv
                            else:
                                del row[col]
                    rows.append(row)
            diffs[i] = rows
        return dims, diffs

    def complex(self, a, b, i_top: Optional[int] = None):
        """``(dims, diffs)`` of the block complex, for inspection and tests."""
        a = tuple(a)
        return self._complex(a, b, sum(a) if i_top is None else i_top)

    def blocks(self, j_max: int):
        vs = sorted(self.spec.support)
        for j in range(j_max + 1):
            yield from fine_blocks(self.spec.n, j, vs, self.cap)

    def multigraded(self, i_max: int, j_max: int, use_symmetry: bool = True) -> dict:
        """``{(i, (a, b)): beta}`` for ``R/I`` with ``i <= i_max``, ``|a| <= j_max``."""
        out = {}
        sym = use_symmetry and self.spec.swap_symmetric
        for a, b in self.blocks(j_max):
            j = sum(a)
            if sym and 2 * b > j:
                continue
            for i, v in self.block_betti(a, b, i_max).items():
                out[(i, (a, b))] = v
                if sym and 2 * b < j:
                    out[(i, (a, j - b))] = v
        return out


# --------------------------------------------------------------------------
# public entry points
# --------------------------------------------------------------------------


def default_window(spec: IdealSpec) -> tuple[int, int]:
    n = spec.n
    return 2 * n, 2 * n + 2


def _truncation(Q: dict, i_max_q: int, j_max: int, spec: IdealSpec, cap: Optional[int]) -> bool:
    """Whether the quotient table computed on the window may miss entries.

    Only the degree bound from the cap closes a table: every entry has
    ``j <= cap * |support|``, and a column that vanishes for all such ``j``
    forces every later column to vanish.  Without a cap nothing is certified.
    """
    nsupp = len(spec.support)
    if nsupp == 0:
        return False
    if cap is None:
        return True
    j_bound = cap * nsupp
    if j_max < j_bound:
        return True
    cols = {i for i, _ in Q}
    return not (i_max_q >= j_bound or any(c not in cols for c in range(1, i_max_q + 1)))


def betti_table(
    spec: IdealSpec,
    window: Optional[tuple[int, int]] = None,
    field: Optional[PrimeField] = None,
    cap: Optional[int] = 2,
    oracle: Optional[KoszulOracle] = None,
    use_symmetry: bool = True,
) -> BettiTable:
    """Graded Betti table of the ideal ``I`` on the window ``i <= i_max``, ``j <= j_max``."""
    if field is not None and field.p != spec.p:
        raise ValueError("the ideal spec was built over a different prime")
    i_max, j_max = window if window is not None else default_window(spec)
    if i_max < 0 or j_max < 0:
        raise ValueError("window bounds must be non-negative")
    oracle = oracle or KoszulOracle(spec, cap)
    multi = oracle.multigraded(i_max + 1, j_max, use_symmetry)
    Q: dict = {}
    for (i, (a, _)), v in multi.items():
        key = (i, sum(a))
        Q[key] = Q.get(key, 0) + v
    entries = {(i - 1, j): v for (i, j), v in Q.items() if i >= 1}
    truncated = _truncation({k: v for k, v in Q.items() if k[0] >= 1}, i_max + 1, j_max, spec, oracle.cap)
    return BettiTable(entries, i_max, j_max, truncated)


GRADINGS = ("fine", "Nn", "N2", "standard")


def betti_table_multigraded(
    spec: IdealSpec,
    window: Optional[tuple[int, int]] = None,
    field: Optional[PrimeField] = None,
    grading: str = "Nn",
    cap: Optional[int] = 2,
    oracle: Optional[KoszulOracle] = None,
    use_symmetry: bool = True,
) -> dict:
    """Betti numbers of the ideal keyed by ``(i, degree)`` in the chosen grading.

    ``degree`` is the vertex multidegree ``a`` for ``"Nn"``, the bidegree
    ``(x-degree, y-degree)`` for ``"N2"``, ``(a, b)`` for ``"fine"`` and
    ``j`` for ``"standard"``.
    """
    if grading not in GRADINGS:
        raise ValueError(f"grading must be one of {GRADINGS}")
    if field is not None and field.p != spec.p:
        raise ValueError("the ideal spec was built over a different prime")
    i_max, j_max = window if window is not None else default_window(spec)
    oracle = oracle or KoszulOracle(spec, cap)
    out: dict = {}
    for (i, (a, b)), v in oracle.multigraded(i_max + 1, j_max, use_symmetry).items():
        if i == 0:
            continue
        if grading == "fine":
            deg = (a, b)
        elif grading == "Nn":
            deg = a
        elif grading == "N2":
            deg = (b, sum(a) - b)
        else:
            deg = sum(a)
        key = (i - 1, deg)
        out[key] = out.get(key, 0) + v
    return out
