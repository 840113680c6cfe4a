"""Compiled inner loops for the Koszul oracle.

A fine block ``(a, b)`` of the Koszul complex is described by the local
support of ``a`` and a lookup table from "what the exterior part consumed"
to a global sub-block id.  Module bases and multiplication-by-variable
matrices for every sub-block live in flat CSR arrays built by
:class:`binomial_betti.koszul.BlockStore`.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _inv(a, p):
    # extended Euclid; a is a nonzero residue
    t, new_t = 0, 1
    r, new_r = p, a
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % p


@njit(cache=True)
def _grow(arr, need):
    if need <= arr.shape[0]:
        return arr
    cap = max(2 * arr.shape[0], need)
    out = np.empty(cap, dtype=arr.dtype)
    out[: arr.shape[0]] = arr
    return out


@njit(cache=True)
def block_ranks(a_loc, verts, b, n, top, p, lt_gid, strides, dims_g, m_start, m_ptr, m_idx, m_val):
    """Chain-group dimensions and differential ranks of one fine block.

    Returns ``(dims, ranks)`` with ``dims[i] = dim K_i`` for ``i <= top`` and
    ``ranks[i] = rank d_i : K_i -> K_{i-1}`` for ``1 <= i <= top``.
    """
    k = a_loc.shape[0]
    count, s_code, s_size, s_gid, s_off, s_index, dims = _enumerate(a_loc, b, top, lt_gid, strides, dims_g)
    ranks = np.zeros(top + 1, dtype=np.int64)
    # top-down so that pivots of d_{i+1} clear rows of d_i
    cleared = np.zeros(dims[top], dtype=np.bool_)
    for i in range(top, 0, -1):
        if dims[i] == 0 or dims[i - 1] == 0:
            cleared = np.zeros(dims[i - 1], dtype=np.bool_)
            continue
        ptr, idx, val = _differential(
            i, k, n, count, s_code, s_size, s_gid, s_off, s_index, verts, dims[i], dims_g, m_start, m_ptr, m_idx, m_val, p
        )
        ranks[i], cleared = _rank_csr(ptr, idx, val, dims[i - 1], p, cleared)
    return dims, ranks


@njit(cache=True)
def _enumerate(a_loc, b, top, lt_gid, strides, dims_g):
    """Exterior supports ``S`` of the block with their sub-block ids and offsets."""
    k = a_loc.shape[0]
    ncode = 1 << (2 * k)
    s_index = np.full(ncode, -1, dtype=np.int64)
    s_code = np.empty(ncode, dtype=np.int64)
    s_size = np.empty(ncode, dtype=np.int64)
    s_gid = np.empty(ncode, dtype=np.int64)
    s_off = np.empty(ncode, dtype=np.int64)
    dims = np.zeros(top + 1, dtype=np.int64)
    count = 0
    for code in range(ncode):
        ok = True
        size = 0
        tcode = 0
        xs = 0
        for l in range(k):
            o = (code >> (2 * l)) & 3
            if o == 3:
                if a_loc[l] < 2:
                    ok = False
                    break
                size += 2
                tcode += 2 * strides[l]
                xs += 1
            elif o != 0:
                size += 1
                tcode += strides[l]
                if o == 1:
                    xs += 1
        if not ok or size > top or xs > b:
            continue
        gid = lt_gid[tcode * (b + 1) + xs]
        if gid < 0 or dims_g[gid] == 0:
            continue
        s_index[code] = count
        s_code[count] = code
        s_size[count] = size
        s_gid[count] = gid
        s_off[count] = dims[size]
        dims[size] += dims_g[gid]
        count += 1
    return count, s_code, s_size, s_gid, s_off, s_index, dims


@njit(cache=True)
def _differential(i, k, n, count, s_code, s_size, s_gid, s_off, s_index, verts, nrows, dims_g, m_start, m_ptr, m_idx, m_val, p):
    """CSR rows of ``d_i`` (duplicate columns already merged)."""
    two_n = 2 * n
    t_off = np.empty(2 * k, dtype=np.int64)
    t_sign = np.empty(2 * k, dtype=np.int64)
    t_ms = np.empty(2 * k, dtype=np.int64)
    ptr = np.zeros(nrows + 1, dtype=np.int64)
    cap = 16 * nrows + 16
    idx = np.empty(cap, dtype=np.int64)
    val = np.empty(cap, dtype=np.int64)
    row = 0
    used = 0
    for s in range(count):
        if s_size[s] != i:
            continue
        code = s_code[s]
        gid = s_gid[s]
        nt = 0
        xs_total = 0
        for l in range(k):
            if (code >> (2 * l)) & 1:
                xs_total += 1
        x_seen = 0
        y_seen = 0
        for l in range(k):
            o = (code >> (2 * l)) & 3
            if o & 1:
                ti = s_index[code ^ (1 << (2 * l))]
                if ti >= 0:
                    t_off[nt] = s_off[ti]
                    t_sign[nt] = -1 if (x_seen & 1) else 1
                    t_ms[nt] = m_start[gid * two_n + verts[l]]
                    nt += 1
                x_seen += 1
            if o & 2:
                ti = s_index[code ^ (2 << (2 * l))]
                if ti >= 0:
                    t_off[nt] = s_off[ti]
                    t_sign[nt] = -1 if ((xs_total + y_seen) & 1) else 1
                    t_ms[nt] = m_start[gid * two_n + n + verts[l]]
                    nt += 1
                y_seen += 1
        for r in range(dims_g[gid]):
            need = used
            for q in range(nt):
                ms = t_ms[q]
                need += m_ptr[ms + r + 1] - m_ptr[ms + r]
            idx = _grow(idx, need)
            val = _grow(val, need)
            # distinct (S \ t) blocks never overlap, so no duplicates arise
            for q in range(nt):
                ms = t_ms[q]
                off = t_off[q]
                sg = t_sign[q]
                for e in range(m_ptr[ms + r], m_ptr[ms + r + 1]):
                    idx[used] = off + m_idx[e]
                    val[used] = (sg * m_val[e]) % p
                    used += 1
            row += 1
            ptr[row] = used
    return ptr, idx, val


@njit(cache=True)
def _rank_csr(ptr, idx, val, ncols, p, cleared):
    """Rank mod ``p`` of a CSR matrix by row echelon reduction.

    Rows are reduced from the last to the first, each against the pivots
    found so far (leading entry = smallest column).  Rows flagged in
    ``cleared`` are skipped: when the matrix is a differential ``d_i`` and
    the flags mark the pivot columns of ``d_{i+1}`` found the same way, such
    a row lies in the span of the rows after it.  Returns the rank and the
    pivot-column flags (which clear rows of ``d_{i-1}``).
    """
    nrows = ptr.shape[0] - 1
    buf = np.zeros(ncols, dtype=np.int64)
    piv = np.full(ncols, -1, dtype=np.int64)
    lows = np.zeros(ncols, dtype=np.bool_)
    limit = min(nrows, ncols)
    p_start = np.empty(limit + 1, dtype=np.int64)
    p_col = np.empty(4 * ncols + 16, dtype=np.int64)
    p_val = np.empty(4 * ncols + 16, dtype=np.int64)
    used = 0
    rank = 0
    for r in range(nrows - 1, -1, -1):
        if rank == limit:
            break
        if cleared[r] or ptr[r + 1] == ptr[r]:
            continue
        lo = ncols
        for e in range(ptr[r], ptr[r + 1]):
            c = idx[e]
            buf[c] = val[e]
            if c < lo:
                lo = c
        c = lo
        while c < ncols:
            v = buf[c] % p
            if v == 0:
                buf[c] = 0
                c += 1
                continue
            pr = piv[c]
            if pr >= 0:
                for e in range(p_start[pr], p_start[pr + 1]):
                    cc = p_col[e]
                    buf[cc] = (buf[cc] - v * p_val[e]) % p
                c += 1
                continue
            iv = _inv(v, p)
            p_start[rank] = used
            need = used + (ncols - c)
            p_col = _grow(p_col, need)
            p_val = _grow(p_val, need)
            for cc in range(c, ncols):
                w = buf[cc] % p
                if w != 0:
                    p_col[used] = cc
                    p_val[used] = w * iv % p
                    used += 1
            p_start[rank + 1] = used
            piv[c] = rank
            lows[c] = True
            rank += 1
            break
        for cc in range(lo, ncols):
            buf[cc] = 0
    return rank, lows
