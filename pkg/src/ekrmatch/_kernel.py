"""Compiled branch and bound clique kernel over uint64 word bit rows."""

from __future__ import annotations

import numpy as np
from numba import njit

_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_DEBRUIJN_TABLE = np.array(
    [
        0, 1, 48, 2, 57, 49, 28, 3, 61, 58, 50, 42, 38, 29, 17, 4,
        62, 55, 59, 36, 53, 51, 43, 22, 45, 39, 33, 30, 24, 18, 12, 5,
        63, 47, 56, 27, 60, 41, 37, 16, 54, 35, 52, 21, 44, 32, 23, 11,
        46, 26, 40, 15, 34, 20, 31, 10, 25, 14, 19, 9, 13, 8, 7, 6,
    ],
    dtype=np.int64,
)


def to_words(mask: int, width: int) -> np.ndarray:
    out = np.zeros(width, dtype=np.uint64)
    for w in range(width):
        out[w] = (mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def rows_to_words(rows, order: int) -> np.ndarray:
    width = max(1, (order + 63) // 64)
    out = np.zeros((len(rows), width), dtype=np.uint64)
    for i, r in enumerate(rows):
        out[i] = to_words(r, width)
    return out


@njit(cache=True)
def _lowest(word, table, debruijn):
    low = word & (~word + np.uint64(1))
    return table[np.int64((low * debruijn) >> np.uint64(58))]


@njit(cache=True)
def _colour_sort(p, adj, order, colours, table, debruijn):
    width = p.shape[0]
    u = p.copy()
    q = np.empty(width, dtype=np.uint64)
    count = 0
    colour = 0
    one = np.uint64(1)
    while True:
        empty = True
        for w in range(width):
            if u[w]:
                empty = False
                break
        if empty:
            return count
        colour += 1
        for w in range(width):
            q[w] = u[w]
        w = 0
        while w < width:
            if q[w] == 0:
                w += 1
                continue
            b = _lowest(q[w], table, debruijn)
            v = 64 * w + b
            q[w] &= ~(one << np.uint64(b))
            u[w] &= ~(one << np.uint64(b))
            for x in range(w, width):
                q[x] &= ~adj[v, x]
            order[count] = v
            colours[count] = colour
            count += 1


@njit(cache=True)
def clique_search(adj, p0, start_size, best_size, table, debruijn):
    """Extend a fixed prefix of ``start_size`` vertices inside candidate set ``p0``.

    Returns (best total size, extension vertices, nodes); the extension is
    empty when nothing beats ``best_size``.
    """
    n = adj.shape[0]
    width = adj.shape[1]
    root_order = np.zeros(n, dtype=np.int64)
    root_colours = np.zeros(n, dtype=np.int64)
    count = _colour_sort(p0, adj, root_order, root_colours, table, debruijn)
    # a clique inside p0 has at most as many vertices as root colours
    depth_cap = (root_colours[count - 1] if count else 0) + 2
    p = np.zeros((depth_cap, width), dtype=np.uint64)
    order = np.zeros((depth_cap, n), dtype=np.int64)
    colours = np.zeros((depth_cap, n), dtype=np.int64)
    pos = np.zeros(depth_cap, dtype=np.int64)
    current = np.zeros(depth_cap, dtype=np.int64)
    best = np.zeros(depth_cap, dtype=np.int64)
    best_len = 0
    one = np.uint64(1)

    for w in range(width):
        p[0, w] = p0[w]
    order[0] = root_order
    colours[0] = root_colours
    nodes = 1
    pos[0] = count - 1
    level = 0
    size = 0  # vertices added below the prefix
    while level >= 0:
        idx = pos[level]
        if idx < 0 or start_size + size + colours[level, idx] <= best_size:
            level -= 1
            if level >= 0:
                size -= 1
            continue
        pos[level] = idx - 1
        v = order[level, idx]
        current[size] = v
        size += 1
        p[level, v // 64] &= ~(one << np.uint64(v % 64))
        nonempty = False
        for w in range(width):
            x = p[level, w] & adj[v, w]
            p[level + 1, w] = x
            if x:
                nonempty = True
        if not nonempty:
            if start_size + size > best_size:
                best_size = start_size + size
                best_len = size
                for i in range(size):
                    best[i] = current[i]
            size -= 1
            continue
        level += 1
        nodes += 1
        pos[level] = _colour_sort(p[level], adj, order[level], colours[level], table, debruijn) - 1
    return best_size, best[:best_len].copy(), nodes


def run_clique_search(adj_words: np.ndarray, p_mask: int, start_size: int, best_size: int):
    width = adj_words.shape[1]
    return clique_search(
        adj_words, to_words(p_mask, width), start_size, best_size, _DEBRUIJN_TABLE, _DEBRUIJN
    )
