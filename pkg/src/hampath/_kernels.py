"""Bitmask kernels behind the exact oracles.

Each kernel has a loop form (compiled with numba) and a fallback written with
numpy vector ops or plain Python. ``impl`` selects one explicitly; ``None``
follows the ``HAMPATH_DISABLE_NUMBA`` flag.
"""

from __future__ import annotations

import numpy as np

from . import _accel


def _subset_reach_loops(succ, n, s):
    # reach[mask] = bitmask of endpoints v such that a simple path from s
    # visits exactly the nodes of mask and stops at v
    reach = np.zeros(1 << n, dtype=np.int32)
    reach[1 << s] = np.int32(1 << s)
    for mask in range(1 << n):
        r = reach[mask]
        if r == 0:
            continue
        for v in range(n):
            if (r >> v) & 1:
                out = succ[v] & ~mask
                w = 0
                while out:
                    if out & 1:
                        reach[mask | (1 << w)] |= np.int32(1 << w)
                    out >>= 1
                    w += 1
    return reach


def _subset_reach_numpy(succ, n, s):
    reach = np.zeros(1 << n, dtype=np.int32)
    reach[1 << s] = np.int32(1 << s)
    masks = np.arange(1 << n, dtype=np.int64)
    has_s = (masks >> s) & 1 == 1
    pop = np.bitwise_count(masks)
    for k in range(1, n):
        layer = masks[has_s & (pop == k)]
        r = reach[layer]
        live = r != 0
        layer, r = layer[live], r[live]
        for v in range(n):
            sel = layer[(r >> v) & 1 == 1]
            if sel.size == 0:
                continue
            for w in range(n):
                if not (int(succ[v]) >> w) & 1:
                    continue
                tgt = sel[(sel >> w) & 1 == 0] | (1 << w)
                reach[tgt] |= np.int32(1 << w)
    return reach


def _count_paths_loops(succ, n, s, e, cap):
    # iterative DFS over simple paths from s; counts those covering all
    # nodes and ending at e, stopping once cap is reached
    full = (1 << n) - 1
    witness = np.full(n, -1, dtype=np.int64)
    if n == 1:
        if s == e:
            witness[0] = s
            return 1, witness
        return 0, witness
    path = np.zeros(n, dtype=np.int64)
    rem = np.zeros(n, dtype=np.int64)
    path[0] = s
    visited = 1 << s
    rem[0] = succ[s] & ~visited
    depth = 0
    count = 0
    while depth >= 0:
        r = rem[depth]
        if r == 0:
            visited &= ~(1 << path[depth])
            depth -= 1
            continue
        w = 0
        while not (r >> w) & 1:
            w += 1
        rem[depth] = r & (r - 1)
        d = depth + 1
        path[d] = w
        visited |= 1 << w
        if visited == full:
            if w == e:
                if count == 0:
                    for i in range(n):
                        witness[i] = path[i]
                count += 1
                if count >= cap:
                    break
            visited &= ~(1 << w)
        elif w == e:
            visited &= ~(1 << w)
        else:
            rem[d] = succ[w] & ~visited
            depth = d
    return count, witness


def _count_paths_python(succ, n, s, e, cap):
    succ = [int(x) for x in succ]
    full = (1 << n) - 1
    witness = np.full(n, -1, dtype=np.int64)
    if n == 1:
        if s == e:
            witness[0] = s
            return 1, witness
        return 0, witness
    count = 0
    path = [s]

    def rec(u, visited):
        nonlocal count
        out = succ[u] & ~visited
        w = 0
        while out and count < cap:
            if out & 1:
                vis = visited | (1 << w)
                path.append(w)
                if vis == full:
                    if w == e:
                        if count == 0:
                            witness[:] = path
                        count += 1
                elif w != e:
                    rec(w, vis)
                path.pop()
            out >>= 1
            w += 1

    rec(s, 1 << s)
    return count, witness


def _length_reach_loops(succ, n, s):
    # table[j, v] = 1 iff some simple path from s with j arcs ends at v
    table = np.zeros((n, n), dtype=np.uint8)
    table[0, s] = 1
    path = np.zeros(n, dtype=np.int64)
    rem = np.zeros(n, dtype=np.int64)
    path[0] = s
    visited = 1 << s
    rem[0] = succ[s] & ~visited
    depth = 0
    while depth >= 0:
        r = rem[depth]
        if r == 0:
            visited &= ~(1 << path[depth])
            depth -= 1
            continue
        w = 0
        while not (r >> w) & 1:
            w += 1
        rem[depth] = r & (r - 1)
        d = depth + 1
        path[d] = w
        visited |= 1 << w
        table[d, w] = 1
        rem[d] = succ[w] & ~visited
        depth = d
    return table


def _length_reach_python(succ, n, s):
    succ = [int(x) for x in succ]
    table = np.zeros((n, n), dtype=np.uint8)
    table[0, s] = 1

    def rec(u, visited, d):
        out = succ[u] & ~visited
        w = 0
        while out:
            if out & 1:
                table[d + 1, w] = 1
                rec(w, visited | (1 << w), d + 1)
            out >>= 1
            w += 1

    rec(s, 1 << s, 0)
    return table


_subset_reach_jit = _accel.njit(_subset_reach_loops)
_count_paths_jit = _accel.njit(_count_paths_loops)
_length_reach_jit = _accel.njit(_length_reach_loops)


def _pick(impl: str | None) -> bool:
    if impl is None:
        return _accel.USE_NUMBA
    if impl == "numba":
        if not _accel.HAVE_NUMBA:
            raise RuntimeError("numba is not installed")
        return True
    if impl == "numpy":
        return False
    raise ValueError(f"unknown kernel implementation {impl!r}")


def subset_reach(succ: np.ndarray, n: int, s: int, impl: str | None = None) -> np.ndarray:
    succ = np.ascontiguousarray(succ, dtype=np.int64)
    if _pick(impl):
        return _subset_reach_jit(succ, n, s)
    return _subset_reach_numpy(succ, n, s)


def count_paths(succ: np.ndarray, n: int, s: int, e: int, cap: int, impl: str | None = None):
    succ = np.ascontiguousarray(succ, dtype=np.int64)
    if _pick(impl):
        count, witness = _count_paths_jit(succ, n, s, e, cap)
    else:
        count, witness = _count_paths_python(succ, n, s, e, cap)
    return int(count), witness


def length_reach(succ: np.ndarray, n: int, s: int, impl: str | None = None) -> np.ndarray:
    succ = np.ascontiguousarray(succ, dtype=np.int64)
    if _pick(impl):
        return _length_reach_jit(succ, n, s)
    return _length_reach_python(succ, n, s)
