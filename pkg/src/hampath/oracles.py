"""Exact Hamiltonian path deciders used as ground truth."""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels
from .graph import Instance, validate_path

HELD_KARP_MAX_N = 27
BACKTRACK_COUNT_MAX_N = 12


class OracleCapacityError(ValueError):
    pass


@dataclass(frozen=True)
class OracleAnswer:
    exists: bool
    witness: tuple[int, ...] | None = None
    count: int | None = None


def held_karp(inst: Instance, max_n: int = HELD_KARP_MAX_N, impl: str | None = None) -> OracleAnswer:
    """Subset DP over (visited set, endpoint) states.

    The witness is rebuilt backwards from ``e``, always taking the smallest
    feasible predecessor.
    """
    g, n, s, e = inst.graph, inst.n, inst.s, inst.e
    if n > max_n:
        raise OracleCapacityError(f"held_karp guard: n={n} > {max_n}")
    if n == 1:
        return OracleAnswer(True, (s,))
    reach = _kernels.subset_reach(g.succ_masks(), n, s, impl=impl)
    full = (1 << n) - 1
    if not (int(reach[full]) >> e) & 1:
        return OracleAnswer(False)
    path = [e]
    mask, cur = full, e
    while mask != 1 << s:
        prev = mask ^ (1 << cur)
        ends = int(reach[prev])
        cur = next(u for u in range(n) if (ends >> u) & 1 and g.has_arc(u, cur))
        path.append(cur)
        mask = prev
    witness = tuple(reversed(path))
    assert validate_path(g, s, e, witness)
    return OracleAnswer(True, witness)


def backtrack(inst: Instance, cap: int = 10**9, impl: str | None = None) -> OracleAnswer:
    """Depth-first enumeration of simple paths from ``s``; counts H-paths up to ``cap``."""
    n = inst.n
    if n > 62:
        raise OracleCapacityError("bitmask enumeration limited to 62 nodes")
    count, witness = _kernels.count_paths(inst.graph.succ_masks(), n, inst.s, inst.e, cap, impl=impl)
    if count == 0:
        return OracleAnswer(False, None, 0)
    w = tuple(int(v) for v in witness)
    assert validate_path(inst.graph, inst.s, inst.e, w)
    return OracleAnswer(True, w, count)


def simple_path_lengths(inst: Instance, impl: str | None = None) -> dict[int, set[int]]:
    """Map ``j -> {v : some simple s->v path has exactly j arcs}`` by enumeration."""
    table = _kernels.length_reach(inst.graph.succ_masks(), inst.n, inst.s, impl=impl)
    return {j: {int(v) for v in table[j].nonzero()[0]} for j in range(inst.n) if table[j].any()}
