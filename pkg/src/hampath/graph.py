"""Directed graphs, problem instances, path validation and planted-instance generation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class InstanceFormatError(ValueError):
    """Raised when instance text cannot be parsed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class DiGraph:
    """Simple directed graph on nodes ``0..n-1`` stored as sorted successor tuples."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.adjacency) != self.n:
            raise ValueError("adjacency must have one entry per node")
        for u, succ in enumerate(self.adjacency):
            if any(not 0 <= v < self.n for v in succ):
                raise ValueError(f"arc out of range at node {u}")
            if u in succ:
                raise ValueError(f"self-loop at node {u}")
            if list(succ) != sorted(set(succ)):
                raise ValueError(f"successors of {u} not sorted or duplicated")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "DiGraph":
        succ: list[set[int]] = [set() for _ in range(n)]
        for u, v in arcs:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            succ[u].add(v)
        return cls(n, tuple(tuple(sorted(s)) for s in succ))

    def successors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u]]

    @property
    def m(self) -> int:
        return sum(len(s) for s in self.adjacency)

    def succ_masks(self) -> np.ndarray:
        """Successor sets as int64 bitmasks, one per node."""
        masks = np.zeros(self.n, dtype=np.int64)
        for u, succ in enumerate(self.adjacency):
            for v in succ:
                masks[u] |= 1 << v
        return masks


@dataclass(frozen=True)
class Instance:
    graph: DiGraph
    s: int
    e: int
    planted: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = self.graph.n
        if not (0 <= self.s < n and 0 <= self.e < n):
            raise ValueError("endpoints out of range")
        if n >= 2 and self.s == self.e:
            raise ValueError("s and e must differ when n >= 2")
        if self.planted is not None and not validate_path(self.graph, self.s, self.e, self.planted):
            raise ValueError("planted path is not a Hamiltonian path")

    @property
    def n(self) -> int:
        return self.graph.n


def validate_path(g: DiGraph, s: int, e: int, p: Sequence[int]) -> bool:
    """True iff ``p`` is a Hamiltonian path of ``g`` from ``s`` to ``e``."""
    if len(p) != g.n or g.n == 0:
        return False
    if p[0] != s or p[-1] != e:
        return False
    if any(not (isinstance(v, (int, np.integer)) and 0 <= v < g.n) for v in p):
        return False
    if len(set(p)) != len(p):
        return False
    return all(g.has_arc(u, v) for u, v in zip(p, p[1:]))


def dup(p: Sequence[int]) -> set[int]:
    """Nodes occurring more than once in ``p``."""
    seen: set[int] = set()
    out: set[int] = set()
    for v in p:
        if v in seen:
            out.add(v)
        seen.add(v)
    return out


def is_path_in(g: DiGraph, p: Sequence[int]) -> bool:
    """True iff ``p`` is a duplicate-free walk along arcs of ``g``."""
    return not dup(p) and all(g.has_arc(u, v) for u, v in zip(p, p[1:]))


def invert(g: DiGraph) -> DiGraph:
    return DiGraph.from_arcs(g.n, ((v, u) for u, v in g.arcs()))


def gen_graph(n: int, delta: int, seed: int) -> Instance:
    """Random instance built around a planted Hamiltonian path.

    The planted path is a uniform permutation of the nodes. Every node on it
    then draws ``delta`` targets without replacement; self-loops and arcs
    already present are dropped. Randomness comes from numpy's PCG64.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if delta < 1 or delta >= n:
        raise ValueError("delta must satisfy 1 <= delta < n")
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = [int(v) for v in rng.permutation(n)]
    arcs = set(zip(perm, perm[1:]))
    for u in perm:
        for v in rng.choice(n, size=delta, replace=False):
            v = int(v)
            if v != u:
                arcs.add((u, v))
    return Instance(DiGraph.from_arcs(n, arcs), perm[0], perm[-1], tuple(perm))


def write_instance(inst: Instance) -> str:
    arcs = inst.graph.arcs()
    lines = [f"{inst.n} {len(arcs)} {inst.s} {inst.e}"]
    lines.extend(f"{u} {v}" for u, v in arcs)
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise InstanceFormatError(lineno, f"expected {count} integers, got {len(parts)}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise InstanceFormatError(lineno, "non-integer token") from None


def read_instance(text: str) -> Instance:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise InstanceFormatError(1, "missing header")
    n, m, s, e = _ints(lines[0], 1, 4)
    if n < 1 or m < 0:
        raise InstanceFormatError(1, "bad counts")
    if not (0 <= s < n and 0 <= e < n):
        raise InstanceFormatError(1, "endpoint out of range")
    if n >= 2 and s == e:
        raise InstanceFormatError(1, "s equals e")
    if len(lines) - 1 != m:
        raise InstanceFormatError(len(lines) + 1, f"expected {m} arc lines, got {len(lines) - 1}")
    seen: set[tuple[int, int]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        u, v = _ints(line, lineno, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise InstanceFormatError(lineno, f"node id out of range in arc {u} {v}")
        if u == v:
            raise InstanceFormatError(lineno, f"self-loop at node {u}")
        if (u, v) in seen:
            raise InstanceFormatError(lineno, f"duplicate arc {u} {v}")
        seen.add((u, v))
    return Instance(DiGraph.from_arcs(n, seen), s, e)


def write_path(p: Sequence[int]) -> str:
    return " ".join(str(v) for v in p) + "\n"


def read_path(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split())


def random_instance(n: int, seed: int, density: float | None = None) -> Instance:
    """Uniform random digraph with random distinct endpoints.

    Arc density is drawn from U(0.15, 0.8) with the same generator when not
    given, so ``(n, seed)`` alone reproduces the instance.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.Generator(np.random.PCG64(seed))
    p = float(rng.uniform(0.15, 0.8)) if density is None else density
    coins = rng.random((n, n))
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and coins[u, v] < p]
    ends = rng.permutation(n)
    return Instance(DiGraph.from_arcs(n, arcs), int(ends[0]), int(ends[1]))
