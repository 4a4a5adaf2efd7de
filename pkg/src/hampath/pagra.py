"""Path graphs: per-(node, slack) encodings of the s->node paths of one length."""

from __future__ import annotations

from dataclasses import dataclass, field

from .chroma import (
    EMPTY,
    ColorAllocator,
    ColorHierarchy,
    RouteHints,
    SucoStore,
    cn,
    dep,
    dump_hierarchy,
    is_inactive,
    load_hierarchy,
    to_mask,
    top,
)


@dataclass
class RunContext:
    """State shared by every path graph of one solver run."""

    allocator: ColorAllocator = field(default_factory=ColorAllocator)
    suco: SucoStore = field(default_factory=SucoStore)


class PathGraph:
    __slots__ = ("anchor", "slack", "nodes", "arcs", "h", "hints")

    def __init__(
        self,
        anchor: int,
        slack: int,
        nodes=None,
        arcs=None,
        h: ColorHierarchy | None = None,
        hints: RouteHints | None = None,
    ):
        self.anchor = anchor
        self.slack = slack
        self.nodes: set[int] = set(nodes or ())
        self.arcs: set[tuple[int, int]] = set(arcs or ())
        self.h = h if h is not None else ColorHierarchy()
        self.hints = hints if hints is not None else RouteHints()

    @classmethod
    def empty(cls, anchor: int, slack: int) -> "PathGraph":
        return cls(anchor, slack)

    @property
    def dead(self) -> bool:
        return not len(self.h) or self.anchor not in self.nodes

    def copy(self) -> "PathGraph":
        return PathGraph(self.anchor, self.slack, self.nodes, self.arcs, self.h.copy(), self.hints.copy())

    def top(self) -> set[int]:
        return top(self.h)

    def check(self) -> None:
        """Assert the post-bleach invariants."""
        self.h.check()
        assert self.anchor in self.nodes, "anchor missing"
        for v in self.nodes:
            assert self.h.noco.get(v, 0), f"node {v} has empty noco"
        assert set(self.h.noco) <= self.nodes
        for c in self.h.colors:
            assert not is_inactive(self.h, c, self.nodes, self.anchor), f"inactive color {c}"
            assert c == EMPTY or self.h.down[c], f"color {c} has no direct predecessor"

    def __repr__(self):
        return f"PathGraph(anchor={self.anchor}, slack={self.slack}, nodes={sorted(self.nodes)}, colors={sorted(self.h.colors)})"


def init_at_start(s: int) -> "SlackSet":
    p = PathGraph(s, 0, {s}, (), ColorHierarchy.initial(s))
    return SlackSet(s, {0: p})


def add_slack(p: PathGraph, b: int, ctx: RunContext, *, inplace: bool = False) -> PathGraph:
    """Extend by arc ``anchor -> b`` and paint a fresh color at ``b``."""
    if b in p.nodes:
        raise ValueError(f"node {b} already in path graph; reno it first")
    q = p if inplace else p.copy()
    h = q.h
    parents = top(h)
    c = ctx.allocator.allocate()
    ctx.suco.set(c, h.colors)
    q.arcs.add((q.anchor, b))
    q.nodes.add(b)
    bit = 1 << c
    h.noco[b] = 0
    noco = h.noco
    for v in q.nodes:
        noco[v] |= bit
    h.add_color(c, b, parents)
    if parents:
        q.hints.down[c] = min(parents)
    for t in parents:
        q.hints.up[t] = c
    q.anchor = b
    q.slack += 1
    return q


def reno(p: PathGraph, b: int, ctx: RunContext) -> PathGraph:
    """Remove node ``b`` and bleach the colors that depended on it. Mutates ``p``."""
    if b not in p.nodes:
        return p
    blocked = cn(p.h, b)
    p.h.noco.pop(b, None)
    _drop_node(p, b)
    bleach(p, blocked, ctx)
    return p


def _drop_node(p: PathGraph, v: int) -> None:
    p.nodes.discard(v)
    p.arcs = {(x, y) for x, y in p.arcs if x != v and y != v}


def bleach(p: PathGraph, blocked: set[int], ctx: RunContext) -> None:
    h = p.h
    if len(h):
        live = [c for c in h.colors if c not in blocked and h.cono[c] in p.nodes]
        h.remove_colors(dep(h, live, blocked, ctx.suco, p.hints))
    changed = True
    while changed:
        changed = False
        doomed = [
            c
            for c in h.colors
            if is_inactive(h, c, p.nodes, p.anchor) or (c != EMPTY and not h.down[c])
        ]
        if doomed:
            h.remove_colors(doomed)
            changed = True
        for v in [v for v in p.nodes if not h.noco.get(v, 0)]:
            h.noco.pop(v, None)
            _drop_node(p, v)
            changed = True
    p.hints.up = {c: x for c, x in p.hints.up.items() if c in h}
    p.hints.down = {c: x for c, x in p.hints.down.items() if c in h}


def merge(p1: PathGraph, p2: PathGraph) -> PathGraph:
    """Keyed union of two path graphs with the same anchor and slack."""
    if p1.anchor != p2.anchor or p1.slack != p2.slack:
        raise ValueError("merge needs equal anchor and slack")
    return PathGraph(
        p1.anchor, p1.slack, p1.nodes | p2.nodes, p1.arcs | p2.arcs, p1.h.union(p2.h), p1.hints.union(p2.hints)
    )


class SlackSet:
    """The path graphs anchored at one node, keyed by slack."""

    __slots__ = ("node", "members")

    def __init__(self, node: int, members: dict[int, PathGraph] | None = None):
        self.node = node
        self.members: dict[int, PathGraph] = dict(members or {})
        for k, p in self.members.items():
            if p.anchor != node or p.slack != k:
                raise ValueError(f"member at key {k} is anchored at ({p.anchor}, {p.slack})")

    def __len__(self):
        return len(self.members)

    def slacks(self) -> list[int]:
        return sorted(self.members)

    def get(self, slack: int) -> PathGraph | None:
        return self.members.get(slack)

    def reno(self, b: int, ctx: RunContext) -> "SlackSet":
        for k in self.slacks():
            p = reno(self.members[k], b, ctx)
            if p.dead:
                del self.members[k]
        return self

    def add_slack(self, b: int, ctx: RunContext) -> "SlackSet":
        out = SlackSet(b)
        for k in self.slacks():
            out.members[k + 1] = add_slack(self.members[k], b, ctx)
        return out

    def merge(self, other: "SlackSet") -> "SlackSet":
        """Merge ``other`` into this set; members are replaced, never mutated."""
        if other.node != self.node:
            raise ValueError("slack sets anchored at different nodes")
        for k in other.slacks():
            mine = self.members.get(k)
            self.members[k] = other.members[k] if mine is None else merge(mine, other.members[k])
        return self

    def copy(self) -> "SlackSet":
        return SlackSet(self.node, {k: p.copy() for k, p in self.members.items()})


def dump_pathgraph(p: PathGraph, suco: SucoStore) -> str:
    """Fixture text: header, node and arc lists, noco rows, then the hierarchy dump."""
    lines = [f"anchor {p.anchor} slack {p.slack}"]
    lines.append("nodes " + " ".join(str(v) for v in sorted(p.nodes)))
    lines.append("arcs " + " ".join(f"{u}>{v}" for u, v in sorted(p.arcs)))
    for v in sorted(p.h.noco):
        lines.append(f"noco {v}: " + " ".join(str(c) for c in sorted(p.h.noco_set(v))))
    lines.append("colors")
    return "\n".join(line.rstrip() for line in lines) + "\n" + dump_hierarchy(p.h, suco)


def load_pathgraph(text: str) -> tuple[PathGraph, SucoStore]:
    head, _, body = text.partition("colors\n")
    h, store = load_hierarchy(body)
    anchor = slack = None
    nodes: set[int] = set()
    arcs: set[tuple[int, int]] = set()
    for line in head.splitlines():
        key, _, rest = line.partition(" ")
        if key == "anchor":
            parts = rest.split()
            anchor, slack = int(parts[0]), int(parts[2])
        elif key == "nodes":
            nodes = {int(x) for x in rest.split()}
        elif key == "arcs":
            arcs = {tuple(int(x) for x in a.split(">")) for a in rest.split()}
        elif key == "noco":
            v, _, cs = rest.partition(":")
            h.noco[int(v)] = to_mask(int(x) for x in cs.split())
        elif line.strip():
            raise ValueError(f"bad fixture line: {line!r}")
    if anchor is None:
        raise ValueError("fixture missing anchor line")
    return PathGraph(anchor, slack, nodes, arcs, h), store
