"""Path-class colors and the color hierarchy.

An arc ``c1 -> c2`` in a hierarchy means every path of class ``c1`` is a
prefix of some path of class ``c2``. New colors are painted on top of the
current sinks, so ``top`` holds the newest colors and ``base`` the empty
color painted on the start node.

``suco`` (sub-colors) is a run-wide store. A color's entry is fixed when the
color is painted and never changes; per-graph views intersect it with the
graph's live colors.
"""

from __future__ import annotations

from typing import Iterable, Literal, Mapping

EMPTY = 0

Direction = Literal["up", "down"]


class EmptyHierarchyError(ValueError):
    """The hierarchy has no colors left."""


class ColorAllocator:
    def __init__(self):
        self._next = EMPTY + 1

    def allocate(self) -> int:
        c = self._next
        self._next += 1
        return c

    @property
    def allocated(self) -> int:
        return self._next - 1


class _Masks(dict):
    def __missing__(self, key):
        return 0


class SucoStore:
    """Run-wide map ``color -> frozenset of sub-colors``.

    Entries are also kept as int bitmasks (bit ``c`` set for sub-color ``c``)
    for the traversal kernels.
    """

    def __init__(self, data: Mapping[int, Iterable[int]] | None = None):
        self._data: dict[int, frozenset[int]] = {}
        self._mask: dict[int, int] = _Masks()
        for c, members in (data or {}).items():
            self.set(c, members)

    def set(self, c: int, members: Iterable[int]) -> None:
        if c in self._data:
            raise ValueError(f"suco({c}) already set")
        members = frozenset(members)
        self._data[c] = members
        self._mask[c] = to_mask(members)

    def __getitem__(self, c: int) -> frozenset[int]:
        return self._data.get(c, frozenset())

    def mask(self, c: int) -> int:
        return self._mask[c]

    @property
    def masks(self) -> dict[int, int]:
        return self._mask

    def __contains__(self, c: int) -> bool:
        return c in self._data

    def view(self, colors: Iterable[int]) -> dict[int, frozenset[int]]:
        colors = set(colors)
        return {c: self[c] & colors for c in sorted(colors)}


def to_mask(colors: Iterable[int]) -> int:
    m = 0
    for c in colors:
        m |= 1 << c
    return m


def from_mask(mask: int) -> set[int]:
    out = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask ^= low
    return out


class ColorHierarchy:
    """Color DAG plus the color->node (``cono``) and node->colors (``noco``) maps.

    Adjacency sets are frozensets and ``noco`` values are color bitmasks, so a
    copy is a handful of shallow dict copies; every mutation replaces values
    rather than editing them in place.
    """

    __slots__ = ("up", "down", "cono", "noco")

    def __init__(self):
        self.up: dict[int, frozenset[int]] = {}
        self.down: dict[int, frozenset[int]] = {}
        self.cono: dict[int, int] = {}
        self.noco: dict[int, int] = {}

    @classmethod
    def initial(cls, s: int) -> "ColorHierarchy":
        h = cls()
        h.add_color(EMPTY, s, ())
        h.noco[s] = 1 << EMPTY
        return h

    @property
    def colors(self):
        return self.up.keys()

    def __len__(self) -> int:
        return len(self.up)

    def __contains__(self, c: int) -> bool:
        return c in self.up

    def copy(self) -> "ColorHierarchy":
        h = ColorHierarchy()
        h.up = self.up.copy()
        h.down = self.down.copy()
        h.cono = self.cono.copy()
        h.noco = self.noco.copy()
        return h

    def noco_set(self, v: int) -> set[int]:
        return from_mask(self.noco.get(v, 0))

    def add_color(self, c: int, node: int, parents: Iterable[int]) -> None:
        """Insert ``c`` at ``node`` with arcs ``p -> c`` for every parent ``p``."""
        if c in self.up:
            raise ValueError(f"color {c} already present")
        parents = frozenset(parents)
        for p in parents:
            if p >= c:
                raise ValueError("arcs must respect allocation order")
            self.up[p] = self.up[p] | {c}
        self.up[c] = frozenset()
        self.down[c] = parents
        self.cono[c] = node

    def remove_colors(self, doomed: Iterable[int]) -> None:
        doomed = set(doomed)
        if not doomed:
            return
        touched_up: set[int] = set()
        touched_down: set[int] = set()
        for c in doomed:
            touched_up.update(self.down.pop(c))
            touched_down.update(self.up.pop(c))
            self.cono.pop(c, None)
        for p in touched_up - doomed:
            self.up[p] = self.up[p] - doomed
        for q in touched_down - doomed:
            self.down[q] = self.down[q] - doomed
        keep = ~to_mask(doomed)
        self.noco = {v: m & keep for v, m in self.noco.items()}

    def remove_color(self, c: int) -> None:
        self.remove_colors((c,))

    def arcs(self) -> list[tuple[int, int]]:
        return sorted((c1, c2) for c1, ups in self.up.items() for c2 in ups)

    def n_arcs(self) -> int:
        return sum(len(v) for v in self.up.values())

    def union(self, other: "ColorHierarchy") -> "ColorHierarchy":
        h = self.copy()
        for attr in ("up", "down"):
            mine, theirs = getattr(h, attr), getattr(other, attr)
            for c, s in theirs.items():
                cur = mine.get(c)
                if cur is None:
                    mine[c] = s
                elif cur is not s and not s <= cur:
                    mine[c] = cur | s
        h.cono.update(other.cono)
        for v, m in other.noco.items():
            h.noco[v] = h.noco.get(v, 0) | m
        return h

    def check(self) -> None:
        """Assert structural integrity: arc symmetry and allocation-ordered arcs."""
        for c, ups in self.up.items():
            for q in ups:
                assert q > c, f"arc {c}->{q} violates allocation order"
                assert c in self.down[q], f"arc {c}->{q} missing reverse entry"
        for c, downs in self.down.items():
            for p in downs:
                assert c in self.up[p]
        assert self.cono.keys() == self.up.keys()


def cn(h: ColorHierarchy, v: int) -> set[int]:
    """Colors allocated at node ``v``."""
    return {c for c, node in h.cono.items() if node == v}


def cn_sizes(h: ColorHierarchy) -> dict[int, int]:
    sizes: dict[int, int] = {}
    for node in h.cono.values():
        sizes[node] = sizes.get(node, 0) + 1
    return sizes


def top(h: ColorHierarchy) -> set[int]:
    if not len(h):
        raise EmptyHierarchyError("hierarchy exhausted")
    return {c for c, ups in h.up.items() if not ups}


def base(h: ColorHierarchy) -> set[int]:
    if not len(h):
        raise EmptyHierarchyError("hierarchy exhausted")
    return {c for c, downs in h.down.items() if not downs}


def is_inactive(h: ColorHierarchy, c: int, nodes: Iterable[int], anchor: int | None = None) -> bool:
    """Inactivity predicate for color ``c`` within a graph on ``nodes``.

    The last clause flags a dangling color: one with no super-color whose
    node is not the anchor, so it cannot be among the anchor's top colors.
    """
    node = h.cono.get(c)
    if node is None:
        return True
    if node not in nodes:
        return True
    if not h.noco.get(node, 0):
        return True
    if anchor is not None and not h.up.get(c) and node != anchor:
        return True
    return False


class _Frontier:
    """Per-traversal precomputation for one (hierarchy, blockers, direction).

    ``reach`` holds the colors with any blocker-free arc route to a target.
    The path state of the DFS is projected onto what can still matter from a
    color ``x``: going up, path colors that sit in the suco of every color
    still reachable from ``x`` are dropped; going down, only colors still
    reachable from ``x`` are kept. The projected key is monotone (a larger key
    is never easier), so failed keys are kept as an antichain of minimal sets.
    """

    def __init__(self, h: ColorHierarchy, blocked: set[int], suco: SucoStore, up: bool, targets: set[int]):
        self.up = up
        self.targets = targets
        self.blocked = blocked
        self.nbrs = h.up if up else h.down
        back = h.down if up else h.up
        reach = {t for t in targets if t not in blocked}
        stack = list(reach)
        while stack:
            x = stack.pop()
            for y in back[x]:
                if y not in reach and y not in blocked:
                    reach.add(y)
                    stack.append(y)
        self.reach = reach
        self._smask = suco.masks.__getitem__
        self._order: dict[int, list[int]] = {}
        self._fut: dict[int, int] = {}
        self._common: dict[int, int] = {}
        self.failed: dict[int, list[int]] = {}

    def order(self, x: int) -> list[int]:
        nxt = self._order.get(x)
        if nxt is None:
            reach = self.reach
            nxt = self._order[x] = [y for y in sorted(self.nbrs[x]) if y in reach]
        return nxt

    def _fill(self, x: int) -> None:
        # post-order over the reachable region; arcs point from lower to higher ids
        stack = [x]
        while stack:
            y = stack[-1]
            pending = [z for z in self.order(y) if z not in self._fut]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            if y in self._fut:
                continue
            f, c = 0, -1
            for z in self.order(y):
                f |= (1 << z) | self._fut[z]
                if self.up:
                    c &= self._smask(z) & self._common[z]
            self._fut[y] = f
            self._common[y] = c

    def key(self, x: int, pmask: int, allowed: int) -> int:
        if x not in self._fut:
            self._fill(x)
        if self.up:
            return pmask & ~self._common[x]
        return self._fut[x] & ~allowed

    def hit(self, x: int, key: int) -> bool:
        olds = self.failed.get(x)
        if not olds:
            return False
        for old in olds:
            if old & key == old:
                return True
        return False

    def add(self, x: int, key: int) -> None:
        olds = self.failed.get(x)
        if olds is None:
            self.failed[x] = [key]
        else:
            olds[:] = [o for o in olds if o & key != key]
            olds.append(key)


def suco_dfs(
    h: ColorHierarchy,
    a: int,
    blocked: Iterable[int],
    suco: SucoStore,
    direction: Direction,
    *,
    frontier: _Frontier | None = None,
) -> list[int]:
    """Constrained DFS from ``a`` to a top (``up``) or base (``down``) color.

    Colors in ``blocked`` are skipped. Going up, a step onto ``c2`` needs every
    color already on the path to be in ``suco(c2)``; going down, ``c2`` must be
    in ``suco(c)`` for every ``c`` already on the path. Neighbors are tried in
    ascending id order. Returns the color path (starting at ``a``) or ``[]``.
    """
    if a not in h:
        raise KeyError(f"unknown color {a}")
    if direction not in ("up", "down"):
        raise ValueError(f"bad direction {direction!r}")
    up = direction == "up"
    if frontier is None:
        blocked = blocked if isinstance(blocked, (set, frozenset)) else set(blocked)
        frontier = _Frontier(h, blocked, suco, up, top(h) if up else base(h))
    targets = frontier.targets
    if a in targets:
        return [a]
    # a blocked start may still leave through unblocked neighbors
    if a not in frontier.reach and not frontier.order(a):
        return []
    smask = suco.masks.__getitem__
    order = frontier.order
    path = [a]

    def visit(c: int, pmask: int, allowed: int) -> bool:
        for nxt in order(c):
            bit = 1 << nxt
            if up:
                if pmask & ~smask(nxt):
                    continue
                nxt_allowed = 0
            else:
                if not allowed & bit:
                    continue
                nxt_allowed = allowed & smask(nxt)
            path.append(nxt)
            if nxt in targets:
                return True
            nxt_mask = pmask | bit
            key = frontier.key(nxt, nxt_mask, nxt_allowed)
            if not frontier.hit(nxt, key):
                if visit(nxt, nxt_mask, nxt_allowed):
                    return True
                frontier.add(nxt, key)
            path.pop()
        return False

    found = visit(a, 1 << a, 0 if up else smask(a))
    return path if found else []


class RouteHints:
    """Next-hop pointers toward top (``up``) and base (``down``) per color.

    Hints only speed up :func:`dep`: a hinted chain is re-verified hop by hop
    (arcs, blockers and the suco constraint) before it counts as a route, so
    stale or conflicting hints never change the result.
    """

    __slots__ = ("up", "down")

    def __init__(self, up: dict[int, int] | None = None, down: dict[int, int] | None = None):
        self.up: dict[int, int] = dict(up or {})
        self.down: dict[int, int] = dict(down or {})

    def copy(self) -> "RouteHints":
        return RouteHints(self.up, self.down)

    def union(self, other: "RouteHints") -> "RouteHints":
        out = other.copy()
        out.up.update(self.up)
        out.down.update(self.down)
        return out

    def record(self, path: list[int], direction: Direction) -> None:
        nxt = self.up if direction == "up" else self.down
        for x, y in zip(path, path[1:]):
            nxt[x] = y


def _follow(h, c, nxt, blocked, targets, suco, up) -> list[int] | None:
    nbrs = h.up if up else h.down
    smask = suco.masks.__getitem__
    pmask, allowed = 1 << c, smask(c)
    path = [c]
    x = c
    while x not in targets:
        y = nxt.get(x)
        if y is None or y in blocked or y not in nbrs.get(x, ()):
            return None
        if up:
            if pmask & ~smask(y):
                return None
        else:
            if not (allowed >> y) & 1:
                return None
            allowed &= smask(y)
        if (pmask >> y) & 1:
            return None
        pmask |= 1 << y
        path.append(y)
        x = y
    return path


def dep(
    h: ColorHierarchy,
    colors: Iterable[int],
    blocked: Iterable[int],
    suco: SucoStore,
    hints: RouteHints | None = None,
) -> set[int]:
    """Colors of ``colors`` with no blocker-avoiding route to top or to base."""
    blocked = set(blocked)
    if not len(h):
        return set()
    colors = sorted(colors)
    out: set[int] = set()
    # every suffix of a traversable path is itself traversable, so one
    # success settles every color on the returned path
    for direction, targets, seq in (("up", top(h), colors), ("down", base(h), colors[::-1])):
        up = direction == "up"
        nxt = None if hints is None else (hints.up if up else hints.down)
        frontier = None
        ok: set[int] = set()
        for c in seq:
            if c in ok or c in out:
                continue
            p = None if nxt is None else _follow(h, c, nxt, blocked, targets, suco, up)
            if p is None:
                if frontier is None:
                    frontier = _Frontier(h, blocked, suco, up, targets)
                p = suco_dfs(h, c, blocked, suco, direction, frontier=frontier)
                if p and hints is not None:
                    hints.record(p, direction)
            if p:
                ok.update(p)
            else:
                out.add(c)
    return out


def dump_hierarchy(h: ColorHierarchy, suco: SucoStore) -> str:
    """One line per color: ``C cono(C) parents... | suco-members...``.

    Parents are the colors ``C`` was painted on (arcs ``p -> C``); suco members
    are restricted to colors present in ``h``.
    """
    view = suco.view(h.colors)
    lines = []
    for c in sorted(h.colors):
        node = h.cono.get(c)
        head = [str(c), "-" if node is None else str(node)] + [str(p) for p in sorted(h.down[c])]
        lines.append(" ".join(head) + " | " + " ".join(str(x) for x in sorted(view[c])))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def load_hierarchy(text: str) -> tuple[ColorHierarchy, SucoStore]:
    """Inverse of :func:`dump_hierarchy`; ``noco`` is left empty."""
    h = ColorHierarchy()
    store = SucoStore()
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        left, _, right = line.partition("|")
        head = left.split()
        c = int(head[0])
        rows.append((c, head[1], [int(x) for x in head[2:]], [int(x) for x in right.split()]))
    for c, node, parents, members in sorted(rows):
        h.add_color(c, -1 if node == "-" else int(node), parents)
        if node == "-":
            del h.cono[c]
        store.set(c, members)
    return h, store
