import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hampath.chroma import (
    EMPTY,
    ColorAllocator,
    ColorHierarchy,
    EmptyHierarchyError,
    RouteHints,
    SucoStore,
    base,
    cn,
    dep,
    dump_hierarchy,
    from_mask,
    is_inactive,
    load_hierarchy,
    suco_dfs,
    to_mask,
    top,
)

from conftest import fixture_text


def chain(k, suco_full=True):
    """EMPTY=0 -> 1 -> ... -> k, color i at node i."""
    h = ColorHierarchy.initial(0)
    store = SucoStore()
    store.set(0, ())
    for c in range(1, k + 1):
        h.add_color(c, c, [c - 1])
        store.set(c, range(c) if suco_full else [c - 1])
    for v in range(k + 1):
        h.noco[v] = to_mask(range(k + 1))
    return h, store


# literal reference traversal -------------------------------------------------


def legal_step(path, nxt, suco, up):
    if up:
        return set(path) <= suco[nxt]
    return all(nxt in suco[c] for c in path)


def brute_routes(h, a, blocked, suco, up):
    """Every legal color path from a to a top (up) or base (down) color."""
    targets = top(h) if up else base(h)
    nbrs = h.up if up else h.down
    out = []

    def rec(path):
        x = path[-1]
        if x in targets:
            out.append(list(path))
            return
        for y in sorted(nbrs[x]):
            if y in blocked or y in path or not legal_step(path, y, suco, up):
                continue
            rec(path + [y])

    rec([a])
    return out


def brute_dep(h, colors, blocked, suco):
    return {
        c
        for c in colors
        if not brute_routes(h, c, blocked, suco, True) or not brute_routes(h, c, blocked, suco, False)
    }


def store_dict(store, h):
    return {c: set(store[c]) for c in h.colors}


@st.composite
def hierarchies(draw, max_colors=10):
    """Random id-ordered DAGs with arbitrary suco sets, rooted at EMPTY."""
    k = draw(st.integers(1, max_colors))
    h = ColorHierarchy.initial(0)
    store = SucoStore()
    store.set(0, ())
    for c in range(1, k):
        parents = draw(st.sets(st.integers(0, c - 1), min_size=1, max_size=3))
        h.add_color(c, draw(st.integers(0, 5)), parents)
        lower = draw(st.sets(st.integers(0, c - 1)))
        store.set(c, lower | (parents if draw(st.booleans()) else set()))
    blocked = draw(st.sets(st.integers(0, k - 1), max_size=3))
    return h, store, blocked


class TestAllocator:
    def test_monotone_unique(self):
        a = ColorAllocator()
        ids = [a.allocate() for _ in range(50)]
        assert ids == list(range(1, 51)) and a.allocated == 50


class TestSucoStore:
    def test_fixed_at_paint(self):
        s = SucoStore()
        s.set(3, [0, 1])
        with pytest.raises(ValueError):
            s.set(3, [0])
        assert s[3] == {0, 1} and s.mask(3) == 0b11 and 3 in s

    def test_view_and_masks(self):
        s = SucoStore({2: [0, 1], 1: [0]})
        assert s.view([0, 2]) == {0: frozenset(), 2: frozenset({0})}
        assert s.mask(99) == 0
        assert from_mask(to_mask({0, 5, 9})) == {0, 5, 9}


class TestMaps:
    def test_cn(self):
        h = ColorHierarchy.initial(4)
        assert cn(h, 4) == {EMPTY}
        h.add_color(1, 7, [0])
        assert 1 in cn(h, 7)
        assert cn(h, 99) == set()

    def test_top_base(self):
        h = ColorHierarchy.initial(0)
        assert top(h) == base(h) == {EMPTY}
        h, _ = chain(2)
        assert top(h) == {2} and base(h) == {0}
        with pytest.raises(EmptyHierarchyError):
            top(ColorHierarchy())
        with pytest.raises(EmptyHierarchyError):
            base(ColorHierarchy())

    def test_new_color_is_top(self):
        h, _ = chain(3)
        h.add_color(4, 9, sorted(top(h)))
        assert top(h) == {4}

    def test_parent_order_enforced(self):
        h, _ = chain(2)
        with pytest.raises(ValueError):
            h.add_color(1, 5, [2])

    def test_remove_and_union(self):
        h, _ = chain(3)
        g = h.copy()
        g.remove_colors([2])
        assert 2 not in g and 3 in g and not g.down[3] and not g.up[1]
        assert 2 in h
        u = g.union(h)
        assert u.arcs() == h.arcs() and set(u.colors) == set(h.colors)
        u.check()


class TestInactive:
    def test_fresh_empty(self):
        h = ColorHierarchy.initial(0)
        assert not is_inactive(h, EMPTY, {0}, 0)

    def test_node_removed(self):
        h, _ = chain(2)
        assert is_inactive(h, 1, {0, 2})

    def test_dangling_mid_color(self):
        h, _ = chain(2)
        h.remove_colors([2])
        # color 1 lost its only super-color and is not at the anchor
        assert is_inactive(h, 1, {0, 1, 2}, anchor=2)
        assert not is_inactive(h, 1, {0, 1, 2}, anchor=1)

    def test_empty_noco(self):
        h, _ = chain(1)
        h.noco[1] = 0
        assert is_inactive(h, 1, {0, 1})
        assert is_inactive(h, 77, {0, 1})


class TestSucoDFS:
    def test_single(self):
        h = ColorHierarchy.initial(0)
        assert suco_dfs(h, EMPTY, (), SucoStore({0: []}), "up") == [EMPTY]

    def test_chain(self):
        h, s = chain(2)
        assert suco_dfs(h, 0, (), s, "up") == [0, 1, 2]
        assert suco_dfs(h, 2, (), s, "down") == [2, 1, 0]

    def test_chain_blocked(self):
        h, s = chain(2)
        assert suco_dfs(h, 0, {1}, s, "up") == []

    def test_suco_gate(self):
        # suco(2) lacks 0, so the up route from 0 is illegal; from 1 it is fine
        h, s = chain(2, suco_full=False)
        assert suco_dfs(h, 0, (), s, "up") == []
        assert suco_dfs(h, 1, (), s, "up") == [1, 2]
        assert suco_dfs(h, 2, (), s, "down") == []

    def test_errors(self):
        h, s = chain(1)
        with pytest.raises(KeyError):
            suco_dfs(h, 9, (), s, "up")
        with pytest.raises(ValueError):
            suco_dfs(h, 0, (), s, "sideways")

    def test_blocked_start_may_leave(self):
        h, s = chain(2)
        assert suco_dfs(h, 1, {1}, s, "up") == [1, 2]


class TestDep:
    def test_no_blocker(self):
        h, s = chain(4)
        assert dep(h, h.colors, set(), s) == set()

    def test_cut_from_base(self):
        h, s = chain(2)
        assert dep(h, {2}, {1}, s) == {2}


class TestRedBlueBrown:
    """Two branches off red reconverge; a mixed route exists only without suco."""

    def load(self):
        return load_hierarchy(fixture_text("red_blue_brown.txt"))

    def test_round_trip(self):
        h, s = self.load()
        assert dump_hierarchy(h, s) == "".join(
            line + "\n" for line in fixture_text("red_blue_brown.txt").splitlines() if not line.startswith("#")
        )

    def test_mixed_route_exists_in_arcs(self):
        h, _ = self.load()
        node = h.cono
        arcs_only = []

        def rec(path):
            if not h.down[path[-1]]:
                arcs_only.append([node[c] for c in reversed(path)])
                return
            for y in sorted(h.down[path[-1]]):
                rec(path + [y])

        rec([5])
        assert [0, 1, 3, 4, 3] in arcs_only  # synthetic: b twice
        assert [0, 1, 2, 4, 3] in arcs_only

    def test_extraction_avoids_mixing(self):
        h, s = self.load()
        route = suco_dfs(h, 5, (), s, "down")
        assert [h.cono[c] for c in reversed(route)] == [0, 1, 2, 4, 3]
        assert brute_routes(h, 5, set(), store_dict(s, h), False) == [route]

    @pytest.mark.parametrize("blocked", [set(), {1}, {2}, {3}, {4}, {2, 3}, {0}])
    def test_dep_matches_enumeration(self, blocked):
        h, s = self.load()
        colors = set(h.colors) - blocked
        assert dep(h, colors, blocked, s) == brute_dep(h, colors, blocked, store_dict(s, h))

    def test_dep_blue_removed(self):
        h, s = self.load()
        # frozen from the enumeration above: losing blue strands red, brown and the top
        assert dep(h, set(h.colors) - {3}, {3}, s) == {0, 1, 2, 5}


@settings(max_examples=400)
@given(hierarchies())
def test_dep_equals_brute_force(data):
    h, store, blocked = data
    colors = set(h.colors)
    want = brute_dep(h, colors, blocked, store_dict(store, h))
    assert dep(h, colors, blocked, store) == want
    assert dep(h, colors, blocked, store, RouteHints()) == want


@settings(max_examples=300)
@given(hierarchies(), st.data())
def test_hints_never_change_dep(data, draw):
    h, store, blocked = data
    ids = sorted(h.colors)
    junk = st.dictionaries(st.sampled_from(ids), st.sampled_from(ids))
    hints = RouteHints(draw.draw(junk), draw.draw(junk))
    assert dep(h, h.colors, blocked, store, hints) == dep(h, h.colors, blocked, store)


@settings(max_examples=400)
@given(hierarchies())
def test_suco_dfs_matches_enumeration(data):
    h, store, blocked = data
    ref = store_dict(store, h)
    for c in h.colors:
        for direction in ("up", "down"):
            up = direction == "up"
            got = suco_dfs(h, c, blocked, store, direction)
            routes = brute_routes(h, c, blocked, ref, up)
            # ascending-id DFS returns the lexicographically first legal route
            assert got == (routes[0] if routes else [])
            assert suco_dfs(h, c, blocked, store, direction) == got


@given(hierarchies())
def test_dump_load_round_trip(data):
    h, store, _ = data
    text = dump_hierarchy(h, store)
    h2, s2 = load_hierarchy(text)
    assert h2.arcs() == h.arcs() and h2.cono == h.cono
    assert dump_hierarchy(h2, s2) == text
    h2.check()


def test_suco_pairwise_rule_equivalence():
    # up and down rules both reduce to "lower color in suco of higher color" on a path
    for bits in itertools.product([0, 1], repeat=6):
        pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        suco = {c: set() for c in range(4)}
        for (lo, hi), b in zip(pairs, bits):
            if b:
                suco[hi].add(lo)
        path = [0, 1, 2, 3]
        up_ok = all(legal_step(path[:i], path[i], suco, True) for i in range(1, 4))
        rev = path[::-1]
        down_ok = all(legal_step(rev[:i], rev[i], suco, False) for i in range(1, 4))
        assert up_ok == down_ok == all(bits)
