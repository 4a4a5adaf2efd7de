import itertools

import pytest
from hypothesis import given, strategies as st

from hampath.graph import (
    DiGraph,
    Instance,
    InstanceFormatError,
    dup,
    gen_graph,
    invert,
    is_path_in,
    random_instance,
    read_instance,
    read_path,
    validate_path,
    write_instance,
    write_path,
)
from hampath.oracles import held_karp


def G(n, arcs):
    return DiGraph.from_arcs(n, arcs)


@st.composite
def digraphs(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    arcs = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return G(n, arcs)


class TestValidatePath:
    def test_smallest(self):
        assert validate_path(G(2, [(0, 1)]), 0, 1, [0, 1])

    def test_missing_node(self):
        assert not validate_path(G(3, [(0, 1), (1, 2), (0, 2)]), 0, 2, [0, 2])

    def test_repeated_node(self):
        assert not validate_path(G(3, [(0, 1), (1, 0), (1, 2)]), 0, 2, [0, 1, 0, 2])

    def test_wrong_endpoints_and_missing_arc(self):
        g = G(3, [(0, 1), (1, 2)])
        assert not validate_path(g, 1, 2, [0, 1, 2])
        assert not validate_path(g, 0, 2, [0, 2, 1])
        assert not validate_path(g, 0, 2, [0, 1, 7])

    @given(digraphs(), st.data())
    def test_matches_direct_definition(self, g, data):
        s = data.draw(st.integers(0, g.n - 1))
        e = data.draw(st.integers(0, g.n - 1))
        for k in range(0, 6):
            for p in itertools.product(range(g.n + 1), repeat=k):
                direct = (
                    sorted(p) == list(range(g.n))
                    and p[0] == s
                    and p[-1] == e
                    and all(v in g.adjacency[u] for u, v in zip(p, p[1:]))
                )
                assert validate_path(g, s, e, p) == direct


def test_dup_and_is_path_in():
    assert dup([1, 2, 1, 3, 3]) == {1, 3}
    g = G(3, [(0, 1), (1, 2)])
    assert is_path_in(g, [0, 1, 2]) and not is_path_in(g, [0, 2])


class TestInvert:
    def test_examples(self):
        assert invert(G(2, [(0, 1)])) == G(2, [(1, 0)])
        assert invert(G(3, [(0, 1), (0, 2), (2, 1)])) == G(3, [(1, 0), (2, 0), (1, 2)])

    @given(digraphs(max_n=7))
    def test_involution(self, g):
        assert invert(invert(g)) == g
        assert invert(g).n == g.n and invert(g).m == g.m


class TestDiGraphInvariants:
    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            G(2, [(1, 1)])
        with pytest.raises(ValueError):
            DiGraph(2, ((1,), (1,)))

    def test_unsorted_rejected(self):
        with pytest.raises(ValueError):
            DiGraph(3, ((2, 1), (), ()))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            DiGraph(2, ((5,), ()))

    def test_instance_endpoints(self):
        with pytest.raises(ValueError):
            Instance(G(2, [(0, 1)]), 0, 0)
        with pytest.raises(ValueError):
            Instance(G(2, [(0, 1)]), 0, 3)
        with pytest.raises(ValueError):
            Instance(G(2, [(0, 1)]), 0, 1, planted=(1, 0))
        assert Instance(G(1, []), 0, 0).n == 1


class TestGenGraph:
    def test_paper_shape(self):
        for seed in range(20):
            inst = gen_graph(17, 3, seed)
            assert inst.n == 17
            assert validate_path(inst.graph, inst.s, inst.e, inst.planted)
            assert max(len(a) for a in inst.graph.adjacency) <= 4
            assert min(len(inst.graph.adjacency[v]) for v in inst.planted[:-1]) >= 1

    def test_two_nodes(self):
        for seed in range(5):
            inst = gen_graph(2, 1, seed)
            assert inst.graph.has_arc(inst.s, inst.e)
            assert validate_path(inst.graph, inst.s, inst.e, inst.planted)

    def test_oracle_confirms(self):
        assert held_karp(gen_graph(6, 2, 42)).exists

    def test_endpoints_follow_planted(self):
        inst = gen_graph(9, 2, 3)
        assert (inst.s, inst.e) == (inst.planted[0], inst.planted[-1])

    @pytest.mark.parametrize("n,delta", [(1, 1), (5, 0), (5, 5), (5, 9)])
    def test_rejects(self, n, delta):
        with pytest.raises(ValueError):
            gen_graph(n, delta, 0)

    @given(st.integers(2, 30), st.integers(0, 2**32), st.data())
    def test_deterministic_and_planted(self, n, seed, data):
        delta = data.draw(st.integers(1, n - 1))
        a, b = gen_graph(n, delta, seed), gen_graph(n, delta, seed)
        assert write_instance(a) == write_instance(b) and a.planted == b.planted
        assert validate_path(a.graph, a.s, a.e, a.planted)
        assert all(len(s) <= delta + 1 for s in a.graph.adjacency)

    def test_pinned_sample(self):
        # PCG64 output pinned so a silent generator change shows up here
        inst = gen_graph(5, 2, 0)
        assert write_instance(inst) == write_instance(gen_graph(5, 2, 0))
        assert inst.planted == (2, 4, 3, 0, 1)

    def test_random_instance(self):
        a, b = random_instance(6, 11), random_instance(6, 11)
        assert a == b and a.s != a.e
        dense = random_instance(8, 0, density=1.0)
        assert dense.graph.m == 8 * 7
        assert random_instance(8, 0, density=0.0).graph.m == 0


class TestInstanceIO:
    def test_read_example(self):
        inst = read_instance("2 1 0 1\n0 1\n")
        assert inst == Instance(G(2, [(0, 1)]), 0, 1)

    def test_round_trip_canonical(self):
        t = "4 4 0 3\n0 1\n0 2\n1 3\n2 3\n"
        assert write_instance(read_instance(t)) == t

    @given(st.integers(2, 12), st.integers(0, 10**6))
    def test_round_trip_generated(self, n, seed):
        inst = gen_graph(n, 1, seed)
        assert read_instance(write_instance(inst)) == inst

    @pytest.mark.parametrize(
        "text,line,fragment",
        [
            ("3 1 0 2\n0 0\n", 2, "self-loop"),
            ("3 2 0 2\n0 1\n0 1\n", 3, "duplicate"),
            ("3 1 0 2\n0 9\n", 2, "out of range"),
            ("3 1 0\n0 1\n", 1, "expected 4"),
            ("x 1 0 2\n0 1\n", 1, "non-integer"),
            ("3 2 0 2\n0 1\n", 3, "arc lines"),
            ("3 0 1 1\n", 1, "s equals e"),
            ("", 1, "missing header"),
        ],
    )
    def test_errors_carry_line(self, text, line, fragment):
        with pytest.raises(InstanceFormatError) as ei:
            read_instance(text)
        assert ei.value.line == line and fragment in str(ei.value)

    def test_path_io(self):
        assert read_path(write_path([3, 1, 2])) == (3, 1, 2)
        assert write_path((0, 1)) == "0 1\n"
