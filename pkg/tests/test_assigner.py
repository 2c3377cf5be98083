import pytest

from hypothesis import given, strategies as st

from source.misc.errors import Infeasible, OrderViolation
from source.model.cost import CostModel
from source.model.permutation import Cycle
from source.synth.assigner import (Matching, Node, PairingGraph, PairWeigher, build_graph, length_class,
                                   min_weight_matching, order_compatible, schedule, trivial_matching)
from source.synth.blocks import BlockType, PairWeight
from source.synth.decomposer import Decomposition, enumerate_decompositions


def stub_weigher(c1, c2=None):
    return PairWeight(10 if c2 is not None else 7, (0,), 1, None)


def whole(cycle):
    return Decomposition((cycle,), (1,), (False,))


def chain(n_nodes, length):
    """ Disjoint cycles of one length, one node per input cycle. """
    return [Node(Cycle(tuple(range(length * i, length * i + length))), i, 1, 0, i) for i in range(n_nodes)]


def brute_force(graph, members):
    def go(rest):
        if not rest:
            return 0
        i, others = rest[0], rest[1:]
        best = None
        if i in graph.singles:
            sub = go(others)
            if sub is not None:
                best = graph.singles[i] + sub
        for j in others:
            if not graph.has_edge(i, j):
                continue
            sub = go([k for k in others if k != j])
            if sub is not None and (best is None or graph.weight(i, j) + sub < best):
                best = graph.weight(i, j) + sub
        return best
    return go(list(members))


@st.composite
def pairing_graphs(draw):
    length = draw(st.sampled_from([2, 3]))
    count = draw(st.integers(1, 8))
    graph = PairingGraph(6, chain(count, length))
    if length == 3:
        for i in range(count):
            graph.singles[i] = draw(st.integers(1, 50))
    for i in range(count):
        for j in range(i + 1, count):
            if draw(st.booleans()):
                graph.edges[(i, j)] = draw(st.integers(1, 50))
    return graph


def test_length_classes():
    assert length_class(2) == length_class(4)
    assert length_class(3) == 3 and length_class(5) == 5


def test_level_one_blocks_are_fully_linked():
    long, short = Cycle(tuple(range(18))), Cycle(tuple(range(18, 31)))
    decomps = [next(enumerate_decompositions(long)), next(enumerate_decompositions(short))]
    graph = build_graph(decomps, 5, stub_weigher)

    first = [i for i, node in enumerate(graph.nodes) if node.level == 1 and len(node.cycle) == 5]
    assert len(first) == 5
    assert len([e for e in graph.edges if e[0] in first and e[1] in first]) == 10


def test_single_three_cycle():
    graph = build_graph([whole(Cycle((1, 2, 3)))], 3, stub_weigher)
    assert len(graph.nodes) == 1
    assert graph.edges == {}
    assert graph.singles == {0: 7}


def test_disjoint_five_cycles_form_a_clique():
    decomps = [whole(Cycle(tuple(range(5 * i, 5 * i + 5)))) for i in range(8)]
    graph = build_graph(decomps, 6, stub_weigher)
    assert len(graph.edges) == 28
    assert set(graph.edges.values()) == {10}


def test_block_must_fit_on_lines():
    graph = build_graph([whole(Cycle((0, 1, 2))), whole(Cycle((4, 5, 6)))], 2, stub_weigher)
    assert graph.edges == {}


def test_pair_beats_two_singles():
    graph = build_graph([whole(Cycle((0, 1, 2))), whole(Cycle((4, 5, 6)))], 3, stub_weigher)
    matching = min_weight_matching(graph)
    assert matching.pairs == [(0, 1)]
    assert matching.singles == []
    assert matching.weight == 10


def test_exact_cover_beats_consecutive_pairing():
    graph = PairingGraph(4, chain(4, 2))
    graph.edges = {(0, 1): 1, (2, 3): 100, (0, 2): 10, (1, 3): 10}

    matching = min_weight_matching(graph)
    assert matching.weight == 20
    assert matching.pairs == [(0, 2), (1, 3)]

    trivial = trivial_matching(graph)
    assert trivial.weight == 101
    assert trivial.pairs == [(0, 1), (2, 3)]


@given(pairing_graphs())
def test_matching_is_optimal(graph):
    members = list(range(len(graph.nodes)))
    expected = brute_force(graph, members)

    for limit in (14, 0):
        if expected is None:
            with pytest.raises(Infeasible):
                min_weight_matching(graph, exact_limit=limit)
            continue
        matching = min_weight_matching(graph, exact_limit=limit)
        assert matching.weight == expected
        assert matching.covered() == members
        assert sum(graph.weight(i, j) for i, j in matching.pairs) + \
            sum(graph.weight(i) for i in matching.singles) == expected


def test_odd_transposition_class_is_infeasible():
    decomps = [whole(Cycle((2 * i, 2 * i + 1))) for i in range(3)]
    graph = build_graph(decomps, 3, stub_weigher)
    with pytest.raises(Infeasible):
        min_weight_matching(graph)
    with pytest.raises(Infeasible):
        trivial_matching(graph)


def test_order_compatible():
    nodes = [Node(Cycle((0, 1, 2)), 0, 1, 0, 0),
             Node(Cycle((1, 5, 6)), 1, 1, 0, 1),
             Node(Cycle((7, 8, 9)), 2, 1, 0, 2)]
    assert not order_compatible(nodes, 0, 1)
    assert not order_compatible(nodes, 0, 2)
    assert order_compatible(nodes, 1, 2)
    assert order_compatible(nodes, 2, 1)


def test_schedule_keeps_residual_last():
    cycle = Cycle(tuple(range(1, 20)))
    graph = build_graph([next(enumerate_decompositions(cycle))], 5, stub_weigher)
    matching = min_weight_matching(graph)
    assert matching.weight == 27

    blocks = schedule(graph, matching)
    assert [b.btype for b in blocks] == [BlockType.P55, BlockType.P55, BlockType.S3]
    assert blocks[-1].cycles == (Cycle((6, 11, 16)),)


def test_schedule_rejects_incomplete_cover():
    graph = build_graph([whole(Cycle((0, 1, 2)))], 3, stub_weigher)
    with pytest.raises(OrderViolation):
        schedule(graph, Matching())


def test_pair_weigher_memoizes_representations():
    weigher = PairWeigher(3)
    a, b = Cycle((0, 1)), Cycle((2, 3))
    first = weigher(a, b)
    assert weigher(b.rotate(1), a).cost == first.cost
    assert len(weigher) == 1
    assert weigher.evaluations == 4


def test_graph_weights_follow_weigher_cost_model(kappa_cache):
    weigher = PairWeigher(4, CostModel('unit'), kappa_cache)
    a, b = Cycle((0, 9)), Cycle((3, 14))
    graph = build_graph([whole(a), whole(b)], 4, weigher)

    assert len(weigher) == 1
    assert graph.edges == {(0, 1): len(weigher(a, b).circuit)}


def test_sparse_classes_limit_rotations():
    limits = []

    def weigher(c1, c2=None, limit=None):
        if c2 is not None:
            limits.append(limit)
        return stub_weigher(c1, c2)

    decomps = [whole(Cycle(tuple(range(5 * i, 5 * i + 5)))) for i in range(22)]
    build_graph(decomps, 7, weigher, sparse_rotations=5)
    assert limits and set(limits) == {5}

    limits.clear()
    build_graph(decomps[:8], 7, weigher, sparse_rotations=5)
    assert set(limits) == {None}
