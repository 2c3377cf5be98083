from hypothesis import given

from source.model.circuit import Circuit, Gate
from source.model.cost import circuit_cost
from source.sim.simulate import simulate
from source.synth.peephole import commutes, peephole_optimize

from strategies import circuits


def test_cancel_adjacent_pair():
    g = Gate.make(0, 1, 2)
    assert peephole_optimize(Circuit(3, (g, g))) == Circuit(3)


def test_cancel_nested_pairs():
    g1, g2 = Gate.make(0, 1), Gate.make(2)
    assert peephole_optimize(Circuit(3, (g1, g2, g2, g1))) == Circuit(3)


def test_cancel_across_disjoint_gate():
    g1, d = Gate.make(0, 1), Gate.make(3, 2)
    assert peephole_optimize(Circuit(4, (g1, d, g1))).gates == (d,)


def test_blocked_by_dependent_gate():
    g1, blocker = Gate.make(0, 1), Gate.make(1)
    c = Circuit(2, (g1, blocker, g1))
    assert peephole_optimize(c) == c


def test_commutes():
    assert commutes(Gate.make(0, 1), Gate.make(0, 2))
    assert commutes(Gate.make(0, 1), Gate.make(2, 1))
    assert not commutes(Gate.make(0, 1), Gate.make(1, 2))
    assert not commutes(Gate.make(1), Gate.make(0, 1))


def test_labels_follow_surviving_gates():
    g, keep = Gate.make(0), Gate.make(1, 0)
    c = Circuit(2, (g, keep, g), ('a', 'b', 'a'))
    optimized = peephole_optimize(c)
    assert optimized.gates == (g, keep, g)

    c = Circuit(2, (g, g, keep), ('a', 'a', 'b'))
    assert peephole_optimize(c).meta == ('b',)


@given(circuits(max_n=8, max_gates=50))
def test_optimization_is_safe(c):
    optimized = peephole_optimize(c, check=True)
    assert simulate(optimized) == simulate(c)
    assert circuit_cost(optimized) <= circuit_cost(c)
    assert len(optimized) <= len(c)


@given(circuits(max_n=5, max_gates=40))
def test_optimization_is_idempotent_in_cost(c):
    once = peephole_optimize(c)
    assert circuit_cost(peephole_optimize(once)) == circuit_cost(once)
