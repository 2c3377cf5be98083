""" Hypothesis strategies shared by the test modules. """

import numpy as np

from hypothesis import strategies as st

from source.model.circuit import Circuit, Gate
from source.model.permutation import Cycle, Permutation


@st.composite
def gates(draw, n: int) -> Gate:
    target = draw(st.integers(0, n - 1))
    others = [line for line in range(n) if line != target]
    controls = draw(st.sets(st.sampled_from(others), max_size=len(others))) if others else set()
    return Gate(frozenset(controls), target)


@st.composite
def circuits(draw, min_n: int = 1, max_n: int = 6, max_gates: int = 30) -> Circuit:
    n = draw(st.integers(min_n, max_n))
    gate_list = draw(st.lists(gates(n), max_size=max_gates))
    return Circuit(n, tuple(gate_list))


@st.composite
def permutations(draw, min_n: int = 1, max_n: int = 6) -> Permutation:
    n = draw(st.integers(min_n, max_n))
    images = draw(st.permutations(list(range(1 << n))))
    return Permutation(n, np.array(images, dtype=np.int64))


@st.composite
def cycles(draw, min_len: int = 2, max_len: int = 12, max_value: int = 255) -> Cycle:
    elems = draw(st.lists(st.integers(0, max_value), min_size=min_len, max_size=max_len, unique=True))
    return Cycle(tuple(elems))
