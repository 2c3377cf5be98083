""" Output-side transformation synthesis and lifting onto wider registers.

The transformation synthesizer walks the truth table in ascending input order
and appends gates on the output side until row i maps to i. Gates are chosen so
rows already fixed are never touched, so it terminates for every bijection.
"""

import numpy as np

from typing import List, Optional

from source.misc.errors import CapExceeded
from source.model.circuit import Circuit, Gate
from source.model.permutation import DEFAULT_MAX_LINES, Permutation
from source.sim.simulate import apply_gates


def _bits(v: int) -> List[int]:
    return [b for b in range(v.bit_length()) if v >> b & 1]


def mini_transform_synth(p: Permutation, cap: Optional[int] = DEFAULT_MAX_LINES) -> Circuit:
    """ Synthesize any permutation with NOT, CNOT and positive-control MCT gates.

    Args:
        p (Permutation): Permutation to realize.
        cap (int, optional): Largest accepted line count. Defaults to 20.

    Raises:
        CapExceeded: p.n is above the cap.

    Returns:
        Circuit: Circuit that simulates to p.
    """
    if cap is not None and p.n > cap:
        raise CapExceeded(p.n, cap)

    table = np.array(p.images, dtype=np.int64, copy=True)
    output_side: List[Gate] = []

    for i in range(p.size):
        y = int(table[i])
        if y == i:
            continue

        step: List[Gate] = []
        # set the bits of i missing from y, controlled on y's ones
        for b in _bits(i & ~y):
            step.append(Gate(frozenset(_bits(y)), b))
            y |= 1 << b
        # clear the extra bits of y, controlled on i's ones
        for b in _bits(y & ~i):
            step.append(Gate(frozenset(_bits(i)), b))
            y &= ~(1 << b)

        # rows below i are fixed points and no step gate can reach them
        table[i:] = apply_gates(table[i:], step)
        output_side.extend(step)

    return Circuit(p.n, tuple(reversed(output_side)))


def lift(core: Circuit, n: int) -> Circuit:
    """ Embed a circuit on the low lines of an n-line register, controlled on all high lines. """
    assert n >= core.n, f'Cannot lift a {core.n}-line core to {n} lines'
    high = frozenset(range(core.n, n))
    gates = tuple(Gate(g.controls | high, g.target) for g in core.gates)
    return Circuit(n, gates, core.meta)
