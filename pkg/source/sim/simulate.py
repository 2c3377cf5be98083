import numpy as np

from typing import Iterable, Optional

from source.misc.errors import CapExceeded
from source.model.circuit import Circuit, Gate
from source.model.permutation import DEFAULT_MAX_LINES, Permutation, extend_with_line


def apply_gate(v: int, g: Gate) -> int:
    """ Flip the target bit of v iff all control bits of v are 1. """
    mask = g.mask
    if v & mask == mask:
        return v ^ (1 << g.target)
    return v


def apply_gates(values: np.ndarray, gates: Iterable[Gate]) -> np.ndarray:
    """ Push an array of states through a gate sequence, left to right.

    Args:
        values (np.ndarray): Integer states, any shape.
        gates (Iterable[Gate]): Gates in application order.

    Returns:
        np.ndarray: New array of output states.
    """
    out = np.array(values, dtype=np.int64, copy=True)
    for g in gates:
        mask = g.mask
        hit = (out & mask) == mask
        out ^= hit.astype(np.int64) << g.target
    return out


def simulate(c: Circuit, cap: Optional[int] = DEFAULT_MAX_LINES) -> Permutation:
    """ Realized permutation of a circuit, by evaluating all 2^n inputs at once.

    Raises:
        CapExceeded: c.n is above the simulation cap.
    """
    if cap is not None and c.n > cap:
        raise CapExceeded(c.n, cap)
    images = apply_gates(np.arange(1 << c.n, dtype=np.int64), c.gates)
    return Permutation(c.n, images)


def verify(c: Circuit, p: Permutation, cap: Optional[int] = DEFAULT_MAX_LINES) -> bool:
    """ True iff the circuit realizes p.

    A circuit one line wider than p is checked against p extended by a
    pass-through top line, which is how odd permutations are emitted.

    Raises:
        CapExceeded: c.n is above the verification cap.
    """
    if cap is not None and c.n > cap:
        raise CapExceeded(c.n, cap)

    if c.n == p.n + 1:
        p = extend_with_line(p, cap=None)
    elif c.n != p.n:
        return False
    return simulate(c, cap=None) == p
