""" Peephole post-optimization of MCT netlists.

Rules, applied until nothing changes:
    - Cancellation: two identical gates cancel ([g, g] -> []), NOT pairs included
    - Commutation: a gate moves past another when neither target is a control of
      the other, which exposes cancellations further back

Rewrites only delete gates, so cost never increases.
"""

from typing import List, Optional, Tuple

from source.misc.errors import VerificationFailed
from source.model.circuit import Circuit, Gate
from source.sim.simulate import simulate


def commutes(a: Gate, b: Gate) -> bool:
    """ MCT gates commute unless one flips a line the other reads.

    Gates sharing a target always qualify (a target is never its own control).
    """
    return a.target not in b.controls and b.target not in a.controls


# a gate as (control mask, target) plus its label
Entry = Tuple[int, int, Gate, Optional[str]]


def _cancel_pass(entries: List[Entry], window: int) -> Tuple[List[Entry], bool]:
    out: List[Entry] = []
    changed = False

    for entry in entries:
        mask, target = entry[0], entry[1]
        cancelled = False
        # walk back through commuting gates looking for a twin
        for j in range(len(out) - 1, max(-1, len(out) - 1 - window), -1):
            other_mask, other_target = out[j][0], out[j][1]
            if other_mask == mask and other_target == target:
                del out[j]
                cancelled = changed = True
                break
            if other_mask >> target & 1 or mask >> other_target & 1:
                break
        if not cancelled:
            out.append(entry)

    return out, changed


def peephole_optimize(c: Circuit, window: int = 64, check: bool = False) -> Circuit:
    """ Cancel self-inverse gate pairs, commuting gates to bring pairs together.

    Args:
        c (Circuit): Circuit to optimize.
        window (int, optional): Gates scanned backwards per gate. Defaults to 64.
        check (bool, optional): Simulate before and after and compare. Defaults to False.

    Raises:
        VerificationFailed: With `check` set, if the rewrite changed the function.

    Returns:
        Circuit: Functionally equal circuit with no more gates than c.
    """
    entries = [(g.mask, g.target, g, label) for g, label in zip(c.gates, c.meta)]
    changed = True
    while changed:
        entries, changed = _cancel_pass(entries, window)

    result = Circuit(c.n, tuple(e[2] for e in entries), tuple(e[3] for e in entries))

    if check and simulate(result, cap=None) != simulate(c, cap=None):
        raise VerificationFailed('Peephole rewrite changed the realized permutation')
    return result
