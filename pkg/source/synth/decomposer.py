""" Minimal 5-cycle decompositions of long cycles with maximal disjointness.

A cycle of length m > 5 is rotated, cut into floor(m/5) consecutive 5-element
blocks, and the leftover elements form a residual cycle that is decomposed again
at the next level. Every rotation at every level gives one decomposition, so an
n-cycle has ndcm(n) of them.
"""

from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from source.misc.errors import DomainError
from source.model.permutation import Cycle, compose_cycles
from source.synth.counting import max_disjoint, n5


@dataclass(frozen=True)
class Decomposition:
    """ Ordered factors of one cycle.

    Attributes:
        factors (Tuple[Cycle, ...]): Factors, applied left to right.
        levels (Tuple[int, ...]): 1 for blocks detached from the cycle itself,
            2 for blocks detached from the first residual, and so on.
        disjoint_flags (Tuple[bool, ...]): True for detached 5-element blocks,
            False for the final residual.
    """
    factors: Tuple[Cycle, ...]
    levels: Tuple[int, ...]
    disjoint_flags: Tuple[bool, ...]

    def __len__(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        return ''.join(str(f) for f in self.factors)


def detach_level(cycle: Cycle, rotation: int) -> Tuple[List[Cycle], Optional[Cycle]]:
    """ Detach consecutive 5-element blocks from a rotated cycle.

    With b = cycle rotated to start at elems[rotation] and q = floor(m/5), the
    blocks are (b1..b5), (b6..b10), ... and the residual is
    (b_{5q+1}, ..., b_m, b_1, b_6, ..., b_{5(q-1)+1}).

    Args:
        cycle (Cycle): Cycle of length m > 5.
        rotation (int): Start index, 0 <= rotation < m.

    Raises:
        DomainError: m <= 5 or the rotation is out of range.

    Returns:
        Tuple[List[Cycle], Optional[Cycle]]: Blocks, then the residual (None if empty).
    """
    m = len(cycle)
    if m <= 5:
        raise DomainError(f'Only cycles longer than 5 are detached, got length {m}')
    if not 0 <= rotation < m:
        raise DomainError(f'Rotation {rotation} is out of range for length {m}')

    b = cycle.rotate(rotation).elems
    q = m // 5
    blocks = [Cycle(b[5 * j:5 * j + 5]) for j in range(q)]

    residual = b[5 * q:] + tuple(b[5 * j] for j in range(q))
    assert len(residual) >= 2, f'Residual of length {len(residual)} from a {m}-cycle'
    return blocks, Cycle(residual)


def enumerate_decompositions(cycle: Cycle, limit: Optional[int] = None) -> Iterator[Decomposition]:
    """ Stream every maximally disjoint minimal 5-cycle decomposition.

    Rotations ascend at each level, depth first, so the order is reproducible
    and any prefix is stable.

    Args:
        cycle (Cycle): Cycle of length > 5.
        limit (int, optional): Stop after this many decompositions. Defaults to None.

    Raises:
        DomainError: The cycle has 5 or fewer elements.
    """
    if len(cycle) <= 5:
        raise DomainError(f'Only cycles longer than 5 are decomposed, got length {len(cycle)}')

    def walk(current: Cycle, depth: int, prefix: List[Tuple[Cycle, int, bool]]) -> Iterator[List[Tuple[Cycle, int, bool]]]:
        for rotation in range(len(current)):
            blocks, residual = detach_level(current, rotation)
            head = prefix + [(block, depth, True) for block in blocks]
            if len(residual) <= 5:
                yield head + [(residual, depth + 1, False)]
            else:
                yield from walk(residual, depth + 1, head)

    for count, items in enumerate(walk(cycle, 1, [])):
        if limit is not None and count >= limit:
            return
        factors, levels, flags = zip(*items)
        yield Decomposition(tuple(factors), tuple(levels), tuple(flags))


def nth_decomposition(cycle: Cycle, index: int) -> Decomposition:
    """ The decomposition at position `index` of the enumeration, without walking it.

    Positions are mixed-radix numbers over the per-level rotation counts, most
    significant level first, which matches the depth-first order.
    """
    if len(cycle) <= 5:
        raise DomainError(f'Only cycles longer than 5 are decomposed, got length {len(cycle)}')

    radices = []
    L = len(cycle)
    while L > 5:
        radices.append(L)
        L -= 4 * (L // 5)

    total = 1
    for radix in radices:
        total *= radix
    if not 0 <= index < total:
        raise DomainError(f'Decomposition index {index} is out of range 0..{total - 1}')

    digits = []
    for radix in reversed(radices):
        index, digit = divmod(index, radix)
        digits.append(digit)
    digits.reverse()

    factors, levels, flags = [], [], []
    current = cycle
    for depth, rotation in enumerate(digits, start=1):
        blocks, current = detach_level(current, rotation)
        factors.extend(blocks)
        levels.extend([depth] * len(blocks))
        flags.extend([True] * len(blocks))
    factors.append(current)
    levels.append(len(digits) + 1)
    flags.append(False)
    return Decomposition(tuple(factors), tuple(levels), tuple(flags))


def validate(d: Decomposition, original: Cycle) -> bool:
    """ Check that d is a minimal, maximally disjoint 5-cycle decomposition of original. """
    n = len(original)
    if not (len(d.factors) == len(d.levels) == len(d.disjoint_flags)) or not d.factors:
        return False

    # product identity
    if compose_cycles(d.factors) != original.mapping():
        return False

    # minimality
    if sum(len(f) - 1 for f in d.factors) != n - 1:
        return False

    lengths = [len(f) for f in d.factors]
    if max(lengths) > 5 or sum(1 for k in lengths if k < 5) > 1:
        return False
    if lengths.count(5) != n5(n):
        return False

    first = [f for f, level, flag in zip(d.factors, d.levels, d.disjoint_flags) if level == 1 and flag]
    if len(first) != max_disjoint(n):
        return False
    for i, a in enumerate(first):
        if len(a) != 5 or any(not a.is_disjoint(b) for b in first[i + 1:]):
            return False
    return True
