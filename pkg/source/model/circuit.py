from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Optional, Tuple

from source.misc.errors import DomainError


@dataclass(frozen=True)
class Gate:
    """ Multi-controlled NOT: flips `target` iff every control line is 1.

    NOT, CNOT and Toffoli are the cases with 0, 1 and 2 controls. Only positive
    controls exist; a 0-control is written by sandwiching the line in NOT gates.
    """
    controls: FrozenSet[int]
    target: int

    def __post_init__(self):
        controls = frozenset(int(c) for c in self.controls)
        object.__setattr__(self, 'controls', controls)
        object.__setattr__(self, 'target', int(self.target))

        if self.target < 0 or any(c < 0 for c in controls):
            raise DomainError(f'Line indices must be nonnegative, got {self}')
        if self.target in controls:
            raise DomainError(f'Target line {self.target} is also a control')

    @classmethod
    def make(cls, target: int, *controls: int) -> 'Gate':
        return cls(frozenset(controls), target)

    def __str__(self) -> str:
        if not self.controls:
            return f'NOT({self.target})'
        return f'C{len(self.controls)}NOT({sorted(self.controls)}->{self.target})'

    @property
    def num_controls(self) -> int:
        return len(self.controls)

    @property
    def mask(self) -> int:
        """ Integer with the control bits set. """
        m = 0
        for c in self.controls:
            m |= 1 << c
        return m

    @property
    def lines(self) -> FrozenSet[int]:
        return self.controls | {self.target}

    def fits(self, n: int) -> bool:
        return max(self.lines) < n


@dataclass(frozen=True)
class Circuit:
    """ An ordered gate list on n lines, applied left to right.

    `meta` carries one optional provenance label per gate (the building block a
    gate came from). Labels are informational and ignored by equality.
    """
    n: int
    gates: Tuple[Gate, ...] = ()
    meta: Tuple[Optional[str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        gates = tuple(self.gates)
        meta = tuple(self.meta) if self.meta else (None,) * len(gates)
        object.__setattr__(self, 'gates', gates)
        object.__setattr__(self, 'meta', meta)

        assert len(meta) == len(gates), 'One label per gate is required'
        for g in gates:
            if not g.fits(self.n):
                raise DomainError(f'Gate {g} does not fit on {self.n} lines')

    @classmethod
    def empty(cls, n: int) -> 'Circuit':
        return cls(n)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: 'Circuit') -> 'Circuit':
        return self.concat(other)

    def concat(self, other: 'Circuit') -> 'Circuit':
        assert self.n == other.n, f'Cannot join circuits on {self.n} and {other.n} lines'
        return Circuit(self.n, self.gates + other.gates, self.meta + other.meta)

    def labeled(self, label: Optional[str]) -> 'Circuit':
        """ Same gates, every gate labeled `label`. """
        return Circuit(self.n, self.gates, (label,) * len(self.gates))

    def invert(self) -> 'Circuit':
        return invert(self)


def invert(c: Circuit) -> Circuit:
    """ Inverse circuit: every gate is self-inverse, so reverse the order. """
    return Circuit(c.n, tuple(reversed(c.gates)), tuple(reversed(c.meta)))


def join(n: int, parts: Iterable[Circuit]) -> Circuit:
    """ Concatenate many circuits on n lines in one pass. """
    gates, meta = [], []
    for part in parts:
        assert part.n == n, f'Part on {part.n} lines in a {n}-line join'
        gates.extend(part.gates)
        meta.extend(part.meta)
    return Circuit(n, tuple(gates), tuple(meta))
