import numpy as np

from enum import Enum
from functools import cached_property
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from source.misc.errors import CapExceeded, DomainError, LengthMismatch, NotBijective


# full-table representations above this many lines are refused by default
DEFAULT_MAX_LINES = 20


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class Cycle:
    """ A k-cycle (a_1, ..., a_k) with f(a_i) = a_(i+1) and f(a_k) = a_1.

    The element order is kept as given; `canonical` rotates it to start at the
    smallest element. Two cycles are equal only if their sequences are equal, so
    compare canonical forms when the representation should not matter.
    """
    elems: Tuple[int, ...]

    def __post_init__(self):
        elems = tuple(int(a) for a in self.elems)
        object.__setattr__(self, 'elems', elems)

        if len(elems) < 2:
            raise DomainError(f'A cycle needs at least two elements, got {elems}')
        if len(set(elems)) != len(elems):
            raise DomainError(f'Cycle elements must be distinct, got {elems}')
        if min(elems) < 0:
            raise DomainError(f'Cycle elements must be nonnegative, got {elems}')

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __str__(self) -> str:
        return '(' + ','.join(str(a) for a in self.elems) + ')'

    @cached_property
    def support(self) -> FrozenSet[int]:
        return frozenset(self.elems)

    def rotate(self, k: int) -> 'Cycle':
        """ Same cycle, written to start at elems[k]. """
        k %= len(self.elems)
        return Cycle(self.elems[k:] + self.elems[:k])

    def canonical(self) -> 'Cycle':
        return self.rotate(self.elems.index(min(self.elems)))

    def key(self) -> Tuple[int, ...]:
        """ Representation-independent sort and hash key. """
        return self.canonical().elems

    def image(self, x: int) -> int:
        try:
            i = self.elems.index(x)
        except ValueError:
            return x
        return self.elems[(i + 1) % len(self.elems)]

    def mapping(self) -> Dict[int, int]:
        k = len(self.elems)
        return {self.elems[i]: self.elems[(i + 1) % k] for i in range(k)}

    def inverse(self) -> 'Cycle':
        return Cycle(tuple(reversed(self.elems)))

    def is_disjoint(self, other: 'Cycle') -> bool:
        return self.support.isdisjoint(other.support)

    def same_as(self, other: 'Cycle') -> bool:
        """ True if both describe the same cyclic mapping. """
        return self.key() == other.key()


class Permutation:
    """ A reversible function on n lines, stored as its full image table.

    `images[x]` is f(x) for every x in 0..2^n-1. The table is a read-only numpy
    array, so a Permutation can be shared freely once built.
    """
    __slots__ = ('n', 'images')

    def __init__(self, n: int, images: np.ndarray):
        self.n = int(n)
        images = np.array(images, dtype=np.int64, copy=True)
        images.setflags(write=False)
        self.images = images

    @classmethod
    def identity(cls, n: int) -> 'Permutation':
        return cls(n, np.arange(1 << n, dtype=np.int64))

    @property
    def size(self) -> int:
        return 1 << self.n

    def __call__(self, x: int) -> int:
        return int(self.images[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        return hash((self.n, self.images.tobytes()))

    def __repr__(self) -> str:
        if self.size <= 16:
            return f'Permutation(n={self.n}, images={self.images.tolist()})'
        return f'Permutation(n={self.n}, moved={self.moved_points()})'

    def tolist(self) -> List[int]:
        return self.images.tolist()

    def is_identity(self) -> bool:
        return bool(np.all(self.images == np.arange(self.size)))

    def moved_points(self) -> int:
        return int(np.count_nonzero(self.images != np.arange(self.size)))

    def inverse(self) -> 'Permutation':
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.size, dtype=np.int64)
        return Permutation(self.n, inv)

    def then(self, other: 'Permutation') -> 'Permutation':
        """ Composition applying self first: x -> other(self(x)). """
        assert self.n == other.n, f'Line counts differ: {self.n} and {other.n}'
        return Permutation(self.n, other.images[self.images])


@dataclass(frozen=True)
class CCF:
    """ Canonical cycle form: disjoint cycles, fixed points omitted.

    Each cycle starts at its minimum element and cycles are sorted by that
    element, so equal permutations always give equal CCFs.
    """
    n: int
    cycles: Tuple[Cycle, ...]

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Cycle]) -> 'CCF':
        canon = sorted((c.canonical() for c in cycles), key=lambda c: c.elems[0])
        seen = set()
        for c in canon:
            if not seen.isdisjoint(c.elems):
                raise DomainError(f'Cycles of a CCF must be disjoint, {c} overlaps')
            seen.update(c.elems)
        return cls(n, tuple(canon))

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def __str__(self) -> str:
        return ''.join(str(c) for c in self.cycles) if self.cycles else '()'

    def lengths(self) -> List[int]:
        return [len(c) for c in self.cycles]

    def to_permutation(self) -> Permutation:
        return cycle_product(self.cycles, self.n)


def from_images(n: int, images: Sequence[int], cap: Optional[int] = DEFAULT_MAX_LINES) -> Permutation:
    """ Validate an image table and wrap it as a Permutation.

    Args:
        n (int): Number of lines.
        images (Sequence[int]): images[x] = f(x), exactly 2^n entries.
        cap (int, optional): Largest accepted line count. Defaults to 20.

    Raises:
        LengthMismatch: The table does not have 2^n entries.
        NotBijective: A value repeats or falls outside 0..2^n-1.

    Returns:
        Permutation: The validated permutation.
    """
    if n < 1:
        raise DomainError(f'A permutation needs at least one line, got n={n}')
    if cap is not None and n > cap:
        raise CapExceeded(n, cap)

    size = 1 << n
    table = np.asarray(images, dtype=np.int64).ravel()
    if table.size != size:
        raise LengthMismatch(f'Expected {size} images for n={n}, got {table.size}')

    if table.size and (table.min() < 0 or table.max() >= size):
        bad = int(table[(table < 0) | (table >= size)][0])
        raise NotBijective(f'Image {bad} is outside 0..{size - 1}')

    counts = np.bincount(table, minlength=size)
    if np.any(counts != 1):
        repeated = int(np.flatnonzero(counts > 1)[0])
        raise NotBijective(f'Image {repeated} appears {int(counts[repeated])} times')

    return Permutation(n, table)


def to_ccf(p: Permutation) -> CCF:
    """ Extract the canonical cycle form of a permutation. """
    images = p.images
    visited = np.zeros(p.size, dtype=bool)
    cycles: List[Cycle] = []

    # ascending start points give canonical rotation and order directly
    for start in np.flatnonzero(images != np.arange(p.size)).tolist():
        if visited[start]:
            continue
        elems = [start]
        visited[start] = True
        x = int(images[start])
        while x != start:
            elems.append(x)
            visited[x] = True
            x = int(images[x])
        cycles.append(Cycle(tuple(elems)))

    return CCF(p.n, tuple(cycles))


def parity(p: Permutation) -> Parity:
    """ Even or odd, from the CCF: a k-cycle is a product of k-1 transpositions. """
    return cycles_parity(to_ccf(p).cycles)


def cycles_parity(cycles: Iterable[Cycle]) -> Parity:
    return Parity.ODD if sum(len(c) - 1 for c in cycles) % 2 else Parity.EVEN


def cycle_product(factors: Sequence[Cycle], n: int) -> Permutation:
    """ Product of cycles applied left to right (the first factor acts first).

    Args:
        factors (Sequence[Cycle]): Ordered factors; elements must be below 2^n.
        n (int): Number of lines of the resulting permutation.

    Returns:
        Permutation: x -> factors[-1](...factors[0](x)).
    """
    size = 1 << n
    images = np.arange(size, dtype=np.int64)
    where = np.arange(size, dtype=np.int64)

    for factor in factors:
        elems = np.asarray(factor.elems, dtype=np.int64)
        assert elems.max() < size, f'Cycle {factor} does not fit on {n} lines'

        # points currently sent to the factor's elements move one step further
        sources = where[elems]
        shifted = np.roll(elems, -1)
        images[sources] = shifted
        where[shifted] = sources

    return Permutation(n, images)


def compose_cycles(factors: Iterable[Cycle]) -> Dict[int, int]:
    """ Sparse left-to-right product: the moved points and their images. """
    image: Dict[int, int] = {}
    preimage: Dict[int, int] = {}

    for factor in factors:
        updates = []
        for a, b in factor.mapping().items():
            updates.append((preimage.get(a, a), b))
        for x, b in updates:
            image[x] = b
            preimage[b] = x

    return {x: y for x, y in image.items() if x != y}


def cycles_of(mapping: Dict[int, int]) -> List[Cycle]:
    """ Canonical disjoint cycles of a sparse mapping (fixed points dropped). """
    seen = set()
    cycles = []
    for start in sorted(mapping):
        if start in seen or mapping[start] == start:
            continue
        elems = [start]
        seen.add(start)
        x = mapping[start]
        while x != start:
            elems.append(x)
            seen.add(x)
            x = mapping[x]
        cycles.append(Cycle(tuple(elems)))
    return cycles


def extend_with_line(p: Permutation, cap: Optional[int] = DEFAULT_MAX_LINES) -> Permutation:
    """ Add a top line that passes through unchanged.

    Every cycle of p appears twice (top bit 0 and top bit 1), so the result is
    always even. This is how odd permutations are synthesized without garbage.

    Raises:
        CapExceeded: n+1 lines exceed the cap.
    """
    if cap is not None and p.n + 1 > cap:
        raise CapExceeded(p.n + 1, cap)
    images = np.concatenate([p.images, p.images + p.size])
    return Permutation(p.n + 1, images)
