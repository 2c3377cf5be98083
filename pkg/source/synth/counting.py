""" Exact counts of cycle factorizations and of 5-cycle decompositions.

All arithmetic is on Python integers; scipy's combinatorics run with
`exact=True` so nothing is ever rounded.
"""

import itertools

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from scipy.special import comb, factorial, perm

from source.misc.errors import DomainError, TooLarge
from source.model.permutation import Cycle
from source.synth.blocks import BlockType


# exhaustive search is refused above this cycle length
ORACLE_MAX_LENGTH = 6


@dataclass(frozen=True)
class CycleIndex:
    """ Cycle type of a factorization: counts[k] factors of length k. """
    counts: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        counts = {int(k): int(i) for k, i in dict(self.counts).items() if int(i) != 0}
        for k, i in counts.items():
            if k < 2:
                raise DomainError(f'Factor lengths start at 2, got {k}')
            if i < 0:
                raise DomainError(f'Factor counts must be nonnegative, got {k}:{i}')
        object.__setattr__(self, 'counts', counts)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.counts.items())))

    @classmethod
    def parse(cls, text: str) -> 'CycleIndex':
        """ Read 'k:i_k,k:i_k,...', e.g. '2:1,5:1'. """
        counts: Dict[int, int] = {}
        try:
            for item in text.split(','):
                item = item.strip()
                if not item:
                    continue
                k, i = item.split(':')
                counts[int(k)] = counts.get(int(k), 0) + int(i)
        except ValueError:
            raise DomainError(f'Cycle index "{text}" is not of the form k:i_k,...')
        return cls(counts)

    @property
    def r(self) -> int:
        """ Number of factors. """
        return sum(self.counts.values())

    @property
    def weight(self) -> int:
        """ Sum of k * i_k. """
        return sum(k * i for k, i in self.counts.items())

    def lengths(self) -> List[int]:
        return sorted(k for k, i in self.counts.items() for _ in range(i))

    def is_minimal_for(self, n: int) -> bool:
        return n + self.r - 1 == self.weight

    def __str__(self) -> str:
        return ','.join(f'{k}:{i}' for k, i in sorted(self.counts.items()))


def falling_factorial(n: int, k: int) -> int:
    """ (n)_k = n (n-1) ... (n-k+1), with (n)_0 = 1. """
    if k < 0 or n < 0 or k > n:
        raise DomainError(f'Falling factorial ({n})_{k} needs 0 <= k <= n')
    return int(perm(n, k, exact=True))


def block_space_size(block: BlockType, n: int) -> int:
    """ Number of ordered element choices for a block on n lines: (2^n)_k. """
    return falling_factorial(1 << n, block.size)


def catalan_inequivalent_2cycle_count(n: int) -> int:
    """ Inequivalent minimal transposition factorizations of an n-cycle. """
    if n < 2:
        raise DomainError(f'Cycle length must be at least 2, got {n}')
    return int(comb(3 * n - 3, n - 1, exact=True)) // (2 * n - 1)


def _factorial_product(idx: CycleIndex) -> int:
    out = 1
    for i in idx.counts.values():
        out *= int(factorial(i, exact=True))
    return out


def factorization_count(n: int, idx: CycleIndex) -> int:
    """ Ordered minimal factorizations of an n-cycle with cycle type idx.

    Args:
        n (int): Length of the factored cycle.
        idx (CycleIndex): Number of factors per length.

    Raises:
        DomainError: n < 2.

    Returns:
        int: n^(r-1) r! / prod(i_k!) when n + r - 1 == sum(k i_k), otherwise 0.
    """
    if n < 2:
        raise DomainError(f'Cycle length must be at least 2, got {n}')
    if not idx.is_minimal_for(n):
        return 0
    r = idx.r
    return n ** (r - 1) * int(factorial(r, exact=True)) // _factorial_product(idx)


def inequivalent_factorization_count(n: int, idx: CycleIndex) -> int:
    """ Factorizations counted up to swapping adjacent disjoint factors.

    Returns:
        int: (2n+r-2)! / ((2n-1)! prod(i_k!)) when n + r - 1 == sum(k i_k), otherwise 0.
    """
    if n < 2:
        raise DomainError(f'Cycle length must be at least 2, got {n}')
    if not idx.counts or not idx.is_minimal_for(n):
        return 0
    r = idx.r
    numerator = int(factorial(2 * n + r - 2, exact=True))
    denominator = int(factorial(2 * n - 1, exact=True)) * _factorial_product(idx)
    return numerator // denominator


def n5(n: int) -> int:
    """ Fewest 5-cycles in a minimal decomposition of an n-cycle. """
    if n < 2:
        raise DomainError(f'Cycle length must be at least 2, got {n}')
    if n <= 5:
        return 1 if n == 5 else 0
    if n % 4 == 0:
        return (n - 4) // 4
    return (n - n % 4) // 4


def max_disjoint(n: int) -> int:
    """ Most mutually disjoint 5-cycles detachable from an n-cycle. """
    if n < 0:
        raise DomainError(f'Cycle length must be nonnegative, got {n}')
    return n // 5


def level_lengths(n: int) -> List[int]:
    """ Cycle length at each detaching level, down to the final residual. """
    lengths = [n]
    while lengths[-1] > 5:
        L = lengths[-1]
        lengths.append(L - 4 * (L // 5))
    return lengths


def ndcm(n: int) -> int:
    """ Number of maximally disjoint minimal 5-cycle decompositions of an n-cycle.

    Every level longer than 5 offers one choice per rotation; a residual of
    length 5 or less is final.

    Raises:
        DomainError: n <= 5, nothing to decompose.
    """
    if n <= 5:
        raise DomainError(f'Only cycles longer than 5 are decomposed, got {n}')
    total = 1
    for L in level_lengths(n)[:-1]:
        total *= L
    return total


def _depth(images: Sequence[int]) -> int:
    # minimal number of transpositions: points minus cycles
    seen = [False] * len(images)
    cycles = 0
    for start in range(len(images)):
        if seen[start]:
            continue
        cycles += 1
        x = start
        while not seen[x]:
            seen[x] = True
            x = images[x]
    return len(images) - cycles


def _cycles_of_length(n: int, k: int) -> List[Tuple[int, ...]]:
    # every k-cycle on positions 0..n-1, written from its smallest position
    out = []
    for chosen in itertools.combinations(range(n), k):
        for tail in itertools.permutations(chosen[1:]):
            out.append((chosen[0],) + tail)
    return out


def _normal_form(seq: Sequence[Cycle]) -> Tuple[Tuple[int, ...], ...]:
    """ Lexicographically least sequence reachable by swapping adjacent disjoint factors. """
    rest = list(seq)
    out = []
    while rest:
        best = None
        for i, c in enumerate(rest):
            # c can reach the front if it is disjoint from everything before it
            if all(c.is_disjoint(d) for d in rest[:i]):
                key = (len(c), c.elems)
                if best is None or key < best[0]:
                    best = (key, i)
        _, i = best
        out.append(rest.pop(i).elems)
    return tuple(out)


def oracle_enumerate(cycle: Cycle, idx: CycleIndex, inequivalent: bool = False) -> List[Tuple[Cycle, ...]]:
    """ Exhaustively list minimal factorizations of a short cycle.

    Args:
        cycle (Cycle): Cycle to factor, at most 6 elements.
        idx (CycleIndex): Required factor lengths.
        inequivalent (bool, optional): Keep one representative per class of
            adjacent disjoint swaps. Defaults to False.

    Raises:
        TooLarge: The cycle has more than 6 elements.

    Returns:
        List[Tuple[Cycle, ...]]: Ordered factor sequences whose left-to-right
            product is the cycle; factors are written from their smallest element.
    """
    n = len(cycle)
    if n > ORACLE_MAX_LENGTH:
        raise TooLarge(f'Exhaustive factorization is limited to length {ORACLE_MAX_LENGTH}, got {n}')
    if not idx.counts or not idx.is_minimal_for(n):
        return []

    # positions in ascending value order keep canonical forms aligned
    support = sorted(cycle.elems)
    where = {a: i for i, a in enumerate(support)}
    target = [0] * n
    for a, b in cycle.mapping().items():
        target[where[a]] = where[b]

    candidates = {k: _cycles_of_length(n, k) for k in idx.counts if k <= n}
    if len(candidates) != len(idx.counts):
        return []

    found: List[Tuple[Cycle, ...]] = []
    remaining = dict(idx.counts)

    def search(rest: List[int], prefix: List[Tuple[int, ...]], budget: int):
        if budget == 0:
            if all(rest[x] == x for x in range(n)):
                found.append(tuple(Cycle(tuple(support[p] for p in c)) for c in prefix))
            return
        if _depth(rest) > budget:
            return

        for k in sorted(remaining):
            if remaining[k] == 0:
                continue
            remaining[k] -= 1
            for c in candidates[k]:
                # rest' = c^-1 then rest, so that c * rest' == rest
                inv = list(range(n))
                for i in range(k):
                    inv[c[(i + 1) % k]] = c[i]
                search([rest[inv[x]] for x in range(n)], prefix + [c], budget - (k - 1))
            remaining[k] += 1

    search(target, [], n - 1)

    if not inequivalent:
        return found

    classes: Dict[Tuple[Tuple[int, ...], ...], Tuple[Cycle, ...]] = {}
    for seq in found:
        classes.setdefault(_normal_form(seq), seq)
    return list(classes.values())
