""" The seven building blocks and their synthesis by conjugation.

A block instance is realized as route + kappa + route^-1: route sends the
block's elements to the top k values of the state space, kappa applies the
block's cycle pattern on those fixed values, and the inverse route brings them
back. Kappa depends only on (block type, n) and is cached.
"""

import os
import threading

from enum import Enum
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from source.data.formats import parse_netlist, write_netlist
from source.misc.errors import CapExceeded, DomainError, RoutingFailed
from source.model.circuit import Circuit, Gate, invert, join
from source.model.cost import DEFAULT_COST_MODEL, CostModel, circuit_cost
from source.model.permutation import DEFAULT_MAX_LINES, Cycle, cycle_product
from source.sim.simulate import apply_gate, apply_gates, simulate
from source.synth.peephole import peephole_optimize
from source.synth.transform import lift, mini_transform_synth


class BlockType(Enum):
    P22 = (2, 2)
    S3 = (3,)
    P33 = (3, 3)
    P42 = (4, 2)
    P44 = (4, 4)
    S5 = (5,)
    P55 = (5, 5)

    @property
    def lengths(self) -> Tuple[int, ...]:
        return self.value

    @property
    def size(self) -> int:
        """ Total number of elements moved by the block. """
        return sum(self.value)

    @classmethod
    def for_lengths(cls, lengths: Sequence[int]) -> 'BlockType':
        key = tuple(sorted(lengths, reverse=True))
        for btype in cls:
            if btype.value == key:
                return btype
        raise DomainError(f'No building block has cycle lengths {key}')

    @classmethod
    def from_tag(cls, tag: str) -> 'BlockType':
        try:
            return cls[tag.upper()]
        except KeyError:
            raise DomainError(f'Unknown block "{tag}", choose from {[b.name for b in cls]}')


@dataclass(frozen=True)
class BlockInstance:
    """ One or two disjoint cycles forming a building block on n lines.

    Cycles are stored in the block type's length order (the 4-cycle of a P42
    comes first).
    """
    btype: BlockType
    cycles: Tuple[Cycle, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, 'cycles', tuple(self.cycles))

        if tuple(len(c) for c in self.cycles) != self.btype.lengths:
            raise DomainError(f'Cycles {self.cycles} do not match block {self.btype.name}')
        if len(self.cycles) == 2 and not self.cycles[0].is_disjoint(self.cycles[1]):
            raise DomainError(f'Block cycles {self.cycles[0]} and {self.cycles[1]} overlap')
        if (1 << self.n) < self.btype.size:
            raise DomainError(f'Block {self.btype.name} needs {self.btype.size} values, {self.n} lines hold {1 << self.n}')
        if max(max(c.elems) for c in self.cycles) >= 1 << self.n:
            raise DomainError(f'Block elements do not fit on {self.n} lines')

    @classmethod
    def of(cls, cycles: Sequence[Cycle], n: int) -> 'BlockInstance':
        """ Infer the block type and put the longer cycle first. """
        ordered = tuple(sorted(cycles, key=len, reverse=True))
        return cls(BlockType.for_lengths([len(c) for c in ordered]), ordered, n)

    def elements(self) -> List[int]:
        return [a for c in self.cycles for a in c.elems]

    def label(self) -> str:
        return self.btype.name + ''.join(str(c) for c in self.cycles)


def canonical_targets(btype: BlockType, n: int) -> List[int]:
    """ The top k values 2^n-k .. 2^n-1, ascending.

    Raises:
        DomainError: 2^n < k.
    """
    size = 1 << n
    if size < btype.size:
        raise DomainError(f'Block {btype.name} needs {btype.size} values, {n} lines hold {size}')
    return list(range(size - btype.size, size))


def canonical_cycles(btype: BlockType, n: int) -> List[Cycle]:
    """ The block's cycle pattern laid over canonical_targets in order. """
    targets = canonical_targets(btype, n)
    cycles, start = [], 0
    for k in btype.lengths:
        cycles.append(Cycle(tuple(targets[start:start + k])))
        start += k
    return cycles


def build_kappa(btype: BlockType, n: int, model: CostModel = DEFAULT_COST_MODEL) -> Circuit:
    """ Synthesize the canonical circuit of a block type on n lines.

    The canonical permutation is synthesized on a narrow core of b low lines
    (b from ceil(log2 k) up to two more, at most n) and lifted with the
    remaining high lines as controls. The cheapest lift wins; for P22 this is
    the single C^(n-2)NOT on line 0.
    """
    lowest = max(1, (btype.size - 1).bit_length())
    best: Optional[Circuit] = None
    best_key = None

    for b in range(lowest, min(lowest + 2, n) + 1):
        core_perm = cycle_product(canonical_cycles(btype, b), b)
        core = peephole_optimize(mini_transform_synth(core_perm, cap=None))

        lifted = lift(core, n)
        key = (circuit_cost(lifted, model), len(lifted), b)
        if best_key is None or key < best_key:
            best, best_key = lifted, key

    return best


class KappaCache:
    """ Kappa circuits per (block type, n, cost variant).

    Reads are lock-free; insertion is serialized and insert-if-absent. With a
    cache directory, circuits are also stored as netlist files and reused across
    runs.
    """

    def __init__(self, cache_dir: Optional[os.PathLike] = None, cap: Optional[int] = DEFAULT_MAX_LINES):
        self.cache_dir = cache_dir
        self.cap = cap
        self._circuits: Dict[Tuple[BlockType, int, str], Circuit] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._circuits)

    def _path(self, btype: BlockType, n: int, variant: str) -> str:
        return os.path.join(self.cache_dir, f'kappa_{btype.name}_{n}_{variant}.real')

    def get(self, btype: BlockType, n: int, model: CostModel = DEFAULT_COST_MODEL) -> Circuit:
        if self.cap is not None and n > self.cap:
            raise CapExceeded(n, self.cap)

        key = (btype, n, model.variant)
        circuit = self._circuits.get(key)
        if circuit is not None:
            return circuit

        circuit = self._load(btype, n, model.variant)
        if circuit is None:
            circuit = build_kappa(btype, n, model)
            self._store(btype, n, model.variant, circuit)

        with self._lock:
            return self._circuits.setdefault(key, circuit)

    def _load(self, btype: BlockType, n: int, variant: str) -> Optional[Circuit]:
        if self.cache_dir is None:
            return None
        path = self._path(btype, n, variant)
        if not os.path.exists(path):
            return None

        with open(path, encoding='utf-8') as f:
            circuit = parse_netlist(f.read())

        # a stale or foreign file is rebuilt rather than trusted
        if circuit.n != n or simulate(circuit, cap=None) != cycle_product(canonical_cycles(btype, n), n):
            return None
        return circuit

    def _store(self, btype: BlockType, n: int, variant: str, circuit: Circuit):
        if self.cache_dir is None:
            return
        os.makedirs(self.cache_dir, exist_ok=True)
        with self._lock:
            with open(self._path(btype, n, variant), 'w', encoding='utf-8') as f:
                f.write(write_netlist(circuit))


# process-wide default cache
KAPPA_CACHE = KappaCache()


def kappa(btype: BlockType, n: int, model: CostModel = DEFAULT_COST_MODEL,
          cache: Optional[KappaCache] = None) -> Circuit:
    """ Cached canonical circuit of a block type on n lines.

    Raises:
        CapExceeded: n is above the cache's cap.
    """
    return (cache if cache is not None else KAPPA_CACHE).get(btype, n, model)


def _pattern_flip(v: int, b: int, controls: Sequence[int]) -> List[Gate]:
    """ Flip bit b of every value agreeing with v on the control lines.

    Lines where v is 0 become positive controls between two NOT gates.
    """
    zeros = [c for c in sorted(controls) if not v >> c & 1]
    flips = [Gate(frozenset(), line) for line in zeros]
    return flips + [Gate(frozenset(controls), b)] + flips


def _transposition(w: int, b: int, n: int) -> List[Gate]:
    # swap w and w ^ 2^b only: full control on the other lines
    return _pattern_flip(w, b, [line for line in range(n) if line != b])


def _exact_swap(v: int, t: int, n: int) -> List[Gate]:
    """ Gates realizing exactly the transposition (v t), via a bit-flip path. """
    path, w = [], v
    for b in range(n):
        if (v ^ t) >> b & 1:
            path.append((w, b))
            w ^= 1 << b

    steps = [_transposition(w, b, n) for w, b in path]
    gates: List[Gate] = []
    for step in steps[:-1]:
        gates.extend(step)
    gates.extend(steps[-1])
    for step in reversed(steps[:-1]):
        gates.extend(step)
    return gates


def _cheapest_flip(v: int, t: int, placed: Sequence[int], n: int) -> Optional[List[Gate]]:
    """ Gates moving v one bit closer to t that leave every placed value alone.

    Controls are taken from v's full bit pattern, one line at a time, each time
    the line that tells v apart from the most placed values still matching.
    """
    taken = set(placed)
    diffs = [p ^ v for p in placed]
    best, best_key = None, None

    for b in range(n):
        # a placed neighbour across bit b can never be excluded
        if not (v ^ t) >> b & 1 or v ^ (1 << b) in taken:
            continue

        controls: List[int] = []
        hit = diffs
        while hit:
            # most placed values excluded, then positive controls, then the lowest line
            line = max((c for c in range(n) if c != b and c not in controls),
                       key=lambda c: (sum(d >> c & 1 for d in hit), v >> c & 1, -c))
            controls.append(line)
            hit = [d for d in hit if not d >> line & 1]

        zeros = sum(1 for c in controls if not v >> c & 1)
        key = (len(controls), zeros, 0 if t >> b & 1 else 1, b)
        if best_key is None or key < best_key:
            best, best_key = (b, controls), key

    return None if best is None else _pattern_flip(v, *best)


def route(sources: Sequence[int], targets: Sequence[int], n: int) -> Circuit:
    """ A circuit sending sources[i] to targets[i] for every i.

    Sources are placed one at a time by single-bit flips. Each flip fires only on
    values agreeing with the moving value on its control lines (0-bits through
    NOT pairs), with just enough controls to keep already placed values still;
    positions of unplaced sources follow every gate. When every useful flip
    would land on a placed value the exact transposition (v t) is used.

    Raises:
        DomainError: Lengths differ, values repeat or do not fit on n lines.
        RoutingFailed: The result misses the mapping (a bug).

    Returns:
        Circuit: The routing circuit; other values move arbitrarily.
    """
    sources, targets = [int(s) for s in sources], [int(t) for t in targets]
    size = 1 << n
    if len(sources) != len(targets):
        raise DomainError(f'{len(sources)} sources but {len(targets)} targets')
    if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
        raise DomainError('Sources and targets must be distinct values')
    if any(not 0 <= x < size for x in sources + targets):
        raise DomainError(f'Routing values must lie in 0..{size - 1}')

    current = list(sources)
    gates: List[Gate] = []

    for i, t in enumerate(targets):
        placed = targets[:i]
        while current[i] != t:
            v = current[i]
            step = _cheapest_flip(v, t, placed, n)
            if step is None:
                step = _exact_swap(v, t, n)
            gates.extend(step)
            for g in step:
                current[i:] = [apply_gate(x, g) for x in current[i:]]

    result = Circuit(n, tuple(gates))
    if apply_gates(sources, result.gates).tolist() != targets:
        raise RoutingFailed(f'Routing {sources} to {targets} failed')
    return result


def synth_block(b: BlockInstance, model: CostModel = DEFAULT_COST_MODEL,
                cache: Optional[KappaCache] = None) -> Circuit:
    """ Realize a block instance as route + kappa + route^-1.

    Args:
        b (BlockInstance): Block to synthesize.
        model (CostModel, optional): Cost model used to pick the kappa circuit.
        cache (KappaCache, optional): Kappa cache. Defaults to the process-wide cache.

    Returns:
        Circuit: Circuit simulating exactly to the block's cycles, labeled with the block.
    """
    forward = route(b.elements(), canonical_targets(b.btype, b.n), b.n)
    core = kappa(b.btype, b.n, model, cache)
    return join(b.n, [forward, core, invert(forward)]).labeled(b.label())


class PairWeight(NamedTuple):
    cost: int
    rotations: Tuple[int, ...]
    evaluated: int
    circuit: Circuit


def pair_weight(c1: Cycle, c2: Optional[Cycle], btype: BlockType, n: int,
                model: CostModel = DEFAULT_COST_MODEL, cache: Optional[KappaCache] = None,
                optimize: bool = True, limit: Optional[int] = None) -> PairWeight:
    """ Cheapest synthesis of one or two cycles as a block, over all rotations.

    The cycles are evaluated in a fixed canonical order, so swapping the
    arguments searches the same k1 * k2 candidates. Ties keep the lowest
    rotation indices.

    Args:
        c1 (Cycle): First cycle.
        c2 (Cycle, optional): Second cycle, None for a single-cycle block.
        btype (BlockType): Block type matching the cycle lengths.
        n (int): Line count.
        model (CostModel, optional): Cost model.
        cache (KappaCache, optional): Kappa cache.
        optimize (bool, optional): Score post-peephole circuits. Defaults to True.
        limit (int, optional): Most rotation combinations tried, taken diagonal
            first ((0,0), (1,1), ...). Defaults to None, all of them.

    Returns:
        PairWeight: Best cost, the rotation of each argument (relative to its own
            element order), the number of candidates evaluated and the best circuit.
    """
    given = [c1] if c2 is None else [c1, c2]
    assert len(given) == len(btype.lengths), f'{len(given)} cycles for block {btype.name}'

    canon = sorted((c.canonical() for c in given), key=lambda c: (-len(c), c.elems))
    assert tuple(len(c) for c in canon) == btype.lengths, f'Cycle lengths do not match block {btype.name}'

    best: Optional[Tuple[int, Tuple[int, ...], Circuit]] = None
    evaluated = 0
    grids = [range(len(c)) for c in canon]
    combos = [(r,) for r in grids[0]] if len(canon) == 1 else [(r1, r2) for r1 in grids[0] for r2 in grids[1]]
    if limit is not None and limit < len(combos):
        combos = sorted(combos, key=lambda r: ((r[-1] - r[0]) % len(canon[-1]), r[0]))[:max(1, limit)]

    for rotations in combos:
        cycles = tuple(c.rotate(r) for c, r in zip(canon, rotations))
        circuit = synth_block(BlockInstance(btype, cycles, n), model, cache)
        if optimize:
            circuit = peephole_optimize(circuit)
        cost = circuit_cost(circuit, model)
        evaluated += 1
        if best is None or cost < best[0]:
            best = (cost, rotations, circuit)

    cost, rotations, circuit = best
    starts = {c.key(): c.rotate(r).elems[0] for c, r in zip(canon, rotations)}
    per_argument = tuple(c.elems.index(starts[c.key()]) for c in given)
    return PairWeight(cost, per_argument, evaluated, circuit)
