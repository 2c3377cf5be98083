""" End-to-end synthesis: presynthesis fixing, decomposition search, pairing,
block emission, post-optimization and verification.
"""

import json

from tqdm import tqdm
from datetime import datetime
from dataclasses import asdict, dataclass, fields
from typing import Dict, List, Optional, Tuple

from source.misc.errors import CapExceeded, DomainError, Infeasible, OddPermutation, VerificationFailed
from source.model.circuit import Circuit, Gate, join
from source.model.cost import COST_VARIANTS, CostModel, circuit_cost
from source.model.permutation import (DEFAULT_MAX_LINES, Cycle, Parity, Permutation,
                                      extend_with_line, parity, to_ccf)
from source.sim.simulate import apply_gates, verify
from source.synth.assigner import (EXACT_MATCHING_LIMIT, Matching, PairWeigher, PairingGraph, build_graph,
                                   min_weight_matching, schedule, trivial_matching)
from source.synth.blocks import KAPPA_CACHE, KappaCache
from source.synth.counting import ndcm
from source.synth.decomposer import Decomposition, nth_decomposition
from source.synth.peephole import peephole_optimize


__all__ = ['SynthConfig', 'CostReport', 'presynth_fix', 'synthesize', 'verify']


@dataclass
class SynthConfig:
    """ Settings of one synthesis run.

    Attributes:
        budget_ms (int, optional): Wall-clock budget of the decomposition search;
            None searches every candidate. Defaults to 10000.
        max_decomps_per_cycle (int): Decompositions tried per long cycle. Defaults to 8.
        verify_cap_bits (int): Widest circuit verified by simulation. Defaults to 20.
        allow_odd (str): "extend" adds a restored line to odd permutations,
            "error" rejects them. Defaults to "extend".
        enable_presynth (bool): Fix 0 and the powers of two first. Defaults to True.
        enable_postopt (bool): Peephole-optimize the emitted circuit. Defaults to True.
        pairing (str): "matched" or "trivial" cycle assignment. Defaults to "matched".
        seed (int): Recorded for reproducibility; the search itself is deterministic.
        verbose (bool): Print progress. Defaults to False.
        cost_variant (str): "elementary" or "unit". Defaults to "elementary".
        exact_matching_limit (int): Largest class matched by exact recursion. Defaults to 14.
        dense_graph_limit (int): Classes above this size get sparse edges. Defaults to 20.
        pair_neighbors (int): Edges per node in sparse classes. Defaults to 4.
        sparse_rotations (int, optional): Rotation combinations weighed per edge in
            sparse classes; None weighs all k1 * k2. Defaults to 5.
        kappa_cache_dir (str, optional): Directory for cached kappa netlists. Defaults to None.
        max_lines (int): Largest accepted line count, extension included. Defaults to 20.
    """
    budget_ms: Optional[int] = 10000
    max_decomps_per_cycle: int = 8
    verify_cap_bits: int = DEFAULT_MAX_LINES
    allow_odd: str = 'extend'
    enable_presynth: bool = True
    enable_postopt: bool = True
    pairing: str = 'matched'
    seed: int = 0
    verbose: bool = False
    cost_variant: str = 'elementary'
    exact_matching_limit: int = EXACT_MATCHING_LIMIT
    dense_graph_limit: int = 20
    pair_neighbors: int = 4
    sparse_rotations: Optional[int] = 5
    kappa_cache_dir: Optional[str] = None
    max_lines: int = DEFAULT_MAX_LINES

    def __post_init__(self):
        if self.budget_ms is not None and self.budget_ms < 0:
            raise DomainError(f'budget_ms must be nonnegative, got {self.budget_ms}')
        for name in ('max_decomps_per_cycle', 'verify_cap_bits', 'exact_matching_limit',
                     'dense_graph_limit', 'pair_neighbors', 'max_lines'):
            if getattr(self, name) < 1:
                raise DomainError(f'{name} must be at least 1, got {getattr(self, name)}')
        if self.sparse_rotations is not None and self.sparse_rotations < 1:
            raise DomainError(f'sparse_rotations must be at least 1, got {self.sparse_rotations}')
        if self.allow_odd not in ('extend', 'error'):
            raise DomainError(f'allow_odd must be "extend" or "error", got "{self.allow_odd}"')
        if self.pairing not in ('matched', 'trivial'):
            raise DomainError(f'pairing must be "matched" or "trivial", got "{self.pairing}"')
        if self.cost_variant not in COST_VARIANTS:
            raise DomainError(f'cost_variant must be one of {list(COST_VARIANTS)}, got "{self.cost_variant}"')

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Dict) -> 'SynthConfig':
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise DomainError(f'Unknown configuration keys: {unknown}')
        return cls(**values)


@dataclass
class CostReport:
    n: int
    gate_count: int
    quantum_cost: int
    extra_lines: int
    garbage_lines: int
    runtime_ms: float
    decompositions_explored: int
    matching_weight: int
    presynth_gates: int

    def to_dict(self) -> Dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _bits(v: int) -> List[int]:
    return [b for b in range(v.bit_length()) if v >> b & 1]


def presynth_fix(p: Permutation) -> Tuple[Circuit, Permutation]:
    """ Fix 0 and the powers of two with NOT, CNOT and Toffoli gates.

    Gates are placed on the output side, so p is the residual followed by the
    returned suffix. Row 0 is always fixed; row 2^i is fixed unless that would
    need a gate touching an already fixed row.

    Args:
        p (Permutation): Permutation to preprocess.

    Returns:
        Tuple[Circuit, Permutation]: The suffix circuit and the residual.
    """
    table = p.images.copy()
    output_side: List[Gate] = []

    def push(step: List[Gate]):
        nonlocal table
        table = apply_gates(table, step)
        output_side.extend(step)

    # row 0: NOTs on the set bits of p(0)
    push([Gate(frozenset(), b) for b in _bits(int(table[0]))])

    for i in range(p.n):
        row = 1 << i
        y = int(table[row])
        if y == row:
            continue

        # set bit i without firing on 0 or the fixed powers of two below
        if not y >> i & 1:
            ones = _bits(y)
            if len(ones) >= 2:
                push([Gate(frozenset(ones[:2]), i)])
            elif ones[0] > i:
                push([Gate(frozenset(ones), i)])
            else:
                continue
            y = int(table[row])

        # clear the other bits, controlled on bit i
        push([Gate(frozenset([i]), q) for q in _bits(y) if q != i])

    residual = Permutation(p.n, table)
    return Circuit(p.n, tuple(reversed(output_side))), residual


def _candidate_vectors(limits: List[int]) -> List[Tuple[int, ...]]:
    """ Enumeration indices per long cycle: start at zeros, then advance one
    cycle at a time round-robin until every cycle has used its limit.
    """
    current = [0] * len(limits)
    out = [tuple(current)]
    while True:
        advanced = False
        for j, limit in enumerate(limits):
            if current[j] + 1 < limit:
                current[j] += 1
                out.append(tuple(current))
                advanced = True
        if not advanced:
            return out


class _Search:
    """ State of one decomposition search: cached decompositions, memoized weights. """

    def __init__(self, n: int, cycles: List[Cycle], cfg: SynthConfig, model: CostModel, cache: KappaCache):
        self.n = n
        self.cycles = cycles
        self.cfg = cfg
        self.model = model
        self.weigher = PairWeigher(n, model, cache)
        self.long = [j for j, c in enumerate(cycles) if len(c) > 5]
        self._decomps: Dict[Tuple[int, int], Decomposition] = {}

    def limits(self) -> List[int]:
        return [min(self.cfg.max_decomps_per_cycle, ndcm(len(self.cycles[j]))) for j in self.long]

    def decomposition(self, j: int, index: int) -> Decomposition:
        key = (j, index)
        if key not in self._decomps:
            self._decomps[key] = nth_decomposition(self.cycles[j], index)
        return self._decomps[key]

    def decomps(self, vector: Tuple[int, ...]) -> List[Decomposition]:
        chosen = dict(zip(self.long, vector))
        out = []
        for j, c in enumerate(self.cycles):
            if j in chosen:
                out.append(self.decomposition(j, chosen[j]))
            else:
                out.append(Decomposition((c,), (1,), (False,)))
        return out

    def emit(self, graph: PairingGraph, matching: Matching, suffix: Circuit) -> Circuit:
        blocks = schedule(graph, matching)
        parts = [self.weigher(*b.cycles).circuit for b in blocks]
        circuit = join(self.n, parts + [suffix])
        if self.cfg.enable_postopt:
            circuit = peephole_optimize(circuit)
        return circuit

    def evaluate(self, vector: Tuple[int, ...], suffix: Circuit) -> Tuple[int, Circuit, int]:
        """ Emitted cost, circuit and matching weight of one candidate. """
        graph = build_graph(self.decomps(vector), self.n, self.weigher,
                            dense_limit=self.cfg.dense_graph_limit, neighbors=self.cfg.pair_neighbors,
                            sparse_rotations=self.cfg.sparse_rotations)

        matchings = []
        if self.cfg.pairing == 'matched':
            matchings.append(min_weight_matching(graph, self.cfg.exact_matching_limit))
            # greedy pairing can dead-end where a perfect cover exists
            try:
                matchings.append(trivial_matching(graph))
            except Infeasible:
                pass
        else:
            matchings.append(trivial_matching(graph))

        best = None
        for matching in matchings:
            circuit = self.emit(graph, matching, suffix)
            cost = circuit_cost(circuit, self.model)
            if best is None or cost < best[0]:
                best = (cost, circuit, matching.weight)
        return best


def synthesize(p: Permutation, cfg: Optional[SynthConfig] = None,
               cache: Optional[KappaCache] = None) -> Tuple[Circuit, CostReport]:
    """ Synthesize a permutation into a verified MCT circuit.

    Args:
        p (Permutation): Permutation to realize.
        cfg (SynthConfig, optional): Settings. Defaults to SynthConfig().
        cache (KappaCache, optional): Kappa cache. Defaults to the process-wide
            cache, or a cache in cfg.kappa_cache_dir when set.

    Raises:
        OddPermutation: p is odd and cfg.allow_odd is "error".
        CapExceeded: The line count (with extension) is above cfg.max_lines.
        VerificationFailed: The emitted circuit does not simulate to p.

    Returns:
        Tuple[Circuit, CostReport]: The circuit (one extra line for odd p under
            "extend") and its report.
    """
    if cfg is None:
        cfg = SynthConfig()
    model = CostModel(cfg.cost_variant)
    if cache is None:
        cache = KappaCache(cfg.kappa_cache_dir, cap=cfg.max_lines) if cfg.kappa_cache_dir else KAPPA_CACHE
    start_time = datetime.now()

    if p.n > cfg.max_lines:
        raise CapExceeded(p.n, cfg.max_lines)

    target, extra_lines = p, 0
    if parity(p) is Parity.ODD:
        if cfg.allow_odd == 'error':
            raise OddPermutation(f'The {p.n}-line permutation is odd and line extension is disabled')
        target, extra_lines = extend_with_line(p, cap=cfg.max_lines), 1
        if cfg.verbose:
            print(f'Odd permutation, synthesizing on {target.n} lines with a restored extra line')

    n = target.n
    suffix, residual = Circuit(n), target
    if cfg.enable_presynth:
        suffix, residual = presynth_fix(target)
        # on narrow registers the fixing gates can be odd permutations
        if parity(residual) is Parity.ODD:
            suffix, residual = Circuit(n), target

    cycles = list(to_ccf(residual).cycles)
    if cfg.verbose:
        moved = sum(len(c) for c in cycles)
        print(f'Synthesizing {n}-line permutation with {moved} moved points in {len(cycles)} cycles')

    search = _Search(n, cycles, cfg, model, cache)
    vectors = _candidate_vectors(search.limits())
    deadline = None if cfg.budget_ms is None else cfg.budget_ms / 1000.0

    best, explored = None, 0
    for vector in tqdm(vectors, desc='Candidates', disable=not cfg.verbose):
        elapsed = (datetime.now() - start_time).total_seconds()
        if best is not None and deadline is not None and elapsed >= deadline:
            break

        result = search.evaluate(vector, suffix)
        explored += 1
        if best is None or result[0] < best[0]:
            best = result

    cost, circuit, weight = best
    if cfg.verbose:
        print(f'Search concluded in {datetime.now() - start_time} | Best cost: {cost} | Candidates: {explored}')

    if circuit.n <= cfg.verify_cap_bits and not verify(circuit, p, cap=None):
        raise VerificationFailed(f'Synthesized circuit does not realize the {p.n}-line permutation')

    report = CostReport(n=p.n, gate_count=len(circuit), quantum_cost=circuit_cost(circuit, model),
                        extra_lines=extra_lines, garbage_lines=0,
                        runtime_ms=round((datetime.now() - start_time).total_seconds() * 1000.0, 3),
                        decompositions_explored=explored, matching_weight=weight,
                        presynth_gates=len(suffix))
    return circuit, report
