""" Pairing of elementary cycles into building blocks.

Every factor of every decomposition is a node. Nodes of compatible length
classes ({2,4}, {3}, {5}) are joined by an edge weighted with the cost of
synthesizing the pair as one block; 3- and 5-cycles may also stay single. A
minimum-weight perfect cover then decides the blocks, and the schedule places
each block at the later natural slot of its members.
"""

import networkx as nx

from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from source.misc.errors import Infeasible, OrderViolation
from source.model.cost import DEFAULT_COST_MODEL, CostModel
from source.model.permutation import Cycle, compose_cycles
from source.synth.blocks import BlockInstance, BlockType, KappaCache, PairWeight, pair_weight
from source.synth.decomposer import Decomposition


# classes whose nodes may be synthesized alone
SINGLE_CLASSES = (3, 5)

# nodes per class solved by exact subset recursion; larger classes use blossom
EXACT_MATCHING_LIMIT = 14


def length_class(k: int) -> int:
    """ 2- and 4-cycles share a class (P22, P42, P44); 3 and 5 are their own. """
    return 24 if k in (2, 4) else k


class PairWeigher:
    """ Memoized pair_weight keyed on the cycles' canonical forms.

    Level-1 blocks recur across decomposition candidates, so the memo is meant
    to live for a whole synthesis run. A pair first weighed under a rotation
    limit keeps that weight for the rest of the run.
    """

    def __init__(self, n: int, model: CostModel = DEFAULT_COST_MODEL,
                 cache: Optional[KappaCache] = None, optimize: bool = True):
        self.n = n
        self.model = model
        self.cache = cache
        self.optimize = optimize
        self.evaluations = 0
        self._memo: Dict[Tuple, PairWeight] = {}

    def __len__(self) -> int:
        return len(self._memo)

    def __call__(self, c1: Cycle, c2: Optional[Cycle] = None, limit: Optional[int] = None) -> PairWeight:
        cycles = [c1] if c2 is None else [c1, c2]
        btype = BlockType.for_lengths([len(c) for c in cycles])
        key = (btype, tuple(sorted(c.key() for c in cycles)))

        weight = self._memo.get(key)
        if weight is None:
            weight = pair_weight(c1, c2, btype, self.n, self.model, self.cache, self.optimize, limit)
            self.evaluations += weight.evaluated
            self._memo[key] = weight
        return weight


@dataclass(frozen=True)
class Node:
    """ One factor of one decomposition.

    Attributes:
        cycle (Cycle): The factor.
        origin (int): Index of the input cycle it came from.
        level (int): Detaching level of the factor.
        position (int): Index of the factor within its decomposition.
        slot (int): Index in the natural order (level, origin, position).
    """
    cycle: Cycle
    origin: int
    level: int
    position: int
    slot: int

    @property
    def cls(self) -> int:
        return length_class(len(self.cycle))


@dataclass
class PairingGraph:
    n: int
    nodes: List[Node]
    edges: Dict[Tuple[int, int], int] = field(default_factory=dict)
    singles: Dict[int, int] = field(default_factory=dict)
    expected: Dict[int, int] = field(default_factory=dict)

    def classes(self) -> Dict[int, List[int]]:
        """ Node indices per length class, in natural order. """
        out: Dict[int, List[int]] = {}
        for i, node in enumerate(self.nodes):
            out.setdefault(node.cls, []).append(i)
        return out

    def weight(self, i: int, j: Optional[int] = None) -> int:
        if j is None:
            return self.singles[i]
        return self.edges[(min(i, j), max(i, j))]

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges


@dataclass
class Matching:
    pairs: List[Tuple[int, int]] = field(default_factory=list)
    singles: List[int] = field(default_factory=list)
    weight: int = 0

    def covered(self) -> List[int]:
        return sorted([i for p in self.pairs for i in p] + self.singles)


def order_compatible(nodes: Sequence[Node], i: int, j: int) -> bool:
    """ May nodes i and j (in natural order, i first) be emitted together at j's slot?

    Both must be disjoint, and i must be disjoint from every node strictly
    between, so that moving it forward keeps the product.
    """
    a, b = nodes[i], nodes[j]
    if a.slot > b.slot:
        a, b = b, a
    if not a.cycle.is_disjoint(b.cycle):
        return False
    return all(a.cycle.is_disjoint(nodes[k].cycle) for k in range(a.slot + 1, b.slot))


def build_graph(decomps: Sequence[Decomposition], n: int,
                weigher: Optional[Callable[..., PairWeight]] = None,
                dense_limit: int = 20, neighbors: int = 4,
                sparse_rotations: Optional[int] = None) -> PairingGraph:
    """ Build the weighted pairing graph over all factors.

    Args:
        decomps (Sequence[Decomposition]): One decomposition per input cycle; a
            cycle synthesized whole is a one-factor decomposition.
        n (int): Line count.
        weigher (Callable, optional): Weight function (c1, c2 or None) -> PairWeight.
            Defaults to a fresh PairWeigher.
        dense_limit (int, optional): Classes above this size get sparse edges. Defaults to 20.
        neighbors (int, optional): Later compatible nodes linked per node in
            sparse classes. Defaults to 4.
        sparse_rotations (int, optional): Rotation combinations weighed per edge
            in sparse classes. Defaults to None, all of them.

    Returns:
        PairingGraph: Nodes in natural order with edge and single weights.
    """
    if weigher is None:
        weigher = PairWeigher(n)

    raw = []
    expected: Dict[int, int] = {}
    for origin, d in enumerate(decomps):
        expected.update(compose_cycles(d.factors))
        for position, (factor, level) in enumerate(zip(d.factors, d.levels)):
            raw.append((level, origin, position, factor))
    raw.sort(key=lambda item: item[:3])

    nodes = [Node(factor, origin, level, position, slot) for slot, (level, origin, position, factor) in enumerate(raw)]
    graph = PairingGraph(n, nodes, expected=expected)

    for cls, members in graph.classes().items():
        if cls in SINGLE_CLASSES:
            for i in members:
                graph.singles[i] = weigher(nodes[i].cycle).cost

        sparse = len(members) > dense_limit
        for a, i in enumerate(members):
            linked = 0
            for scanned, j in enumerate(members[a + 1:]):
                if sparse and (linked >= neighbors or scanned >= 8 * neighbors):
                    break
                size = len(nodes[i].cycle) + len(nodes[j].cycle)
                if size > 1 << n or not order_compatible(nodes, i, j):
                    continue
                if nodes[i].origin != nodes[j].origin:
                    assert nodes[i].cycle.is_disjoint(nodes[j].cycle), 'Factors of different cycles must be disjoint'
                if sparse and sparse_rotations is not None:
                    weight = weigher(nodes[i].cycle, nodes[j].cycle, sparse_rotations)
                else:
                    weight = weigher(nodes[i].cycle, nodes[j].cycle)
                graph.edges[(i, j)] = weight.cost
                linked += 1

    return graph


def _exact_cover(graph: PairingGraph, members: List[int]) -> Optional[Matching]:
    """ Minimum-weight cover by subset recursion on the lowest uncovered node. """
    count = len(members)

    @lru_cache(maxsize=None)
    def best(mask: int) -> Optional[Tuple[int, Tuple]]:
        if mask == 0:
            return 0, ()
        a = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << a)
        i = members[a]
        choice = None

        if i in graph.singles:
            sub = best(rest)
            if sub is not None:
                choice = (graph.singles[i] + sub[0], ((i,),) + sub[1])

        for b in range(a + 1, count):
            if not rest >> b & 1:
                continue
            j = members[b]
            if not graph.has_edge(i, j):
                continue
            sub = best(rest & ~(1 << b))
            if sub is None:
                continue
            total = graph.weight(i, j) + sub[0]
            if choice is None or total < choice[0]:
                choice = (total, ((i, j),) + sub[1])
        return choice

    result = best((1 << count) - 1)
    if result is None:
        return None
    weight, groups = result
    return Matching([g for g in groups if len(g) == 2], [g[0] for g in groups if len(g) == 1], weight)


def _savings_cover(graph: PairingGraph, members: List[int]) -> Matching:
    """ Cover of a class where every node may stay single: pair by maximum total saving.

    Pairing i and j saves singles[i] + singles[j] - w(i, j), so the cheapest
    cover is all singles minus a maximum-weight matching over positive savings.
    """
    G = nx.Graph()
    G.add_nodes_from(members)
    for (i, j), w in graph.edges.items():
        if i in G and j in G:
            saving = graph.singles[i] + graph.singles[j] - w
            if saving > 0:
                G.add_edge(i, j, weight=saving)

    pairs = sorted((min(u, v), max(u, v)) for u, v in nx.max_weight_matching(G))
    paired = {i for p in pairs for i in p}
    singles = [i for i in members if i not in paired]
    weight = sum(graph.weight(i, j) for i, j in pairs) + sum(graph.singles[i] for i in singles)
    return Matching(pairs, singles, weight)


def _blossom_cover(graph: PairingGraph, members: List[int]) -> Optional[Matching]:
    """ Minimum-weight cover via networkx; a single is an edge to the node's mirror. """
    if all(i in graph.singles for i in members):
        return _savings_cover(graph, members)

    G = nx.Graph()
    G.add_nodes_from(members)
    for (i, j), w in graph.edges.items():
        if i in G and j in G:
            G.add_edge(i, j, weight=w)

    mirrors = [i for i in members if i in graph.singles]
    for i in mirrors:
        G.add_edge(i, ('mirror', i), weight=graph.singles[i])
    for a, i in enumerate(mirrors):
        for j in mirrors[a + 1:]:
            G.add_edge(('mirror', i), ('mirror', j), weight=0)

    matched = nx.min_weight_matching(G)
    pairs, singles, weight = [], [], 0
    covered = set()
    for u, v in matched:
        if isinstance(u, tuple) and isinstance(v, tuple):
            continue
        if isinstance(u, tuple) or isinstance(v, tuple):
            i = v if isinstance(u, tuple) else u
            singles.append(i)
            weight += graph.singles[i]
            covered.add(i)
        else:
            i, j = min(u, v), max(u, v)
            pairs.append((i, j))
            weight += graph.weight(i, j)
            covered.update((i, j))

    if covered != set(members):
        return None
    return Matching(sorted(pairs), sorted(singles), weight)


def min_weight_matching(g: PairingGraph, exact_limit: int = EXACT_MATCHING_LIMIT) -> Matching:
    """ Minimum-weight perfect cover of every class by pairs and allowed singles.

    Args:
        g (PairingGraph): Graph to cover.
        exact_limit (int, optional): Largest class solved by subset recursion.
            Defaults to 14.

    Raises:
        Infeasible: Some class has no perfect cover (an odd {2,4} class).

    Returns:
        Matching: Pairs, singles and their total weight.
    """
    result = Matching()
    for cls, members in sorted(g.classes().items()):
        if cls not in SINGLE_CLASSES and len(members) % 2:
            raise Infeasible(f'{len(members)} cycles of length 2 or 4 cannot be paired')

        if len(members) <= exact_limit:
            part = _exact_cover(g, members)
        else:
            part = _blossom_cover(g, members)
        if part is None:
            raise Infeasible(f'No perfect cover for the length-{cls} class of {len(members)} cycles')

        result.pairs.extend(part.pairs)
        result.singles.extend(part.singles)
        result.weight += part.weight

    result.pairs.sort()
    result.singles.sort()
    return result


def trivial_matching(g: PairingGraph) -> Matching:
    """ Consecutive pairing: each node takes the next free compatible node in natural order. """
    result = Matching()
    for cls, members in sorted(g.classes().items()):
        free = list(members)
        while free:
            i = free.pop(0)
            partner = next((j for j in free if g.has_edge(i, j)), None)
            if partner is not None:
                free.remove(partner)
                result.pairs.append((i, partner))
                result.weight += g.weight(i, partner)
            elif i in g.singles:
                result.singles.append(i)
                result.weight += g.singles[i]
            else:
                raise Infeasible(f'Cycle {g.nodes[i].cycle} has no partner')

    result.pairs.sort()
    result.singles.sort()
    return result


def schedule(g: PairingGraph, matching: Matching) -> List[BlockInstance]:
    """ Order the matched blocks so their product is the product of the input cycles.

    A pair is emitted at the later of its members' natural slots.

    Raises:
        OrderViolation: The emitted order does not reproduce the input product.

    Returns:
        List[BlockInstance]: Blocks in emission order.
    """
    if matching.covered() != list(range(len(g.nodes))):
        raise OrderViolation('The matching does not cover every factor exactly once')

    groups = [(max(g.nodes[i].slot, g.nodes[j].slot), (i, j)) for i, j in matching.pairs]
    groups += [(g.nodes[i].slot, (i,)) for i in matching.singles]
    groups.sort()

    blocks = [BlockInstance.of([g.nodes[i].cycle for i in members], g.n) for _, members in groups]

    emitted = [c for b in blocks for c in b.cycles]
    if compose_cycles(emitted) != g.expected:
        raise OrderViolation('Scheduled blocks do not reproduce the input cycles')
    return blocks
