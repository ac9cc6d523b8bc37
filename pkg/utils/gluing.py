"""
Gluing a new vertex v and its d neighbours n_1..n_d onto a host graph H.

Each n_i is joined to one independent set of H. The sets are chosen in
non-increasing size order and, within one size class, by non-decreasing index,
so every multiset of sets is produced once. A host vertex whose degree
(host degree plus the number of chosen sets containing it) reaches d is
forbidden for the remaining choices.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional

from utils.graph import Graph, iter_bits, popcount


@dataclass
class GluingRules:
    d: int
    # candidate neighbour sets of H, grouped by size
    candidates: Dict[int, List[int]]
    accept: Callable[[Graph], bool]
    # each chosen set is used at most once (twins cannot be vertex-critical)
    distinct: bool = False
    # chosen sets must be pairwise disjoint (girth >= 5)
    disjoint: bool = False
    # every host vertex must end up in some chosen set (mtf)
    cover_host: bool = False
    min_set_size: int = 0
    prune_forbidden: bool = True


@dataclass
class AssignmentState:
    host: Graph
    d: int
    assigned: List[int] = field(default_factory=list)
    load: List[int] = field(default_factory=list)
    forbidden: int = 0

    @classmethod
    def start(cls, host: Graph, d: int) -> "AssignmentState":
        load = host.degrees()
        forbidden = 0
        for x, deg in enumerate(load):
            if deg >= d:
                forbidden |= 1 << x
        return cls(host=host, d=d, load=load, forbidden=forbidden)

    @property
    def covered(self) -> int:
        mask = 0
        for s in self.assigned:
            mask |= s
        return mask


def expand_host(host: Graph, assigned: List[int]) -> Graph:
    """Host vertices keep 0..m-1, n_i becomes m+i, the apex v is the last vertex."""
    m = host.order
    d = len(assigned)
    adj = list(host.adj) + [0] * (d + 1)
    apex = m + d
    for i, s in enumerate(assigned):
        u = m + i
        adj[u] = s | 1 << apex
        for x in iter_bits(s):
            adj[x] |= 1 << u
        adj[apex] |= 1 << u
    return Graph(m + d + 1, adj, check=False)


def glue(state: AssignmentState, rules: GluingRules, set_order: Optional[int] = None,
         set_index: int = 0) -> Iterator[Graph]:
    """Depth-first over set assignments; yields every accepted expanded graph."""
    d = rules.d
    if set_order is None:
        set_order = max(rules.candidates, default=0)
    num_assigned = len(state.assigned)
    if num_assigned == d:
        g = expand_host(state.host, state.assigned)
        if rules.accept(g):
            yield g
        return
    if set_order < rules.min_set_size:
        return
    if rules.cover_host:
        uncovered = state.host.vertex_mask & ~state.covered
        if popcount(uncovered) > (d - num_assigned) * set_order:
            return

    sets = rules.candidates.get(set_order, [])
    for j in range(set_index, len(sets)):
        s = sets[j]
        if rules.prune_forbidden and s & state.forbidden:
            continue
        saved = state.forbidden
        state.assigned.append(s)
        for x in iter_bits(s):
            state.load[x] += 1
            if state.load[x] >= d:
                state.forbidden |= 1 << x
        if rules.disjoint:
            state.forbidden |= s
        yield from glue(state, rules, set_order, j + 1 if rules.distinct else j)
        for x in iter_bits(s):
            state.load[x] -= 1
        state.assigned.pop()
        state.forbidden = saved
    if set_order > rules.min_set_size:
        yield from glue(state, rules, set_order - 1, 0)


def group_by_size(sets: List[int], max_size: int) -> Dict[int, List[int]]:
    out: Dict[int, List[int]] = {}
    for s in sets:
        size = popcount(s)
        if size <= max_size:
            out.setdefault(size, []).append(s)
    return out

