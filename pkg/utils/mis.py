"""Independent set enumeration on bitset graphs (maximal, all, and distance-3)."""
from typing import Dict, List

from utils.graph import Graph, bits_to_list, iter_bits, popcount


def _set_order_key(s: int):
    return (-popcount(s), bits_to_list(s))


class IndependentSetIndex:
    """Maximal independent sets grouped by size; each size class in lexicographic order."""

    def __init__(self, by_size: Dict[int, List[int]], max_size: int):
        self.by_size = by_size
        self.max_size = max_size

    def sets_of_size(self, size: int) -> List[int]:
        return self.by_size.get(size, [])

    def sizes(self) -> List[int]:
        return sorted(self.by_size, reverse=True)

    def all_sets(self) -> List[int]:
        """Every stored set, size descending then lexicographic."""
        return [s for size in self.sizes() for s in self.by_size[size]]

    def __len__(self) -> int:
        return sum(len(v) for v in self.by_size.values())


def enumerate_maximal_independent_sets(g: Graph, max_size: int) -> IndependentSetIndex:
    """
    Maximal independent sets of size <= max_size: Bron-Kerbosch with pivoting
    on the complement, cut off as soon as the growing set exceeds max_size.
    A graph without vertices has exactly one maximal independent set, the empty one.
    """
    if max_size < 1:
        raise ValueError(f"max_size must be at least 1, got {max_size}")
    full = g.vertex_mask
    non_adj = [full & ~row & ~(1 << v) for v, row in enumerate(g.adj)]
    found: List[int] = []

    def expand(current: int, size: int, candidates: int, excluded: int) -> None:
        if not candidates:
            if not excluded:
                found.append(current)
            return
        if size == max_size:
            return
        pool = candidates | excluded
        pivot = max(iter_bits(pool), key=lambda u: popcount(non_adj[u] & candidates))
        for v in iter_bits(candidates & ~non_adj[pivot]):
            expand(current | 1 << v, size + 1, candidates & non_adj[v], excluded & non_adj[v])
            candidates &= ~(1 << v)
            excluded |= 1 << v

    expand(0, 0, full, 0)
    by_size: Dict[int, List[int]] = {}
    for s in sorted(found, key=_set_order_key):
        by_size.setdefault(popcount(s), []).append(s)
    return IndependentSetIndex(by_size, max_size)


def enumerate_independent_sets(g: Graph, max_size: int, min_size: int = 0) -> List[int]:
    """All independent sets with min_size <= size <= max_size, size descending then lexicographic."""
    full = g.vertex_mask
    out: List[int] = []

    def grow(current: int, size: int, allowed: int) -> None:
        if size >= min_size:
            out.append(current)
        if size == max_size:
            return
        for v in iter_bits(allowed):
            later = allowed & ~((2 << v) - 1)
            grow(current | 1 << v, size + 1, later & ~g.adj[v])

    grow(0, 0, full)
    return sorted(out, key=_set_order_key)


def enumerate_distance3_independent_sets(g: Graph, max_size: int) -> List[int]:
    """
    Non-empty vertex sets of size <= max_size whose members are pairwise at
    distance >= 3 (no edge and no common neighbour between any two of them).
    """
    if max_size < 1:
        raise ValueError(f"max_size must be at least 1, got {max_size}")
    close = [g.second_neighbourhood(v) for v in range(g.order)]
    out: List[int] = []

    def grow(current: int, size: int, allowed: int) -> None:
        if size:
            out.append(current)
        if size == max_size:
            return
        for v in iter_bits(allowed):
            later = allowed & ~((2 << v) - 1)
            grow(current | 1 << v, size + 1, later & ~close[v])

    grow(0, 0, g.vertex_mask)
    return sorted(out, key=_set_order_key)


def is_independent(g: Graph, s: int) -> bool:
    return all(not g.adj[v] & s for v in iter_bits(s))


def is_maximal_independent(g: Graph, s: int) -> bool:
    if not is_independent(g, s):
        return False
    outside = g.vertex_mask & ~s
    return all(g.adj[v] & s for v in iter_bits(outside))
