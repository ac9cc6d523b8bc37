"""
Canonical labelling, automorphism group order and isomorphism-rejecting dedup.

The search is individualisation-refinement: the vertex partition is refined
to an equitable one, the first smallest non-singleton cell is individualised
vertex by vertex, and the leaves (discrete partitions) are compared by their
relabelled adjacency rows. The canonical form is the smallest leaf encoding.
Automorphisms found on the way prune equivalent branches, and the group order
is the product of the first-path stabiliser orbit lengths.
"""
import threading
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from utils.graph import Graph, iter_bits, list_to_bits
from utils.graph6 import graph6_encode

CanonicalKey = bytes


def refine(adj: Sequence[int], cells: List[List[int]]) -> List[List[int]]:
    """Refine an ordered partition until it is equitable. Split order depends only on invariants."""
    while True:
        masks = [list_to_bits(c) for c in cells]
        changed = False
        out: List[List[int]] = []
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: Dict[Tuple[int, ...], List[int]] = {}
            for v in cell:
                row = adj[v]
                sig = tuple((row & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                out.append(cell)
                continue
            changed = True
            for sig in sorted(groups):
                out.append(groups[sig])
        cells = out
        if not changed:
            return cells


def _orbits(n: int, generators: Iterable[Tuple[int, ...]]) -> List[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for gamma in generators:
        for v in range(n):
            a, b = find(v), find(gamma[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(v) for v in range(n)]


class _CanonSearch:
    def __init__(self, g: Graph):
        self.adj = g.adj
        self.n = g.order
        self.first: Optional[Tuple[Tuple[int, ...], List[int], List[int]]] = None
        self.best: Optional[Tuple[Tuple[int, ...], List[int], List[int]]] = None
        self.generators: List[Tuple[int, ...]] = []
        self.aut_order = 1

    def _code(self, lab: List[int]) -> Tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(lab):
            pos[v] = i
        rows = []
        for v in lab:
            row = 0
            for u in iter_bits(self.adj[v]):
                row |= 1 << pos[u]
            rows.append(row)
        return tuple(rows)

    def _automorphism(self, ref_lab: List[int], lab: List[int]) -> None:
        gamma = [0] * self.n
        for a, b in zip(ref_lab, lab):
            gamma[a] = b
        self.generators.append(tuple(gamma))

    @staticmethod
    def _common_prefix(a: List[int], b: List[int]) -> int:
        i = 0
        while i < len(a) and i < len(b) and a[i] == b[i]:
            i += 1
        return i

    def _leaf(self, cells: List[List[int]], path: List[int]) -> Optional[int]:
        lab = [c[0] for c in cells]
        code = self._code(lab)
        if self.first is None:
            self.first = self.best = (code, lab, list(path))
            return None
        if code == self.first[0]:
            self._automorphism(self.first[1], lab)
            return self._common_prefix(self.first[2], path)
        if code < self.best[0]:
            self.best = (code, lab, list(path))
            return None
        if code == self.best[0]:
            self._automorphism(self.best[1], lab)
            return self._common_prefix(self.best[2], path)
        return None

    def _stabiliser_orbits(self, path: List[int]) -> List[int]:
        gens = [g for g in self.generators if all(g[p] == p for p in path)]
        return _orbits(self.n, gens)

    def search(self, cells: List[List[int]], path: List[int], first_path: bool) -> Optional[int]:
        """DFS; returns the depth to abort to when an automorphism made this subtree redundant."""
        target = None
        for i, c in enumerate(cells):
            if len(c) > 1 and (target is None or len(c) < len(cells[target])):
                target = i
        if target is None:
            return self._leaf(cells, path)
        depth = len(path)
        cell = sorted(cells[target])
        explored: List[int] = []
        for w in cell:
            if explored:
                orbit = self._stabiliser_orbits(path)
                if any(orbit[w] == orbit[x] for x in explored):
                    continue
            child = cells[:target] + [[w], [x for x in cells[target] if x != w]] + cells[target + 1:]
            child = refine(self.adj, child)
            abort = self.search(child, path + [w], first_path and not explored)
            explored.append(w)
            if abort is not None and abort < depth:
                return abort
        if first_path:
            orbit = self._stabiliser_orbits(path)
            v0 = cell[0]
            self.aut_order *= sum(1 for x in cell if orbit[x] == orbit[v0])
        return None

    def run(self) -> "_CanonSearch":
        if self.n:
            self.search(refine(self.adj, [list(range(self.n))]), [], True)
        return self


def canonical_labelling(g: Graph) -> List[int]:
    """perm with perm[v] = canonical index of v."""
    search = _CanonSearch(g).run()
    if search.best is None:
        return []
    perm = [0] * g.order
    for i, v in enumerate(search.best[1]):
        perm[v] = i
    return perm


def canonical_form(g: Graph) -> Graph:
    return g.relabel(canonical_labelling(g))


def canonical_key(g: Graph) -> CanonicalKey:
    """graph6 of the canonically relabelled graph; equal exactly for isomorphic graphs."""
    return graph6_encode(canonical_form(g))


def automorphism_group_order(g: Graph) -> int:
    return _CanonSearch(g).run().aut_order


def canonical_key_and_aut(g: Graph) -> Tuple[CanonicalKey, int]:
    search = _CanonSearch(g).run()
    perm = [0] * g.order
    if search.best is not None:
        for i, v in enumerate(search.best[1]):
            perm[v] = i
    return graph6_encode(g.relabel(perm)), search.aut_order


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.order != h.order or g.num_edges() != h.num_edges():
        return False
    if sorted(g.degrees()) != sorted(h.degrees()):
        return False
    return canonical_key(g) == canonical_key(h)


class DedupStore:
    """
    Set of canonical keys with accept/reject counters. insert is thread-safe;
    per-worker stores combine with merge() into the same set as a single run.
    """

    def __init__(self, keys: Iterable[CanonicalKey] = ()):
        self._seen: Set[CanonicalKey] = set()
        self._lock = threading.Lock()
        self.accepted_count = 0
        self.rejected_count = 0
        for key in keys:
            self.insert_key(key)

    def insert_key(self, key: CanonicalKey) -> bool:
        with self._lock:
            if key in self._seen:
                self.rejected_count += 1
                return False
            self._seen.add(key)
            self.accepted_count += 1
            return True

    def insert(self, g: Graph) -> bool:
        return self.insert_key(canonical_key(g))

    def merge(self, other: "DedupStore") -> int:
        """Absorb another store; returns how many of its keys were new."""
        added = 0
        for key in other.keys():
            if self.insert_key(key):
                added += 1
        return added

    def keys(self) -> List[CanonicalKey]:
        with self._lock:
            return sorted(self._seen)

    def __contains__(self, key: object) -> bool:
        return key in self._seen

    def __len__(self) -> int:
        return len(self._seen)


def dedup_insert(store: DedupStore, g: Graph) -> bool:
    return store.insert(g)
