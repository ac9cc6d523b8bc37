"""Exact vertex colouring: k-colourability, chromatic number and criticality tests."""
import logging
import math
import random
from typing import List, Optional

from utils.graph import Graph, is_triangle_free, iter_bits, popcount

logger = logging.getLogger(__name__)

# colour index per vertex, normalised to first-occurrence order
Coloring = List[int]


class VerificationError(RuntimeError):
    """An independent recomputation disagreed with a claimed result."""


def verify_coloring(g: Graph, coloring: Coloring, k: Optional[int] = None) -> bool:
    if len(coloring) != g.order:
        return False
    if k is not None and any(not 0 <= c < k for c in coloring):
        return False
    return all(coloring[u] != coloring[v] for u, v in g.edges())


def normalize_coloring(coloring: Coloring) -> Coloring:
    remap = {}
    for c in coloring:
        if c not in remap:
            remap[c] = len(remap)
    return [remap[c] for c in coloring]


def greedy_coloring(g: Graph) -> Coloring:
    """DSATUR greedy: most saturated uncoloured vertex first, ties by degree."""
    n = g.order
    colors = [-1] * n
    seen = [0] * n  # bitmask of neighbour colours
    uncolored = g.vertex_mask
    degrees = g.degrees()
    while uncolored:
        v = max(iter_bits(uncolored), key=lambda x: (popcount(seen[x]), degrees[x], -x))
        c = (~seen[v] & (seen[v] + 1)).bit_length() - 1
        colors[v] = c
        uncolored &= ~(1 << v)
        for u in iter_bits(g.adj[v] & uncolored):
            seen[u] |= 1 << c
    return normalize_coloring(colors)


def _peel(g: Graph, k: int) -> tuple:
    """Strip vertices of degree < k (in the remaining graph); they are coloured last."""
    core = g.vertex_mask
    peeled = []
    changed = True
    while changed:
        changed = False
        for v in iter_bits(core):
            if popcount(g.adj[v] & core) < k:
                core &= ~(1 << v)
                peeled.append(v)
                changed = True
    return core, peeled


def _color_core(g: Graph, core: int, k: int) -> Optional[List[int]]:
    """
    Backtracking with forward checking on the core. Vertex choice is smallest
    remaining domain, ties by most uncoloured neighbours; a new colour is only
    opened as the next unused index.
    """
    adj = g.adj
    colors = [-1] * g.order
    full = (1 << k) - 1
    domain = [full] * g.order

    def search(uncolored: int, used: int) -> bool:
        if not uncolored:
            return True
        opened = (1 << min(used + 1, k)) - 1
        best_v = -1
        best_key = None
        for v in iter_bits(uncolored):
            options = popcount(domain[v] & opened)
            if options == 0:
                return False
            key = (options, -popcount(adj[v] & uncolored))
            if best_key is None or key < best_key:
                best_key = key
                best_v = v
                if options == 1:
                    break
        v = best_v
        rest = uncolored & ~(1 << v)
        nbrs = adj[v] & rest
        for c in iter_bits(domain[v] & opened):
            bit = 1 << c
            touched = []
            dead = False
            for u in iter_bits(nbrs):
                if domain[u] & bit:
                    domain[u] &= ~bit
                    touched.append(u)
                    if not domain[u]:
                        dead = True
                        break
            if not dead:
                colors[v] = c
                if search(rest, max(used, c + 1)):
                    return True
                colors[v] = -1
            for u in touched:
                domain[u] |= bit
        return False

    if not search(core, 0):
        return None
    return colors


def is_k_colorable(g: Graph, k: int) -> Optional[Coloring]:
    """A verified proper k-colouring of g, or None when none exists."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if g.order == 0:
        return []
    if k == 1:
        return [0] * g.order if g.num_edges() == 0 else None
    core, peeled = _peel(g, k)
    colors = _color_core(g, core, k) if core else [-1] * g.order
    if colors is None:
        return None
    for v in reversed(peeled):
        taken = 0
        for u in iter_bits(g.adj[v]):
            if colors[u] >= 0:
                taken |= 1 << colors[u]
        colors[v] = (~taken & (taken + 1)).bit_length() - 1
    coloring = normalize_coloring(colors)
    if not verify_coloring(g, coloring, k):
        raise VerificationError("colouring search returned an improper witness")
    return coloring


def chromatic_number(g: Graph) -> int:
    if g.order == 0:
        return 0
    if g.num_edges() == 0:
        return 1
    best = max(greedy_coloring(g)) + 1
    lower = 2 if is_triangle_free(g) else 3
    k = best - 1
    while k >= lower and is_k_colorable(g, k) is not None:
        best = k
        k -= 1
    return best


def _require_chromatic(g: Graph, k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if is_k_colorable(g, k) is None or (k > 1 and is_k_colorable(g, k - 1) is not None):
        raise ValueError(f"graph is not {k}-chromatic (chi={chromatic_number(g)})")


def _vertex_critical(g: Graph, k: int) -> bool:
    for v in range(g.order):
        if is_k_colorable(g.remove_vertex(v), k - 1) is None:
            return False
    return True


def _edge_critical(g: Graph, k: int) -> bool:
    for u, v in g.edges():
        if is_k_colorable(g.remove_edge(u, v), k - 1) is None:
            return False
    return True


def is_vertex_critical(g: Graph, k: int, checked: bool = False) -> bool:
    """Every vertex deletion drops chi below k. Raises ValueError unless chi(g) == k."""
    if not checked:
        _require_chromatic(g, k)
    return _vertex_critical(g, k)


def is_critical(g: Graph, k: int, checked: bool = False) -> bool:
    """k-critical: vertex-critical and every edge deletion drops chi below k."""
    if not checked:
        _require_chromatic(g, k)
    return _vertex_critical(g, k) and _edge_critical(g, k)


def reed_check(g: Graph) -> bool:
    """chi <= ceil((Delta + 1 + omega) / 2) with omega = 2."""
    if not is_triangle_free(g):
        raise ValueError("reed_check only handles triangle-free graphs")
    return chromatic_number(g) <= math.ceil((g.max_degree() + 3) / 2)


def min_max_degree(k: int) -> int:
    """
    Smallest possible maximum degree of a triangle-free k-chromatic graph:
    Brooks' theorem (odd cycles for k = 3, K2 for k = 2) and Kostochka's
    chi <= 2*Delta/3 + 2 for triangle-free graphs.
    """
    if k <= 1:
        return 0
    if k == 2:
        return 1
    if k == 3:
        return 2
    return max(k, math.ceil(3 * (k - 2) / 2))


def verify_chromatic_number(g: Graph, k: int, restarts: int = 3, seed: int = 0) -> None:
    """
    Independent check that chi(g) == k: re-solve on random relabellings and
    check every witness by an edge scan. Raises VerificationError on disagreement.
    """
    rng = random.Random(seed)
    for attempt in range(restarts):
        perm = list(range(g.order))
        rng.shuffle(perm)
        h = g.relabel(perm)
        witness = is_k_colorable(h, k)
        if witness is None:
            raise VerificationError(f"restart {attempt}: no {k}-colouring found")
        back = [witness[perm[v]] for v in range(g.order)]
        if not verify_coloring(g, back, k):
            raise VerificationError(f"restart {attempt}: witness is not a proper colouring")
        if k > 1 and is_k_colorable(h, k - 1) is not None:
            raise VerificationError(f"restart {attempt}: graph is {k - 1}-colourable")
    logger.debug(f"chi={k} confirmed on {restarts} relabellings")
