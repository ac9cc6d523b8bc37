"""
Exhaustive generation of triangle-free and maximal triangle-free (mtf) graphs.

Fast path for mtf graphs: take a vertex v of maximum degree d. G - N[v] is a
triangle-free graph with maximum degree <= d-1 on n-d-1 vertices, and every
neighbour of v is joined to a maximal independent set of it. Gluing over all
such hosts and deduplicating by canonical key yields every mtf graph once.
"""
import logging
import time
from functools import lru_cache, partial
from typing import Iterator, List, Optional, Tuple

from utils.canon import DedupStore
from utils.coloring import is_k_colorable
from utils.gluing import AssignmentState, GluingRules, glue
from utils.graph import Graph, can_add_edge, empty_graph, is_mtf, is_triangle_free, popcount
from utils.mis import enumerate_distance3_independent_sets, enumerate_independent_sets, enumerate_maximal_independent_sets
from utils.sharding import shard_map

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _triangle_free_level(n: int, max_degree: Optional[int], girth5: bool) -> Tuple[Graph, ...]:
    if n == 0:
        return (empty_graph(0),)
    store = DedupStore()
    out: List[Graph] = []
    cap = n - 1 if max_degree is None else max_degree
    for h in _triangle_free_level(n - 1, max_degree, girth5):
        if girth5:
            choices = [0] + enumerate_distance3_independent_sets(h, max(cap, 1)) if h.order else [0]
        else:
            choices = enumerate_independent_sets(h, cap)
        degrees = h.degrees()
        for s in choices:
            if popcount(s) > cap:
                continue
            if max_degree is not None and any(s >> x & 1 and degrees[x] >= max_degree for x in range(h.order)):
                continue
            g = h.add_vertex(s)
            if store.insert(g):
                out.append(g)
    return tuple(out)


def generate_triangle_free(n: int, max_degree: Optional[int] = None, min_girth: int = 4) -> List[Graph]:
    """
    All non-isomorphic triangle-free graphs of order n, optionally with
    maximum degree <= max_degree and girth >= 5. Built one vertex at a time:
    both restrictions are closed under vertex deletion.
    """
    if min_girth not in (4, 5):
        raise ValueError(f"min_girth must be 4 (triangle-free) or 5, got {min_girth}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return list(_triangle_free_level(n, max_degree, min_girth == 5))


def _mtf_accept(g: Graph, d: int, min_degree: int) -> bool:
    return g.max_degree() == d and g.min_degree() >= min_degree and is_mtf(g)


def _mtf_units(n: int, min_degree: int) -> List[Tuple[int, Graph]]:
    units = []
    for d in range(max(1, min_degree), n):
        m = n - d - 1
        # every host vertex sits in a set of size <= d-1 glued to one of d neighbours
        if m > d * (d - 1):
            continue
        for host in generate_triangle_free(m, max_degree=d - 1):
            units.append((d, host))
    return units


def _glue_mtf_units(units: List[Tuple[int, Graph]], min_degree: int) -> List[Graph]:
    out = []
    store = DedupStore()
    for d, host in units:
        index = enumerate_maximal_independent_sets(host, max(d - 1, 1))
        rules = GluingRules(
            d=d,
            candidates=index.by_size,
            accept=partial(_mtf_accept, d=d, min_degree=min_degree),
            cover_host=True,
            min_set_size=max(0, min_degree - 1) if host.order else 0,
        )
        for g in glue(AssignmentState.start(host, d), rules):
            if store.insert(g):
                out.append(g)
    return out


def generate_mtf(n: int, min_degree: int = 2, workers: int = 1) -> Iterator[Graph]:
    """
    One representative per isomorphism class of mtf graphs of order n with
    minimum degree >= min_degree. Stars are the only mtf graphs with minimum
    degree 1, so the default of 2 leaves them out.
    """
    if not 1 <= n <= 128:
        raise ValueError(f"n must be between 1 and 128, got {n}")
    start = time.perf_counter()
    if n == 1:
        if min_degree <= 0:
            yield empty_graph(1)
        return
    units = _mtf_units(n, min_degree)
    store = DedupStore()
    emitted = 0
    for batch in shard_map(partial(_glue_mtf_units, min_degree=min_degree), units, workers):
        for g in batch:
            if store.insert(g):
                emitted += 1
                yield g
    logger.info(f"mtf n={n} min_degree={min_degree}: {emitted} graphs from {len(units)} hosts "
                f"in {time.perf_counter() - start:.2f}s")


def generate_mtf_bruteforce(n: int, min_degree: int = 2) -> Iterator[Graph]:
    """Oracle mode: every triangle-free graph of order n, filtered to mtf."""
    for g in generate_triangle_free(n):
        if g.min_degree() >= min_degree and is_mtf(g):
            yield g


def generate_mtf_chromatic(n: int, k: int, min_degree: int = 2, workers: int = 1) -> Iterator[Graph]:
    """mtf graphs of order n with chromatic number exactly k."""
    for g in generate_mtf(n, min_degree=min_degree, workers=workers):
        if is_k_colorable(g, k) is not None and (k == 1 or is_k_colorable(g, k - 1) is None):
            yield g


def _blockable(h: Graph, a: int, b: int, open_edges: set) -> bool:
    """Can a later insertion still give a and b a common neighbour?"""
    for c in range(h.order):
        if c == a or c == b:
            continue
        ok_a = h.has_edge(a, c) or (min(a, c), max(a, c)) in open_edges
        ok_b = h.has_edge(b, c) or (min(b, c), max(b, c)) in open_edges
        if ok_a and ok_b:
            return True
    return False


def mtf_closure(g: Graph) -> Iterator[Graph]:
    """
    Every mtf graph (up to isomorphism) on the vertex set of g containing g.
    Non-edges are decided in lexicographic order (insert or skip); a skipped
    non-edge must be closed into a triangle by the end.
    """
    if not is_triangle_free(g):
        raise ValueError("mtf_closure needs a triangle-free graph")
    order = g.non_edges()
    store = DedupStore()

    def walk(h: Graph, idx: int, skipped: Tuple[Tuple[int, int], ...]) -> Iterator[Graph]:
        while idx < len(order) and not can_add_edge(h, *order[idx]):
            idx += 1
        if idx == len(order):
            if all(not can_add_edge(h, a, b) for a, b in skipped) and store.insert(h):
                yield h
            return
        a, b = order[idx]
        yield from walk(h.add_edge(a, b), idx + 1, skipped)
        open_edges = {e for e in order[idx + 1:] if can_add_edge(h, *e)}
        if _blockable(h, a, b, open_edges):
            if all(not can_add_edge(h, x, y) or _blockable(h, x, y, open_edges) for x, y in skipped):
                yield from walk(h, idx + 1, skipped + ((a, b),))

    yield from walk(g, 0, ())
