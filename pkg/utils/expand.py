"""
From mtf k-chromatic graphs to all k-chromatic graphs (edge removal), and the
heuristic hunt for non-vertex-critical graphs that lowers upper bounds.
"""
import logging
import random
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Iterable, Iterator, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from utils.canon import DedupStore, canonical_key
from utils.coloring import chromatic_number, is_k_colorable, is_vertex_critical
from utils.graph import Graph, is_mtf, is_triangle_free, mycielski
from utils.graph6 import graph6_encode
from utils.mtfgen import mtf_closure
from utils.sharding import shard_map

logger = logging.getLogger(__name__)


def _still_k_chromatic(g: Graph, k: int) -> bool:
    return is_k_colorable(g, k - 1) is None


# mtf completion adds edges, which can push chi above k
def _exactly_k_chromatic(g: Graph, k: int) -> bool:
    return _still_k_chromatic(g, k) and is_k_colorable(g, k) is not None


def _input_problem(g: Graph, k: int) -> Optional[str]:
    if not is_triangle_free(g):
        return "graph contains a triangle"
    chi = chromatic_number(g)
    if chi != k:
        return f"graph is not {k}-chromatic (chi={chi})"
    return None


def _edge_removal_closure(graphs: List[Graph], k: int) -> List[Graph]:
    seen = DedupStore()
    rejected = set()
    out = []
    stack = []
    for g in graphs:
        if seen.insert(g):
            stack.append(g)
    while stack:
        h = stack.pop()
        out.append(h)
        for u, v in h.edges():
            child = h.remove_edge(u, v)
            key = canonical_key(child)
            if key in seen or key in rejected:
                continue
            if _still_k_chromatic(child, k):
                seen.insert_key(key)
                stack.append(child)
            else:
                rejected.add(key)
    return out


def expand_by_edge_removal(mtf_set: Iterable[Graph], k: int, workers: int = 1) -> Iterator[Graph]:
    """
    All non-isomorphic k-chromatic spanning subgraphs of the inputs. Removing
    an edge never raises chi, so branches that drop below k are cut.
    """
    start = time.perf_counter()
    inputs = []
    skipped = 0
    for g in mtf_set:
        problem = _input_problem(g, k)
        if problem:
            skipped += 1
            logger.warning(f"Skipping {graph6_encode(g).decode('ascii')}: {problem}")
            continue
        inputs.append(g)
    store = DedupStore()
    for batch in shard_map(partial(_edge_removal_closure, k=k), inputs, workers):
        for g in batch:
            if store.insert(g):
                yield g
    logger.info(f"Edge removal (k={k}): {len(inputs)} inputs ({skipped} skipped) -> {len(store)} graphs "
                f"in {time.perf_counter() - start:.2f}s")


def _minimal_by_order(g: Graph, k: int, edges: List[Tuple[int, int]]) -> Graph:
    # an edge that cannot go now cannot go after further removals either
    for u, v in edges:
        child = g.remove_edge(u, v)
        if _still_k_chromatic(child, k):
            g = child
    return g


def critical_subgraphs(g: Graph, k: int, mode: str = "exact", samples: int = 16, seed: int = 0) -> List[Graph]:
    """
    Edge-minimal k-chromatic spanning subgraphs of g, up to isomorphism.
    exact enumerates every removal order; sampled runs greedy removal on
    `samples` random edge orders.
    """
    if mode == "exact":
        return [h for h in _edge_removal_closure([g], k)
                if not any(_still_k_chromatic(h.remove_edge(u, v), k) for u, v in h.edges())]
    if mode != "sampled":
        raise ValueError(f"mode must be 'exact' or 'sampled', got {mode}")
    rng = random.Random(seed)
    store = DedupStore()
    out = []
    for _ in range(samples):
        edges = g.edges()
        rng.shuffle(edges)
        h = _minimal_by_order(g, k, edges)
        if store.insert(h):
            out.append(h)
    return out


class HeuristicBudget(BaseModel):
    max_iterations: int = Field(default=10, ge=0)
    # stop once the harvest holds this many graphs
    harvest_quota: int = Field(default=1, ge=1)
    max_pool: int = Field(default=100000, ge=1)
    mode: Literal["exact", "sampled"] = "exact"
    samples: int = Field(default=16, ge=1)
    seed: int = 0


def heuristic_search(seeds: Iterable[Graph], k: int, budget: HeuristicBudget) -> Tuple[List[Graph], List[Graph]]:
    """
    Grow a pool of mtf k-chromatic graphs by taking critical subgraphs and
    completing them back to mtf graphs in all ways. Returns (pool, harvest),
    the harvest being the non-vertex-critical graphs met on the way.
    """
    pool = DedupStore()
    pool_graphs: List[Graph] = []
    for g in seeds:
        if not is_mtf(g) or _input_problem(g, k):
            logger.warning(f"Skipping seed {graph6_encode(g).decode('ascii')}: not an mtf {k}-chromatic graph")
            continue
        if pool.insert(g):
            pool_graphs.append(g)
    harvest = DedupStore()
    harvest_graphs: List[Graph] = []
    frontier = list(pool_graphs)

    for phase in range(1, budget.max_iterations + 1):
        added = []
        for g in frontier:
            for c in critical_subgraphs(g, k, budget.mode, budget.samples, budget.seed + phase):
                for h in mtf_closure(c):
                    if not _exactly_k_chromatic(h, k):
                        continue
                    if not is_vertex_critical(h, k, checked=True) and harvest.insert(h):
                        harvest_graphs.append(h)
                    if pool.insert(h):
                        added.append(h)
        pool_graphs.extend(added)
        logger.info(f"phase={phase} pool={len(pool_graphs)} new={len(added)} harvest={len(harvest_graphs)}")
        if not added or len(harvest_graphs) >= budget.harvest_quota or len(pool_graphs) >= budget.max_pool:
            break
        frontier = added
    return pool_graphs, harvest_graphs


def descend_order(g: Graph, k: int) -> Iterator[Graph]:
    """g - v for every vertex v whose removal keeps chi = k, up to isomorphism."""
    problem = _input_problem(g, k)
    if problem:
        raise ValueError(problem)
    found = False
    store = DedupStore()
    for v in range(g.order):
        h = g.remove_vertex(v)
        if _still_k_chromatic(h, k):
            found = True
            if store.insert(h):
                yield h
    if not found:
        raise ValueError("graph is vertex-critical, no vertex can be removed")


@dataclass
class DescentResult:
    order: int
    graphs: List[Graph]
    journal: List[str] = field(default_factory=list)


def heuristic_descent(seeds: Iterable[Graph], k: int, budget: HeuristicBudget,
                      target_order: Optional[int] = None) -> DescentResult:
    """
    Repeat: harvest non-vertex-critical graphs, delete a non-critical vertex,
    complete the results to mtf graphs one order lower. Stops at target_order
    or when a round harvests nothing.
    """
    current = list(seeds)
    if not current:
        raise ValueError("heuristic_descent needs at least one seed")
    result = DescentResult(order=current[0].order, graphs=current)
    while target_order is None or result.order > target_order:
        pool, harvest = heuristic_search(current, k, budget)
        line = f"order={result.order} pool={len(pool)} harvest={len(harvest)}"
        result.journal.append(line)
        logger.info(line)
        if not harvest:
            break
        lower = DedupStore()
        completed: List[Graph] = []
        for h in harvest:
            for child in descend_order(h, k):
                for m in mtf_closure(child):
                    if _exactly_k_chromatic(m, k) and lower.insert(m):
                        completed.append(m)
        if not completed:
            break
        current = completed
        result = DescentResult(order=result.order - 1, graphs=completed, journal=result.journal)
        line = f"descended to order={result.order} graphs={len(completed)}"
        result.journal.append(line)
        logger.info(line)
    return result


def mycielski_seeds(graphs: Iterable[Graph], k: int) -> Iterator[Graph]:
    """
    Seeds for a k-chromatic hunt from (k-1)-chromatic graphs: Mycielski images,
    completed to mtf graphs when they are not mtf already.
    """
    store = DedupStore()
    for g in graphs:
        problem = _input_problem(g, k - 1)
        if problem:
            logger.warning(f"Skipping {graph6_encode(g).decode('ascii')}: {problem}")
            continue
        image = mycielski(g)
        candidates = [image] if is_mtf(image) else (h for h in mtf_closure(image) if _exactly_k_chromatic(h, k))
        for h in candidates:
            if store.insert(h):
                yield h
