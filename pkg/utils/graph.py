"""Compact undirected graphs stored as per-vertex adjacency bitsets (Python ints)."""
import math
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

MAX_ORDER = 128


def popcount(x: int) -> int:
    return x.bit_count()


def iter_bits(x: int) -> Iterator[int]:
    """Yield the indices of the set bits of x in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def bits_to_list(x: int) -> List[int]:
    return list(iter_bits(x))


def list_to_bits(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class Graph:
    """
    Simple undirected graph on vertices 0..order-1.

    adj[v] is the neighbourhood N(v) as a bitset. Instances are immutable;
    every mutating helper returns a new Graph.
    """

    __slots__ = ("order", "adj")

    def __init__(self, order: int, adj: Sequence[int], check: bool = True):
        if order < 0 or order > MAX_ORDER:
            raise ValueError(f"Graph order must be between 0 and {MAX_ORDER}, got {order}")
        if len(adj) != order:
            raise ValueError(f"Expected {order} adjacency rows, got {len(adj)}")
        self.order = order
        self.adj: Tuple[int, ...] = tuple(adj)
        if check:
            self._validate()

    def _validate(self) -> None:
        full = (1 << self.order) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"Vertex {v} has neighbours outside 0..{self.order - 1}")
            if row >> v & 1:
                raise ValueError(f"Loop at vertex {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"Adjacency is not symmetric for edge {v}-{u}")

    # --- construction ---

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        adj = [0] * order
        for u, v in edges:
            if u == v:
                raise ValueError(f"Loop at vertex {u}")
            if not (0 <= u < order and 0 <= v < order):
                raise ValueError(f"Edge {u}-{v} out of range for order {order}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(order, adj, check=False)

    # --- basic structure ---

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.order == other.order and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.order, self.adj))

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, edges={self.num_edges()})"

    def __len__(self) -> int:
        return self.order

    @property
    def vertex_mask(self) -> int:
        return (1 << self.order) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbours(self, v: int) -> List[int]:
        return bits_to_list(self.adj[v])

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degrees(self) -> List[int]:
        return [popcount(row) for row in self.adj]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> List[Tuple[int, int]]:
        """Edges (u, v) with u < v, in lexicographic order."""
        out = []
        for u, row in enumerate(self.adj):
            for v in iter_bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def non_edges(self) -> List[Tuple[int, int]]:
        out = []
        for u in range(self.order):
            missing = ~self.adj[u] & self.vertex_mask
            for v in iter_bits(missing >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    # --- derived graphs ---

    def add_edge(self, u: int, v: int) -> "Graph":
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph(self.order, adj, check=False)

    def remove_edge(self, u: int, v: int) -> "Graph":
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph(self.order, adj, check=False)

    def induced_subgraph(self, keep: int) -> "Graph":
        """Subgraph induced by the vertex bitset keep, relabelled 0..m-1 in increasing order."""
        kept = bits_to_list(keep)
        position = {v: i for i, v in enumerate(kept)}
        adj = []
        for v in kept:
            row = 0
            for u in iter_bits(self.adj[v] & keep):
                row |= 1 << position[u]
            adj.append(row)
        return Graph(len(kept), adj, check=False)

    def remove_vertex(self, v: int) -> "Graph":
        return self.induced_subgraph(self.vertex_mask & ~(1 << v))

    def add_vertex(self, neighbours: int) -> "Graph":
        """Append a new vertex (index order) joined to the bitset neighbours."""
        n = self.order
        adj = [row | ((neighbours >> v & 1) << n) for v, row in enumerate(self.adj)]
        adj.append(neighbours)
        return Graph(n + 1, adj, check=False)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex v renamed perm[v]."""
        adj = [0] * self.order
        for v, row in enumerate(self.adj):
            new_row = 0
            for u in iter_bits(row):
                new_row |= 1 << perm[u]
            adj[perm[v]] = new_row
        return Graph(self.order, adj, check=False)

    def complement(self) -> "Graph":
        full = self.vertex_mask
        return Graph(self.order, [~row & full & ~(1 << v) for v, row in enumerate(self.adj)], check=False)

    def distances_from(self, source: int) -> List[Optional[int]]:
        """BFS distances from source; None for unreachable vertices."""
        dist: List[Optional[int]] = [None] * self.order
        dist[source] = 0
        seen = 1 << source
        frontier = 1 << source
        level = 0
        while frontier:
            level += 1
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= self.adj[v]
            nxt &= ~seen
            for v in iter_bits(nxt):
                dist[v] = level
            seen |= nxt
            frontier = nxt
        return dist

    def diameter(self) -> float:
        """Largest distance between two vertices; math.inf when disconnected."""
        best = 0
        for v in range(self.order):
            for d in self.distances_from(v):
                if d is None:
                    return math.inf
                best = max(best, d)
        return best

    def second_neighbourhood(self, v: int) -> int:
        """Bitset of vertices at distance exactly 1 or 2 from v."""
        reach = self.adj[v]
        for u in iter_bits(self.adj[v]):
            reach |= self.adj[u]
        return reach & ~(1 << v)


# --- predicates ---


def is_triangle_free(g: Graph) -> bool:
    for u, v in g.edges():
        if g.adj[u] & g.adj[v]:
            return False
    return True


def girth(g: Graph) -> float:
    """Length of a shortest cycle, math.inf for forests. BFS from every vertex."""
    best = math.inf
    for root in range(g.order):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        for v in queue:
            if 2 * dist[v] + 1 >= best:
                break
            for u in iter_bits(g.adj[v]):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def is_mtf(g: Graph) -> bool:
    """
    Maximal triangle-free: triangle-free and every non-adjacent pair has a
    common neighbour, i.e. inserting any missing edge closes a triangle.
    For n >= 3 this is triangle-free with diameter at most 2.
    """
    if not is_triangle_free(g):
        return False
    for u, v in g.non_edges():
        if not g.adj[u] & g.adj[v]:
            return False
    return True


def can_add_edge(g: Graph, u: int, v: int) -> bool:
    """True if u-v is a non-edge whose insertion keeps g triangle-free."""
    return u != v and not g.has_edge(u, v) and not g.adj[u] & g.adj[v]


# --- constructions ---


def delete_closed_neighbourhood(g: Graph, v: int) -> Graph:
    """G minus N(v) and v, remaining vertices relabelled preserving order."""
    if not 0 <= v < g.order:
        raise ValueError(f"Vertex {v} out of range for order {g.order}")
    return g.induced_subgraph(g.vertex_mask & ~(g.adj[v] | 1 << v))


def mycielski(g: Graph) -> Graph:
    """
    Mycielski construction: originals 0..n-1, shadow i+n joined to N(i),
    apex 2n joined to every shadow.
    """
    n = g.order
    if 2 * n + 1 > 128:
        raise ValueError(f"Mycielski image of an order-{n} graph exceeds 128 vertices")
    edges = list(g.edges())
    for i in range(n):
        for u in iter_bits(g.adj[i]):
            edges.append((i + n, u))
        edges.append((i + n, 2 * n))
    return Graph.from_edges(2 * n + 1, edges)


def empty_graph(n: int) -> Graph:
    return Graph(n, [0] * n, check=False)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, [full & ~(1 << v) for v in range(n)], check=False)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("A cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star(n: int) -> Graph:
    """K_{1,n}; the centre is vertex 0."""
    return complete_bipartite(1, n)


def grotzsch_graph() -> Graph:
    return mycielski(cycle_graph(5))


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)
