import random
from pathlib import Path

import networkx as nx
import pytest

from utils.graph import Graph, can_add_edge, cycle_graph, empty_graph, grotzsch_graph
from utils.graph6 import load_fixture

FIXTURES = Path(__file__).parent.parent / "fixtures"


def from_networkx(G: nx.Graph) -> Graph:
    nodes = sorted(G.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), [(index[u], index[v]) for u, v in G.edges()])


def to_networkx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(g.order))
    G.add_edges_from(g.edges())
    return G


def shuffled(g: Graph, seed: int) -> Graph:
    perm = list(range(g.order))
    random.Random(seed).shuffle(perm)
    return g.relabel(perm)


def atlas(max_order: int):
    """All graphs with at most max_order vertices (networkx atlas, up to 7)."""
    return [G for G in nx.graph_atlas_g() if G.number_of_nodes() <= max_order]


def random_graph(n: int, p: float, seed: int) -> Graph:
    G = nx.gnp_random_graph(n, p, seed=seed)
    return from_networkx(G)


def random_triangle_free(n: int, seed: int, fill: float = 1.0) -> Graph:
    """Random edge insertions that keep the graph triangle-free; fill=1.0 ends in an mtf graph."""
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pairs)
    g = empty_graph(n)
    for u, v in pairs[: round(len(pairs) * fill)]:
        if can_add_edge(g, u, v):
            g = g.add_edge(u, v)
    return g


@pytest.fixture
def c5() -> Graph:
    return cycle_graph(5)


@pytest.fixture
def grotzsch() -> Graph:
    return grotzsch_graph()


@pytest.fixture
def grotzsch_twin() -> Graph:
    """Grotzsch graph plus a non-adjacent copy of vertex 0: mtf, 4-chromatic, not vertex-critical."""
    g = grotzsch_graph()
    return g.add_vertex(g.adj[0])


@pytest.fixture(scope="session")
def regular_24() -> Graph:
    return load_fixture(FIXTURES / "regular_5chrom_24.txt")


@pytest.fixture(scope="session")
def tf_40() -> Graph:
    return load_fixture(FIXTURES / "tf_6chrom_40.txt")
