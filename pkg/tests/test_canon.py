import itertools
import random

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from tests.conftest import atlas, from_networkx, random_graph, shuffled, to_networkx
from utils.canon import (
    DedupStore,
    are_isomorphic,
    automorphism_group_order,
    canonical_form,
    canonical_key,
    canonical_key_and_aut,
    canonical_labelling,
    dedup_insert,
)
from utils.graph import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    empty_graph,
    grotzsch_graph,
    path_graph,
    petersen_graph,
)


class TestCanonicalKey:
    @pytest.mark.parametrize("seed", range(5))
    def test_invariant_under_relabelling(self, grotzsch, seed):
        assert canonical_key(shuffled(grotzsch, seed)) == canonical_key(grotzsch)

    def test_petersen_relabellings(self):
        g = petersen_graph()
        keys = {canonical_key(shuffled(g, seed)) for seed in range(8)}
        assert len(keys) == 1

    def test_distinct_on_atlas(self):
        graphs = atlas(7)
        keys = {canonical_key(from_networkx(G)) for G in graphs}
        assert len(keys) == len(graphs)

    def test_canonical_form_is_isomorphic(self):
        for G in atlas(5):
            form = canonical_form(from_networkx(G))
            assert nx.is_isomorphic(to_networkx(form), G)

    def test_labelling_is_a_permutation(self, grotzsch):
        assert sorted(canonical_labelling(grotzsch)) == list(range(11))

    def test_order_zero(self):
        assert canonical_labelling(empty_graph(0)) == []
        assert canonical_key(empty_graph(0)) == b"?"

    def test_key_is_decodable_graph6(self, c5):
        from utils.graph6 import graph6_decode

        assert are_isomorphic(graph6_decode(canonical_key(c5)), c5)


def permutation_isomorphic(g, h) -> bool:
    """Try every bijection; only for small orders."""
    if g.order != h.order or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    target = set(h.edges())
    for perm in itertools.permutations(range(g.order)):
        if all((min(perm[u], perm[v]), max(perm[u], perm[v])) in target for u, v in g.edges()):
            return True
    return False


class TestCanonicalKeyOracle:
    @pytest.mark.parametrize("seed", range(12))
    def test_every_relabelling_gives_one_key(self, seed):
        rng = random.Random(seed)
        g = random_graph(rng.randint(1, 6), rng.random(), seed)
        key = canonical_key(g)
        assert all(canonical_key(g.relabel(perm)) == key for perm in itertools.permutations(range(g.order)))

    @pytest.mark.parametrize("n, m", [(6, 6), (7, 7), (8, 8), (8, 10)])
    def test_key_equality_matches_permutation_search(self, n, m):
        graphs = [from_networkx(nx.gnm_random_graph(n, m, seed=seed)) for seed in range(40)]
        graphs.sort(key=lambda g: sorted(g.degrees()))
        # pairs sharing a degree sequence are the ones the key has to tell apart
        pairs = [(g, h) for g, h in itertools.combinations(graphs, 2)
                 if sorted(g.degrees()) == sorted(h.degrees())][:60]
        assert pairs
        for g, h in pairs:
            assert (canonical_key(g) == canonical_key(h)) == permutation_isomorphic(g, h)

    @pytest.mark.slow
    def test_invariant_on_random_graphs(self):
        rng = random.Random(2024)
        for seed in range(10000):
            g = random_graph(rng.randint(1, 16), rng.random(), seed)
            assert canonical_key(shuffled(g, seed)) == canonical_key(g)


class TestAutomorphisms:
    @pytest.mark.parametrize(
        "g, expected",
        [
            (cycle_graph(5), 10),
            (petersen_graph(), 120),
            (complete_bipartite(3, 3), 72),
            (grotzsch_graph(), 10),
            (path_graph(4), 2),
            (empty_graph(4), 24),
            (complete_graph(4), 24),
            (empty_graph(1), 1),
        ],
    )
    def test_group_order(self, g, expected):
        assert automorphism_group_order(g) == expected

    def test_matches_vf2_count(self):
        for G in atlas(7):
            if G.number_of_nodes() == 0:
                continue
            expected = sum(1 for _ in GraphMatcher(G, G).isomorphisms_iter())
            assert automorphism_group_order(from_networkx(G)) == expected

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_vf2_count_order_eight(self, seed):
        g = random_graph(8, random.Random(seed).choice([0.2, 0.4, 0.6]), seed)
        G = to_networkx(g)
        assert automorphism_group_order(g) == sum(1 for _ in GraphMatcher(G, G).isomorphisms_iter())

    def test_key_and_aut_together(self, grotzsch):
        key, aut = canonical_key_and_aut(grotzsch)
        assert key == canonical_key(grotzsch)
        assert aut == 10


class TestIsomorphism:
    def test_are_isomorphic(self, c5):
        assert are_isomorphic(c5, c5.relabel([0, 2, 4, 1, 3]))
        assert not are_isomorphic(c5, path_graph(5))

    def test_same_degrees_different_graphs(self):
        # C6 and two triangles
        two_triangles = from_networkx(nx.disjoint_union(nx.cycle_graph(3), nx.cycle_graph(3)))
        assert not are_isomorphic(cycle_graph(6), two_triangles)


class TestDedupStore:
    def test_counts(self, c5):
        store = DedupStore()
        assert store.insert(c5)
        assert not store.insert(c5.relabel([0, 2, 4, 1, 3]))
        assert store.insert(path_graph(5))
        assert len(store) == 2
        assert store.accepted_count == 2
        assert store.rejected_count == 1

    def test_merge(self, c5, grotzsch):
        a = DedupStore()
        a.insert(c5)
        b = DedupStore()
        b.insert(c5)
        b.insert(grotzsch)
        assert a.merge(b) == 1
        assert len(a) == 2

    def test_keys_sorted_and_contains(self, c5, grotzsch):
        store = DedupStore()
        store.insert(grotzsch)
        store.insert(c5)
        assert store.keys() == sorted([canonical_key(c5), canonical_key(grotzsch)])
        assert canonical_key(c5) in store

    def test_dedup_insert(self, c5):
        store = DedupStore()
        assert dedup_insert(store, c5)
        assert not dedup_insert(store, c5.relabel([1, 2, 3, 4, 0]))

    def test_seeded_with_keys(self, c5):
        store = DedupStore([canonical_key(c5)])
        assert not store.insert(c5)
