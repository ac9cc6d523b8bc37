import logging

import pytest
from pydantic import ValidationError

from utils.canon import are_isomorphic, canonical_key
from utils.coloring import chromatic_number, is_vertex_critical
from utils.expand import (
    HeuristicBudget,
    critical_subgraphs,
    descend_order,
    expand_by_edge_removal,
    heuristic_descent,
    heuristic_search,
    mycielski_seeds,
)
from utils.graph import complete_graph, is_mtf, path_graph
from utils.mtfgen import generate_mtf_chromatic


class TestEdgeRemoval:
    def test_critical_graph_stays_alone(self, grotzsch):
        out = list(expand_by_edge_removal([grotzsch], 4))
        assert len(out) == 1
        assert are_isomorphic(out[0], grotzsch)

    def test_c5(self, c5):
        assert len(list(expand_by_edge_removal([c5], 3))) == 1

    def test_skips_bad_inputs(self, c5, caplog):
        with caplog.at_level(logging.WARNING):
            out = list(expand_by_edge_removal([complete_graph(3), path_graph(4), c5], 3))
        assert len(out) == 1
        assert caplog.text.count("Skipping") == 2

    def test_order_twelve_counts(self):
        mtf = list(generate_mtf_chromatic(12, 4))
        assert len(mtf) == 5
        out = list(expand_by_edge_removal(mtf, 4))
        assert len(out) == 24
        assert all(chromatic_number(g) == 4 for g in out)
        assert len({canonical_key(g) for g in out}) == 24

    def test_workers_do_not_change_output(self):
        mtf = list(generate_mtf_chromatic(12, 4))
        one = sorted(canonical_key(g) for g in expand_by_edge_removal(mtf, 4))
        two = sorted(canonical_key(g) for g in expand_by_edge_removal(mtf, 4, workers=2))
        assert one == two


class TestCriticalSubgraphs:
    def test_critical_graph_is_its_own(self, grotzsch):
        out = critical_subgraphs(grotzsch, 4)
        assert len(out) == 1
        assert are_isomorphic(out[0], grotzsch)

    def test_results_are_edge_minimal(self, grotzsch_twin):
        for h in critical_subgraphs(grotzsch_twin, 4):
            assert h.order == grotzsch_twin.order
            assert chromatic_number(h) == 4
            assert all(chromatic_number(h.remove_edge(u, v)) == 3 for u, v in h.edges())

    def test_sampled(self, grotzsch_twin):
        sampled = critical_subgraphs(grotzsch_twin, 4, mode="sampled", samples=4, seed=1)
        exact = {canonical_key(h) for h in critical_subgraphs(grotzsch_twin, 4)}
        assert sampled
        assert {canonical_key(h) for h in sampled} <= exact

    def test_unknown_mode(self, grotzsch):
        with pytest.raises(ValueError):
            critical_subgraphs(grotzsch, 4, mode="greedy")


class TestDescent:
    def test_isolated_vertex_is_removed(self, grotzsch):
        out = list(descend_order(grotzsch.add_vertex(0), 4))
        assert len(out) == 1
        assert are_isomorphic(out[0], grotzsch)

    def test_vertex_critical_input(self, grotzsch):
        with pytest.raises(ValueError):
            list(descend_order(grotzsch, 4))

    def test_wrong_chromatic_number(self, c5):
        with pytest.raises(ValueError):
            list(descend_order(c5, 4))


class TestHeuristic:
    def test_budget_validation(self):
        with pytest.raises(ValidationError):
            HeuristicBudget(max_iterations=-1)
        with pytest.raises(ValidationError):
            HeuristicBudget(mode="random")

    def test_zero_iterations(self, grotzsch):
        pool, harvest = heuristic_search([grotzsch], 4, HeuristicBudget(max_iterations=0))
        assert pool == [grotzsch]
        assert harvest == []

    def test_critical_seed_harvests_nothing(self, grotzsch):
        pool, harvest = heuristic_search([grotzsch], 4, HeuristicBudget())
        assert len(pool) == 1
        assert harvest == []

    def test_twin_seed_harvests(self, grotzsch_twin):
        pool, harvest = heuristic_search([grotzsch_twin], 4, HeuristicBudget())
        assert harvest
        assert all(is_mtf(h) and not is_vertex_critical(h, 4) for h in harvest)
        assert all(chromatic_number(h) == 4 for h in harvest)

    def test_seeds_that_are_not_mtf_are_skipped(self, grotzsch):
        pool, harvest = heuristic_search([grotzsch.add_vertex(0)], 4, HeuristicBudget())
        assert pool == []
        assert harvest == []

    def test_descent_reaches_grotzsch(self, grotzsch_twin, grotzsch):
        result = heuristic_descent([grotzsch_twin], 4, HeuristicBudget(), target_order=11)
        assert result.order == 11
        assert len(result.graphs) == 1
        assert are_isomorphic(result.graphs[0], grotzsch)
        assert result.journal[0].startswith("order=12")

    def test_descent_stops_without_harvest(self, grotzsch):
        result = heuristic_descent([grotzsch], 4, HeuristicBudget())
        assert result.order == 11
        assert result.journal == ["order=11 pool=1 harvest=0"]

    def test_descent_needs_seeds(self):
        with pytest.raises(ValueError):
            heuristic_descent([], 4, HeuristicBudget())


class TestMycielskiSeeds:
    def test_c5_gives_grotzsch(self, c5, grotzsch):
        out = list(mycielski_seeds([c5], 4))
        assert len(out) == 1
        assert are_isomorphic(out[0], grotzsch)

    def test_wrong_input_skipped(self, c5, caplog):
        with caplog.at_level(logging.WARNING):
            assert list(mycielski_seeds([c5], 3)) == []
        assert "not 2-chromatic" in caplog.text

    def test_edge_gives_pentagon(self, c5):
        out = list(mycielski_seeds([complete_graph(2)], 3))
        assert len(out) == 1
        assert are_isomorphic(out[0], c5)

    def test_completion_keeps_chromatic_number(self, grotzsch):
        # M(P5) sits inside the Grötzsch graph, which has chi = 4
        out = list(mycielski_seeds([path_graph(5)], 3))
        assert out
        assert all(chromatic_number(h) == 3 and is_mtf(h) for h in out)
        assert canonical_key(grotzsch) not in {canonical_key(h) for h in out}


class TestOrderTwelveHunt:
    def test_harvest_descends_to_grotzsch(self, grotzsch):
        seeds = list(generate_mtf_chromatic(12, 4))
        _, harvest = heuristic_search(seeds, 4, HeuristicBudget())
        assert harvest
        target = canonical_key(grotzsch)
        for h in harvest:
            assert {canonical_key(g) for g in descend_order(h, 4)} == {target}
