import logging

import pytest
from pydantic import ValidationError

from utils.canon import are_isomorphic, canonical_key
from utils.classify import published_report
from utils.gluing import AssignmentState
from utils.graph import complete_graph, delete_closed_neighbourhood, path_graph
from utils.extend import (
    CaseReport,
    Certificate,
    ExtensionSpec,
    KnownFacts,
    connect_indep_sets,
    extend_all,
    hosts_for,
    lower_bound_certificate,
)


def keys(graphs):
    return sorted(canonical_key(g) for g in graphs)


class TestExtensionSpec:
    def test_derived_fields(self):
        spec = ExtensionSpec(k=4, n=11, d=5)
        assert spec.host_order == 5
        assert spec.mtf_mode
        assert spec.host_max_degree == 4
        assert spec.host_class() == "(3,5,<=4)"

    def test_direct_and_girth5_modes(self):
        assert ExtensionSpec(k=4, n=11, d=5, maximal_sets_only=False).host_max_degree == 5
        spec = ExtensionSpec(k=3, n=5, d=2, girth_min=5)
        assert not spec.mtf_mode
        assert spec.host_min_girth == 5
        assert spec.host_class().endswith("girth>=5")

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"k": 1, "n": 5, "d": 2},
            {"k": 4, "n": 11, "d": 3},
            {"k": 4, "n": 11, "d": 5, "girth_min": 4},
            {"k": 4, "n": 200, "d": 5},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            ExtensionSpec(**kwargs)


class TestExtendAll:
    def test_grotzsch_from_c5(self, c5, grotzsch):
        out = list(extend_all(ExtensionSpec(k=4, n=11, d=5), [c5]))
        assert len(out) == 1
        g = out[0]
        assert are_isomorphic(g, grotzsch)
        assert delete_closed_neighbourhood(g, g.order - 1) == c5

    def test_hosts_for(self, c5):
        hosts = hosts_for(ExtensionSpec(k=4, n=11, d=5))
        assert keys(hosts) == keys([c5])

    def test_hosts_for_above_cap(self):
        with pytest.raises(ValueError):
            hosts_for(ExtensionSpec(k=4, n=20, d=5), cap=10)

    def test_bad_hosts_are_skipped(self, c5, caplog):
        with caplog.at_level(logging.WARNING):
            out = list(extend_all(ExtensionSpec(k=4, n=11, d=5), [path_graph(5), c5, complete_graph(3)]))
        assert len(out) == 1
        assert caplog.text.count("Skipping host") == 2

    def test_degree_above_order(self):
        assert list(extend_all(ExtensionSpec(k=4, n=5, d=5), [])) == []

    def test_no_four_chromatic_graph_on_ten_vertices(self, c5):
        assert list(extend_all(ExtensionSpec(k=4, n=10, d=4), [c5])) == []

    def test_pruning_does_not_change_output(self):
        spec = ExtensionSpec(k=4, n=12, d=5)
        hosts = hosts_for(spec)
        pruned = keys(extend_all(spec, hosts))
        unpruned = keys(extend_all(spec.model_copy(update={"prune_forbidden": False}), hosts))
        assert pruned == unpruned

    def test_vertex_critical_mode(self):
        spec = ExtensionSpec(k=4, n=12, d=5)
        hosts = hosts_for(spec)
        everything = list(extend_all(spec, hosts))
        from utils.coloring import is_vertex_critical

        expected = keys(g for g in everything if is_vertex_critical(g, 4))
        critical_only = keys(extend_all(spec.model_copy(update={"vertex_critical_only": True}), hosts))
        assert critical_only == expected

    def test_girth5_c5_from_edge(self, c5):
        out = list(extend_all(ExtensionSpec(k=3, n=5, d=2, girth_min=5), [complete_graph(2)]))
        assert keys(out) == keys([c5])

    def test_direct_mode(self, c5, grotzsch):
        out = list(extend_all(ExtensionSpec(k=4, n=11, d=5, maximal_sets_only=False), [c5]))
        assert keys(out) == keys([grotzsch])

    def test_workers_do_not_change_output(self):
        spec = ExtensionSpec(k=4, n=12, d=5)
        hosts = hosts_for(spec)
        assert keys(extend_all(spec, hosts, workers=8)) == keys(extend_all(spec, hosts))

    def test_connect_indep_sets(self, c5, grotzsch):
        spec = ExtensionSpec(k=4, n=11, d=5)
        out = list(connect_indep_sets(AssignmentState.start(c5, 5), spec))
        assert out
        assert all(are_isomorphic(g, grotzsch) for g in out)


class TestKnownFacts:
    def test_order_lower_bound(self):
        facts = KnownFacts()
        assert facts.order_lower_bound(4)[0] == 11
        assert facts.order_lower_bound(6)[0] == 23
        assert facts.order_lower_bound(5, girth_min=5)[0] == 22
        assert facts.order_lower_bound(1) == (1, "trivial")

    def test_with_count_report(self):
        facts = KnownFacts().with_count_report(published_report(5))
        assert facts.min_degree_at[5][22] == 7
        assert facts.min_degree_at[5][24] == 7
        assert KnownFacts().min_degree_at == {}


class TestCertificates:
    def test_no_four_chromatic_graph_on_ten_vertices(self):
        cert = lower_bound_certificate(4, 10)
        assert cert.verdict == "no-graph"
        assert [c.d for c in cert.cases] == [4, 5, 6, 7, 8, 9]
        assert all(c.closed for c in cert.cases)
        assert any(a.startswith("no (5,10)-graph") for a in cert.assumptions)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_no_four_chromatic_graph_up_to_ten(self, n):
        cert = lower_bound_certificate(4, n)
        assert cert.verdict == "no-graph"
        assert all(c.closed for c in cert.cases)

    @pytest.mark.parametrize("n, verdict", [(3, "no-graph"), (4, "no-graph"), (5, "exists"), (6, "exists")])
    def test_three_chromatic_starts_at_pentagon(self, n, verdict):
        assert lower_bound_certificate(3, n).verdict == verdict

    def test_worker_count_does_not_change_certificate(self):
        assert lower_bound_certificate(4, 10, workers=8).render() == lower_bound_certificate(4, 10).render()

    def test_grotzsch_order_has_a_witness(self):
        cert = lower_bound_certificate(4, 11)
        assert cert.verdict == "exists"
        witness = [c for c in cert.cases if c.verdict == "witness"]
        assert [c.d for c in witness] == [5]
        assert witness[0].count == 1

    def test_six_chromatic_uses_imported_facts(self):
        cert = lower_bound_certificate(6, 28, five_chrom_tables=published_report(5), host_cap=5)
        assert cert.verdict == "no-graph"
        assert any(a.startswith("imported") for a in cert.assumptions)
        assert {c.verdict for c in cert.cases} <= {"closed-empty-hosts", "closed-imported"}

    def test_girth5_left_open(self):
        cert = lower_bound_certificate(5, 27, girth_min=5, host_cap=5)
        assert cert.verdict == "undecided"
        open_cases = [c for c in cert.cases if c.verdict == "open"]
        assert [c.d for c in open_cases] == [5]

    def test_render(self):
        cert = lower_bound_certificate(4, 10)
        lines = cert.render().splitlines()
        assert lines[0] == "certificate k=4 n=10 girth_min=3 verdict=no-graph"
        assert lines[1].startswith("case d=4 hosts=(3,5,<=3) verdict=closed-exhaustive")

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            lower_bound_certificate(1, 5)

    def test_case_verdicts_are_checked(self):
        with pytest.raises(ValidationError):
            CaseReport(d=4, host_class="x", verdict="maybe")
        assert Certificate(k=4, n=5).verdict == "undecided"


class TestCrossMethod:
    @pytest.mark.slow
    def test_mtf_order_fourteen(self):
        from utils.coloring import min_max_degree
        from utils.mtfgen import generate_mtf_chromatic

        by_generation = keys(generate_mtf_chromatic(14, 4))
        by_extension = set()
        for d in range(min_max_degree(4), 14):
            spec = ExtensionSpec(k=4, n=14, d=d)
            by_extension.update(canonical_key(g) for g in extend_all(spec, hosts_for(spec)))
        assert len(by_generation) == 151
        assert by_generation == sorted(by_extension)
