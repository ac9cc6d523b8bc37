import json
import logging

import pytest
from pydantic import ValidationError

from utils.classify import (
    CountReport,
    CountRow,
    GraphRecord,
    build_count_report,
    classify_graph,
    classify_stream,
    compare_reports,
    format_count,
    published_report,
    render_class_table,
    render_degree_table,
    report_to_jsonl,
)
from utils.graph import complete_graph, path_graph
from utils.pipeline import PipelineConfig, run


class TestClassifyGraph:
    def test_grotzsch(self, grotzsch):
        record = classify_graph(grotzsch, 4)
        assert record.order == 11
        assert record.chi == 4
        assert record.max_deg == 5
        assert record.min_deg == 3
        assert record.girth == 4
        assert record.is_mtf
        assert record.is_vertex_critical
        assert record.is_critical
        assert not record.is_regular
        assert record.aut_order == 10
        assert record.reed_holds
        assert record.graph == grotzsch

    def test_c5(self, c5):
        record = classify_graph(c5, 3)
        assert record.girth == 5
        assert record.is_regular
        assert record.graph6 == "Dhc"

    def test_twin(self, grotzsch_twin):
        record = classify_graph(grotzsch_twin, 4)
        assert record.is_mtf
        assert not record.is_vertex_critical
        assert not record.is_critical

    def test_errors(self, c5):
        with pytest.raises(ValueError, match="triangle"):
            classify_graph(complete_graph(3), 3)
        with pytest.raises(ValueError, match="chi=3"):
            classify_graph(c5, 4)

    def test_stream_skips(self, c5, caplog):
        with caplog.at_level(logging.WARNING):
            records = list(classify_stream([c5, path_graph(3), complete_graph(3)], 3))
        assert [r.graph6 for r in records] == ["Dhc"]
        assert caplog.text.count("Skipping") == 2

    def test_record_invariant(self, c5):
        data = classify_graph(c5, 3).model_dump()
        data["is_vertex_critical"] = False
        with pytest.raises(ValidationError):
            GraphRecord(**data)

    @pytest.mark.slow
    def test_regular_fixture(self, regular_24):
        record = classify_graph(regular_24, 5)
        assert record.is_regular
        assert record.max_deg == 7
        assert not record.is_critical


class TestCountTables:
    def test_row_invariants(self):
        with pytest.raises(ValidationError):
            CountRow(n=12, by_max_degree={4: 1}, total=2)
        with pytest.raises(ValidationError):
            CountRow(n=12, total=3, vertex_critical=1, critical=2)
        with pytest.raises(ValidationError):
            CountRow(n=12, total=1, mtf=2)

    @pytest.mark.parametrize("value, expected", [(0, "0"), (999, "999"), (1110, "1 110"), (6461386, "6 461 386"), (None, "-")])
    def test_format_count(self, value, expected):
        assert format_count(value) == expected

    def test_published(self):
        report = published_report(4)
        row = report.rows[13]
        assert row.total == 1110
        assert row.mtf == 25
        assert row.by_max_degree == {4: 12, 5: 814, 6: 272, 7: 12}
        assert row.regular is None
        assert published_report(5).rows[22].critical == 21

    def test_no_published_counts(self):
        with pytest.raises(ValueError):
            published_report(3)

    def test_compare(self):
        published = published_report(4)
        mine = published_report(4)
        assert compare_reports(mine, published) == []
        mine.rows[12].mtf = 4
        mine.rows[12].by_max_degree[6] = 2
        mine.rows[12].total = 23
        problems = compare_reports(mine, published)
        assert "n=12 mtf: 4 != 5" in problems
        assert "n=12 max degree 6: 2 != 3" in problems

    def test_build_merge_and_render(self, grotzsch, grotzsch_twin):
        a = build_count_report([classify_graph(grotzsch, 4)], k=4)
        b = build_count_report([classify_graph(grotzsch_twin, 4)], k=4)
        merged = a.merge(b)
        assert merged.rows[11].total == 1
        assert merged.rows[12].vertex_critical == 0
        assert merged.rows[12].mtf == 1
        degree_table = render_degree_table(merged).splitlines()
        assert degree_table[0].split() == ["n", "D=5", "total"]
        class_table = render_class_table(merged).splitlines()
        assert class_table[1].split() == ["11", "1", "1", "1", "1", "0"]

    def test_merge_with_published_drops_regular(self, grotzsch):
        merged = build_count_report([classify_graph(grotzsch, 4)], k=4).merge(published_report(4))
        assert merged.rows[11].total == 2
        assert merged.rows[11].regular is None

    def test_jsonl(self, grotzsch):
        report = build_count_report([classify_graph(grotzsch, 4)], k=4)
        lines = report_to_jsonl(report).splitlines()
        assert len(lines) == 1
        row = json.loads(lines[0])
        assert row["k"] == 4
        assert row["by_max_degree"] == {"5": 1}
        assert report_to_jsonl(CountReport()) == ""

    def test_order_twelve_matches_published(self):
        result = run(PipelineConfig(command="tables", k=4, n=12))
        assert result.exit_code == 0
        assert result.summary["mismatches"] == 0
        assert result.graph_count == 24

    @pytest.mark.slow
    def test_order_thirteen_matches_published(self):
        result = run(PipelineConfig(command="tables", k=4, n=13))
        assert result.summary["mismatches"] == 0
        assert result.graph_count == 1110
