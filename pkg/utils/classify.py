"""Per-graph classification and count tables laid out like the published ones."""
import json
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional

from pydantic import BaseModel, Field, model_validator

from utils.canon import automorphism_group_order
from utils.coloring import chromatic_number, is_critical, is_vertex_critical
from utils.graph import Graph, girth, is_mtf, is_triangle_free
from utils.graph6 import graph6_decode, graph6_encode

logger = logging.getLogger(__name__)

TABLES_PATH = Path(__file__).parent.parent / "fixtures" / "tables.json"


class GraphRecord(BaseModel):
    graph6: str
    order: int
    chi: int
    max_deg: int
    min_deg: int
    # None for forests
    girth: Optional[int] = None
    is_mtf: bool
    is_vertex_critical: bool
    is_critical: bool
    is_regular: bool
    aut_order: int = Field(..., ge=1)
    reed_holds: bool

    @model_validator(mode="after")
    def critical_implies_vertex_critical(self) -> "GraphRecord":
        if self.is_critical and not self.is_vertex_critical:
            raise ValueError("critical graph recorded as not vertex-critical")
        return self

    @property
    def graph(self) -> Graph:
        return graph6_decode(self.graph6)


def classify_graph(g: Graph, k: int) -> GraphRecord:
    """Full record for a triangle-free k-chromatic graph. Raises ValueError otherwise."""
    if not is_triangle_free(g):
        raise ValueError("graph contains a triangle")
    chi = chromatic_number(g)
    if chi != k:
        raise ValueError(f"graph is not {k}-chromatic (chi={chi})")
    vertex_critical = is_vertex_critical(g, k, checked=True)
    critical = vertex_critical and is_critical(g, k, checked=True)
    g_len = girth(g)
    max_deg = g.max_degree()
    return GraphRecord(
        graph6=graph6_encode(g).decode("ascii"),
        order=g.order,
        chi=chi,
        max_deg=max_deg,
        min_deg=g.min_degree(),
        girth=None if g_len == math.inf else int(g_len),
        is_mtf=is_mtf(g),
        is_vertex_critical=vertex_critical,
        is_critical=critical,
        is_regular=g.is_regular(),
        aut_order=automorphism_group_order(g),
        reed_holds=chi <= math.ceil((max_deg + 3) / 2),
    )


def classify_stream(graphs: Iterable[Graph], k: int) -> Iterator[GraphRecord]:
    """Classify each graph; inputs that are not triangle-free k-chromatic are logged and skipped."""
    done = 0
    skipped = 0
    for g in graphs:
        try:
            record = classify_graph(g, k)
        except ValueError as e:
            skipped += 1
            logger.warning(f"Skipping {graph6_encode(g).decode('ascii')}: {e}")
            continue
        done += 1
        yield record
    logger.info(f"Classified {done} graphs (k={k}), skipped {skipped}")


# --- count tables ---


class CountRow(BaseModel):
    n: int
    by_max_degree: Dict[int, int] = Field(default_factory=dict)
    total: int = 0
    vertex_critical: int = 0
    critical: int = 0
    mtf: int = 0
    # the published tables do not list regular graphs
    regular: Optional[int] = 0

    @model_validator(mode="after")
    def consistent(self) -> "CountRow":
        if self.by_max_degree and sum(self.by_max_degree.values()) != self.total:
            raise ValueError(f"row n={self.n}: total {self.total} != sum of degree columns")
        if self.critical > self.vertex_critical:
            raise ValueError(f"row n={self.n}: more critical than vertex-critical graphs")
        if self.mtf > self.total:
            raise ValueError(f"row n={self.n}: more mtf graphs than graphs")
        return self

    def add(self, record: GraphRecord) -> None:
        self.by_max_degree[record.max_deg] = self.by_max_degree.get(record.max_deg, 0) + 1
        self.total += 1
        self.vertex_critical += record.is_vertex_critical
        self.critical += record.is_critical
        self.mtf += record.is_mtf
        self.regular = (self.regular or 0) + record.is_regular

    def min_max_degree(self) -> Optional[int]:
        present = [d for d, c in self.by_max_degree.items() if c > 0]
        return min(present) if present else None


class CountReport(BaseModel):
    k: Optional[int] = None
    rows: Dict[int, CountRow] = Field(default_factory=dict)

    def add(self, record: GraphRecord) -> None:
        row = self.rows.get(record.order)
        if row is None:
            row = self.rows[record.order] = CountRow(n=record.order)
        row.add(record)

    def merge(self, other: "CountReport") -> "CountReport":
        merged = CountReport(k=self.k if self.k is not None else other.k)
        for report in (self, other):
            for n, row in report.rows.items():
                target = merged.rows.setdefault(n, CountRow(n=n))
                for d, c in row.by_max_degree.items():
                    target.by_max_degree[d] = target.by_max_degree.get(d, 0) + c
                target.total += row.total
                target.vertex_critical += row.vertex_critical
                target.critical += row.critical
                target.mtf += row.mtf
                if target.regular is not None and row.regular is not None:
                    target.regular += row.regular
                else:
                    target.regular = None
        return merged

    def to_jsonl(self) -> str:
        lines = []
        for n in sorted(self.rows):
            row = self.rows[n].model_dump()
            row["k"] = self.k
            row["by_max_degree"] = {str(d): c for d, c in sorted(self.rows[n].by_max_degree.items())}
            lines.append(json.dumps(row, sort_keys=True))
        return "\n".join(lines) + ("\n" if lines else "")


def build_count_report(records: Iterable[GraphRecord], k: Optional[int] = None) -> CountReport:
    report = CountReport(k=k)
    for record in records:
        report.add(record)
    return report


def format_count(value: Optional[int]) -> str:
    """Thousands grouped by spaces, as in the published tables."""
    if value is None:
        return "-"
    return f"{value:,}".replace(",", " ")


def render_degree_table(report: CountReport) -> str:
    degrees = sorted({d for row in report.rows.values() for d in row.by_max_degree})
    header = ["n"] + [f"D={d}" for d in degrees] + ["total"]
    body = []
    for n in sorted(report.rows):
        row = report.rows[n]
        body.append([str(n)] + [format_count(row.by_max_degree.get(d, 0)) for d in degrees] + [format_count(row.total)])
    return _align([header] + body)


def render_class_table(report: CountReport) -> str:
    header = ["n", "all", "vertex-crit", "crit", "mtf", "regular"]
    body = []
    for n in sorted(report.rows):
        row = report.rows[n]
        body.append([str(n), format_count(row.total), format_count(row.vertex_critical),
                     format_count(row.critical), format_count(row.mtf), format_count(row.regular)])
    return _align([header] + body)


def _align(table: List[List[str]]) -> str:
    widths = [max(len(r[i]) for r in table) for i in range(len(table[0]))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(r, widths)) for r in table) + "\n"


def published_report(k: int) -> CountReport:
    """Counts from the published tables (k = 4: n = 11..15, k = 5: n = 22..24)."""
    data = json.loads(TABLES_PATH.read_text())
    rows = data.get(str(k))
    if rows is None:
        raise ValueError(f"No published counts for k={k}")
    report = CountReport(k=k)
    for row in rows:
        report.rows[row["n"]] = CountRow(
            n=row["n"],
            by_max_degree={int(d): c for d, c in row["by_max_degree"].items()},
            total=row["total"],
            vertex_critical=row["vertex_critical"],
            critical=row["critical"],
            mtf=row["mtf"],
            regular=None,
        )
    return report


def compare_reports(ours: CountReport, published: CountReport) -> List[str]:
    """Mismatching cells for the orders present in both reports."""
    problems = []
    for n in sorted(set(ours.rows) & set(published.rows)):
        mine, theirs = ours.rows[n], published.rows[n]
        for name in ("total", "vertex_critical", "critical", "mtf"):
            if getattr(mine, name) != getattr(theirs, name):
                problems.append(f"n={n} {name}: {getattr(mine, name)} != {getattr(theirs, name)}")
        for d in sorted(set(mine.by_max_degree) | set(theirs.by_max_degree)):
            a, b = mine.by_max_degree.get(d, 0), theirs.by_max_degree.get(d, 0)
            if a != b:
                problems.append(f"n={n} max degree {d}: {a} != {b}")
    return problems


def report_to_jsonl(report: CountReport) -> str:
    """One JSON object per row, keys sorted."""
    return report.to_jsonl()
