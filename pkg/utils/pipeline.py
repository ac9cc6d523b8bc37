"""
Pipeline runs shared by the command line and the job API.

A run is described by a PipelineConfig. Graph outputs are written as
canonical graph6 lines sorted by canonical key, so the same config yields
the same file for any worker count.
"""
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, TextIO

from pydantic import BaseModel, Field, field_validator, model_validator
from tqdm import tqdm

from utils.canon import DedupStore, canonical_key
from utils.classify import (
    build_count_report,
    classify_stream,
    compare_reports,
    published_report,
    render_class_table,
    render_degree_table,
)
from utils.coloring import VerificationError, min_max_degree, verify_chromatic_number
from utils.expand import HeuristicBudget, descend_order, expand_by_edge_removal, heuristic_descent, heuristic_search, mycielski_seeds
from utils.extend import DEFAULT_HOST_CAP, ExtensionSpec, extend_all, hosts_for, lower_bound_certificate
from utils.graph import Graph, is_triangle_free
from utils.graph6 import load_fixture, read_graph6_file
from utils.mtfgen import generate_mtf, generate_mtf_chromatic

logger = logging.getLogger(__name__)

FIXTURES_DIR = Path(__file__).parent.parent / "fixtures"

# name -> (file, chromatic number, regular degree or None)
BUNDLED_FIXTURES = {
    "regular_5chrom_24": ("regular_5chrom_24.txt", 5, 7),
    "tf_6chrom_40": ("tf_6chrom_40.txt", 6, None),
}

Command = Literal[
    "gen-mtf", "extend", "expand", "classify", "mycielski", "heuristic", "certify-lower-bound",
    "verify", "canon", "tables", "cross-check", "descend",
]

REQUIRED = {
    "gen-mtf": ("n",),
    "extend": ("k", "n", "d"),
    "expand": ("k", "input_path"),
    "classify": ("k", "input_path"),
    "mycielski": ("k", "input_path"),
    "heuristic": ("k", "input_path"),
    "certify-lower-bound": ("k", "n"),
    "verify": (),
    "canon": ("input_path",),
    "tables": ("k", "n"),
    "cross-check": ("k", "n"),
    "descend": ("k", "input_path"),
}


class PipelineConfig(BaseModel):
    command: Command
    k: Optional[int] = Field(default=None, ge=2)
    n: Optional[int] = Field(default=None, ge=1, le=128)
    # last order of a tables run (defaults to n)
    n_max: Optional[int] = Field(default=None, ge=1, le=128)
    d: Optional[int] = Field(default=None, ge=1)
    girth_min: int = 3
    min_degree: int = Field(default=2, ge=0)
    vertex_critical_only: bool = False
    maximal_sets_only: bool = True
    # cross-check the full (k, n) sets instead of the mtf ones
    full_sets: bool = False
    workers: int = Field(default=1, ge=1)
    seed: int = 0
    host_cap: int = Field(default=DEFAULT_HOST_CAP, ge=0)
    budget: HeuristicBudget = Field(default_factory=HeuristicBudget)
    target_order: Optional[int] = Field(default=None, ge=1)
    # bundled fixtures to check; default: all of them unless an input file is given
    fixtures: Optional[List[str]] = None
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    report_path: Optional[str] = None

    @field_validator("girth_min")
    @classmethod
    def validate_girth(cls, v: int) -> int:
        if v not in (3, 5):
            raise ValueError("girth_min must be 3 or 5")
        return v

    @field_validator("fixtures")
    @classmethod
    def validate_fixtures(cls, v: Optional[List[str]]) -> Optional[List[str]]:
        unknown = [name for name in v or [] if name not in BUNDLED_FIXTURES]
        if unknown:
            raise ValueError(f"Unknown fixtures: {', '.join(unknown)}")
        return v

    @model_validator(mode="after")
    def check_command(self) -> "PipelineConfig":
        missing = [name for name in REQUIRED[self.command] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.command} needs {', '.join(missing)}")
        if self.command == "extend":
            self.extension_spec()
        if self.n_max is not None and self.n is not None and self.n_max < self.n:
            raise ValueError("n_max must be at least n")
        # one seed drives all randomness
        self.budget = self.budget.model_copy(update={"seed": self.seed})
        return self

    def extension_spec(self, d: Optional[int] = None) -> ExtensionSpec:
        return ExtensionSpec(
            k=self.k,
            n=self.n,
            d=self.d if d is None else d,
            girth_min=self.girth_min,
            vertex_critical_only=self.vertex_critical_only,
            maximal_sets_only=self.maximal_sets_only,
        )


class RunResult(BaseModel):
    command: str
    exit_code: int = 0
    graph_count: int = 0
    output_path: Optional[str] = None
    report_path: Optional[str] = None
    report: str = ""
    summary: Dict[str, Any] = Field(default_factory=dict)
    elapsed_seconds: float = 0.0


def _read_input(config: PipelineConfig) -> List[Graph]:
    path = Path(config.input_path)
    if not path.exists():
        raise FileNotFoundError(f"Input file not found: {path}")
    graphs = read_graph6_file(path)
    logger.info(f"Read {len(graphs)} graphs from {path}")
    return graphs


def _progress(graphs: Iterable[Graph], desc: str, enabled: bool) -> Iterable[Graph]:
    return tqdm(graphs, desc=desc, unit="graph", file=sys.stderr, disable=not enabled)


def _collect(graphs: Iterable[Graph]) -> List[bytes]:
    """Canonical graph6 of each class, sorted."""
    store = DedupStore()
    for g in graphs:
        store.insert_key(canonical_key(g))
    return store.keys()


def _write_graphs(keys: List[bytes], config: PipelineConfig, out: TextIO) -> None:
    if config.output_path:
        path = Path(config.output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(b"".join(key + b"\n" for key in keys))
        logger.info(f"Wrote {len(keys)} graphs to {path}")
    else:
        for key in keys:
            out.write(key.decode("ascii") + "\n")


def _all_k_chromatic(n: int, k: int, workers: int, progress: bool) -> List[Graph]:
    mtf = list(generate_mtf_chromatic(n, k, min_degree=2, workers=workers))
    return list(_progress(expand_by_edge_removal(mtf, k, workers=workers), f"expand n={n}", progress))


def _verify_graph(name: str, g: Graph, chi: int, regular_degree: Optional[int], seed: int) -> str:
    if not is_triangle_free(g):
        raise VerificationError(f"{name}: contains a triangle")
    if regular_degree is not None and set(g.degrees()) != {regular_degree}:
        raise VerificationError(f"{name}: not {regular_degree}-regular")
    verify_chromatic_number(g, chi, seed=seed)
    return f"fixture={name} order={g.order} edges={g.num_edges()} max_degree={g.max_degree()} chi={chi} ok"


def _run_verify(config: PipelineConfig) -> Dict[str, Any]:
    lines = []
    names = config.fixtures
    if names is None:
        names = [] if config.input_path else sorted(BUNDLED_FIXTURES)
    for name in names:
        filename, chi, regular = BUNDLED_FIXTURES[name]
        g = load_fixture(FIXTURES_DIR / filename)
        lines.append(_verify_graph(name, g, chi, regular, config.seed))
        logger.info(lines[-1])
    if config.input_path and config.k:
        for i, g in enumerate(_read_input(config)):
            lines.append(_verify_graph(f"input[{i}]", g, config.k, None, config.seed))
    return {"report": "\n".join(lines) + "\n", "verified": len(lines)}


def _run_tables(config: PipelineConfig, progress: bool) -> Dict[str, Any]:
    k = config.k
    records = []
    for n in range(config.n, (config.n_max or config.n) + 1):
        records.extend(classify_stream(_all_k_chromatic(n, k, config.workers, progress), k))
    report = build_count_report(records, k=k)
    text = render_degree_table(report) + "\n" + render_class_table(report)
    problems: List[str] = []
    try:
        problems = compare_reports(report, published_report(k))
    except ValueError:
        logger.info(f"No published counts for k={k}, skipping comparison")
    if problems:
        text += "\nmismatches against published counts:\n" + "\n".join(problems) + "\n"
    graphs = [r.graph for r in records]
    return {"report": text, "graphs": graphs, "mismatches": len(problems), "counts": report.model_dump(mode="json")}


def _run_cross_check(config: PipelineConfig, progress: bool) -> Dict[str, Any]:
    """
    Two independent routes to the same graph set, compared by canonical key:
    mtf generation filtered on chi against mtf-mode extension over every d.
    With full_sets the full (k, n) set (expansion of the mtf graphs) is
    compared against direct extension instead.
    """
    k, n = config.k, config.n
    if config.full_sets:
        by_generation = set(_collect(_all_k_chromatic(n, k, config.workers, progress)))
    else:
        by_generation = set(_collect(_progress(
            generate_mtf_chromatic(n, k, workers=config.workers), "mtf", progress)))
    by_extension = DedupStore()
    for d in range(min_max_degree(k), n):
        spec = ExtensionSpec(k=k, n=n, d=d, maximal_sets_only=not config.full_sets)
        for g in extend_all(spec, hosts_for(spec, cap=config.host_cap), workers=config.workers):
            by_extension.insert(g)
    ext_keys = set(by_extension.keys())
    only_gen = len(by_generation - ext_keys)
    only_ext = len(ext_keys - by_generation)
    scope = "full" if config.full_sets else "mtf"
    report = (f"cross-check k={k} n={n} sets={scope} mtf_method={len(by_generation)} "
              f"extension_method={len(ext_keys)} only_mtf={only_gen} only_extension={only_ext}\n")
    return {"report": report, "keys": sorted(by_generation), "mismatches": only_gen + only_ext}


def _run_descend(graphs: List[Graph], k: int) -> List[Graph]:
    out = []
    for g in graphs:
        try:
            out.extend(descend_order(g, k))
        except ValueError as e:
            logger.warning(f"Skipping descent: {e}")
    return out


def run(config: PipelineConfig, progress: bool = False, out: Optional[TextIO] = None) -> RunResult:
    """Execute one pipeline command. Raises VerificationError when a check fails."""
    out = out or sys.stdout
    start = time.perf_counter()
    result = RunResult(command=config.command, output_path=config.output_path, report_path=config.report_path)
    logger.info(f"Running {config.command} with {config.model_dump(exclude_none=True, exclude={'budget', 'fixtures'})}")
    keys: Optional[List[bytes]] = None
    cmd = config.command

    if cmd == "gen-mtf":
        if config.k is None:
            graphs = generate_mtf(config.n, min_degree=config.min_degree, workers=config.workers)
        else:
            graphs = generate_mtf_chromatic(config.n, config.k, min_degree=config.min_degree, workers=config.workers)
        keys = _collect(_progress(graphs, "mtf", progress))
    elif cmd == "extend":
        spec = config.extension_spec()
        hosts = _read_input(config) if config.input_path else hosts_for(spec, cap=config.host_cap)
        keys = _collect(_progress(extend_all(spec, hosts, workers=config.workers), "extend", progress))
    elif cmd == "expand":
        keys = _collect(_progress(expand_by_edge_removal(_read_input(config), config.k, workers=config.workers),
                                  "expand", progress))
    elif cmd == "classify":
        records = list(classify_stream(_read_input(config), config.k))
        report = build_count_report(records, k=config.k)
        result.report = render_degree_table(report) + "\n" + render_class_table(report)
        result.summary["counts"] = report.model_dump(mode="json")
        if config.output_path:
            Path(config.output_path).write_text("".join(r.model_dump_json() + "\n" for r in records))
        result.graph_count = len(records)
    elif cmd == "mycielski":
        keys = _collect(mycielski_seeds(_read_input(config), config.k))
    elif cmd == "heuristic":
        seeds = _read_input(config)
        if config.target_order is not None:
            descent = heuristic_descent(seeds, config.k, config.budget, config.target_order)
            keys = _collect(descent.graphs)
            result.report = "\n".join(descent.journal) + "\n"
            result.summary["reached_order"] = descent.order
        else:
            pool, harvest = heuristic_search(seeds, config.k, config.budget)
            keys = _collect(harvest)
            result.report = f"pool={len(pool)} harvest={len(harvest)}\n"
            result.summary["pool"] = len(pool)
    elif cmd == "certify-lower-bound":
        cert = lower_bound_certificate(config.k, config.n, five_chrom_tables=published_report(5),
                                       girth_min=config.girth_min, host_cap=config.host_cap, workers=config.workers)
        result.report = cert.render()
        result.summary["verdict"] = cert.verdict
    elif cmd == "verify":
        data = _run_verify(config)
        result.report = data["report"]
        result.summary["verified"] = data["verified"]
    elif cmd == "canon":
        keys = _collect(_read_input(config))
    elif cmd == "tables":
        data = _run_tables(config, progress)
        keys = _collect(data["graphs"])
        result.report = data["report"]
        result.summary["counts"] = data["counts"]
        result.summary["mismatches"] = data["mismatches"]
        if data["mismatches"]:
            result.exit_code = 1
    elif cmd == "cross-check":
        data = _run_cross_check(config, progress)
        keys = data["keys"]
        result.report = data["report"]
        result.summary["mismatches"] = data["mismatches"]
        if data["mismatches"]:
            result.exit_code = 1
    elif cmd == "descend":
        keys = _collect(_run_descend(_read_input(config), config.k))

    if keys is not None:
        _write_graphs(keys, config, out)
        result.graph_count = len(keys)
    if config.report_path and result.report:
        path = Path(config.report_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(result.report)
    result.elapsed_seconds = round(time.perf_counter() - start, 3)
    logger.info(f"{cmd} finished: {result.graph_count} graphs, exit code {result.exit_code}, "
                f"{result.elapsed_seconds:.2f}s")
    return result

