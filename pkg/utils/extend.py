"""
Maximum-degree extension: build every (k, n, d)-graph from the graphs that
remain after deleting a vertex of maximum degree and its neighbourhood.

A triangle-free graph G with a vertex v of degree d = Delta(G) leaves
H = G - N[v] on n-d-1 vertices with chi(H) >= k-1. For maximal triangle-free
G every neighbour of v sees a maximal independent set of H and H has maximum
degree <= d-1. Certificates chain these observations over all feasible d.
"""
import logging
import time
from functools import partial
from typing import Dict, Iterable, Iterator, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from utils.canon import DedupStore
from utils.classify import CountReport
from utils.coloring import chromatic_number, is_k_colorable, is_vertex_critical, min_max_degree
from utils.gluing import AssignmentState, GluingRules, glue, group_by_size
from utils.graph import Graph, girth, is_mtf, is_triangle_free
from utils.graph6 import graph6_encode
from utils.mis import enumerate_distance3_independent_sets, enumerate_independent_sets, enumerate_maximal_independent_sets
from utils.mtfgen import generate_mtf, generate_triangle_free
from utils.sharding import shard_map

logger = logging.getLogger(__name__)

DEFAULT_HOST_CAP = 10


class ExtensionSpec(BaseModel):
    k: int = Field(..., ge=2)
    n: int = Field(..., ge=1, le=128)
    d: int = Field(..., ge=1)
    girth_min: int = 3
    vertex_critical_only: bool = False
    # False: attach neighbours to all independent sets, output need not be mtf
    maximal_sets_only: bool = True
    prune_forbidden: bool = True

    @field_validator("girth_min")
    @classmethod
    def validate_girth(cls, v: int) -> int:
        if v not in (3, 5):
            raise ValueError("girth_min must be 3 (triangle-free) or 5")
        return v

    @model_validator(mode="after")
    def validate_degree(self) -> "ExtensionSpec":
        bound = min_max_degree(self.k)
        if self.d < bound:
            raise ValueError(f"d={self.d} is below the minimum maximum degree {bound} of a "
                             f"triangle-free {self.k}-chromatic graph")
        return self

    @property
    def host_order(self) -> int:
        return self.n - self.d - 1

    @property
    def mtf_mode(self) -> bool:
        return self.girth_min == 3 and self.maximal_sets_only

    @property
    def host_max_degree(self) -> int:
        return self.d - 1 if self.mtf_mode else self.d

    @property
    def host_min_girth(self) -> int:
        return 5 if self.girth_min == 5 else 4

    def host_class(self) -> str:
        label = f"({self.k - 1},{self.host_order},<={self.host_max_degree})"
        return label + (" girth>=5" if self.girth_min == 5 else "")


def _host_problem(host: Graph, spec: ExtensionSpec) -> Optional[str]:
    if host.order != spec.host_order:
        return f"order {host.order} != {spec.host_order}"
    if not is_triangle_free(host):
        return "host contains a triangle"
    if spec.girth_min == 5 and girth(host) < 5:
        return "host girth below 5"
    if host.max_degree() > spec.host_max_degree:
        return f"max degree {host.max_degree()} > {spec.host_max_degree}"
    chi = chromatic_number(host)
    # only stars come from the empty host
    if chi != spec.k - 1 and not (host.order == 0 and spec.k == 2):
        return f"host chi={chi}, expected {spec.k - 1}"
    return None


def _candidate_sets(host: Graph, spec: ExtensionSpec) -> Dict[int, List[int]]:
    max_size = max(spec.d - 1, 1)
    if spec.girth_min == 5:
        sets = [0] + (enumerate_distance3_independent_sets(host, max_size) if host.order else [])
        return group_by_size(sets, spec.d - 1)
    if spec.maximal_sets_only:
        return enumerate_maximal_independent_sets(host, max_size).by_size
    return group_by_size(enumerate_independent_sets(host, spec.d - 1), spec.d - 1)


def _accept(g: Graph, spec: ExtensionSpec) -> bool:
    if g.max_degree() != spec.d:
        return False
    if spec.girth_min == 5:
        if girth(g) < 5:
            return False
    elif not is_triangle_free(g) or (spec.maximal_sets_only and not is_mtf(g)):
        return False
    if spec.vertex_critical_only and g.min_degree() < spec.k - 1:
        return False
    if is_k_colorable(g, spec.k - 1) is not None or is_k_colorable(g, spec.k) is None:
        return False
    return not spec.vertex_critical_only or is_vertex_critical(g, spec.k, checked=True)


def connect_indep_sets(state: AssignmentState, spec: ExtensionSpec) -> Iterator[Graph]:
    """Glue d neighbours of a new vertex onto state.host and yield the accepted graphs."""
    rules = GluingRules(
        d=spec.d,
        candidates=_candidate_sets(state.host, spec),
        accept=partial(_accept, spec=spec),
        distinct=spec.vertex_critical_only,
        disjoint=spec.girth_min == 5,
        cover_host=spec.mtf_mode,
        min_set_size=spec.k - 2 if spec.vertex_critical_only else 0,
        prune_forbidden=spec.prune_forbidden,
    )
    yield from glue(state, rules)


def _extend_hosts(hosts: List[Graph], spec: ExtensionSpec) -> List[Graph]:
    store = DedupStore()
    out = []
    for host in hosts:
        found = 0
        for g in connect_indep_sets(AssignmentState.start(host, spec.d), spec):
            if store.insert(g):
                out.append(g)
                found += 1
        logger.debug(f"host {graph6_encode(host).decode('ascii')}: {found} new graphs")
    return out


def extend_all(spec: ExtensionSpec, hosts: Iterable[Graph], workers: int = 1) -> Iterator[Graph]:
    """
    Every non-isomorphic (k, n, d)-graph whose core G - N[v] is one of hosts.
    Hosts failing their precondition are logged and skipped.
    """
    start = time.perf_counter()
    if spec.host_order < 0:
        logger.info(f"extend k={spec.k} n={spec.n} d={spec.d}: d > n-1, nothing to do")
        return
    valid = []
    skipped = 0
    for host in hosts:
        problem = _host_problem(host, spec)
        if problem:
            skipped += 1
            logger.warning(f"Skipping host {graph6_encode(host).decode('ascii')}: {problem}")
            continue
        valid.append(host)
    store = DedupStore()
    for batch in shard_map(partial(_extend_hosts, spec=spec), valid, workers):
        for g in batch:
            if store.insert(g):
                yield g
    logger.info(f"extend k={spec.k} n={spec.n} d={spec.d} girth>={spec.girth_min}: {len(store)} graphs "
                f"from {len(valid)} hosts ({skipped} skipped) in {time.perf_counter() - start:.2f}s")


def _chromatic_class(m: int, k: int, max_degree: Optional[int], min_girth: int) -> List[Graph]:
    if m < 0:
        return []
    out = []
    for h in generate_triangle_free(m, max_degree=max_degree, min_girth=min_girth):
        if chromatic_number(h) == k or (m == 0 and k <= 1):
            out.append(h)
    return out


def hosts_for(spec: ExtensionSpec, cap: int = DEFAULT_HOST_CAP) -> List[Graph]:
    """The full host class of spec, generated when its order is at most cap."""
    m = spec.host_order
    if m > cap:
        raise ValueError(f"host order {m} exceeds the generation cap {cap}")
    return _chromatic_class(m, spec.k - 1, spec.host_max_degree, spec.host_min_girth)


# --- certificates ---


class KnownFacts(BaseModel):
    """Published facts a certificate may import, each with its provenance."""
    smallest_order: Dict[int, int] = Field(default_factory=lambda: {2: 2, 3: 5, 4: 11, 5: 22})
    smallest_order_girth5: Dict[int, int] = Field(default_factory=lambda: {2: 2, 3: 5, 4: 21})
    # k -> n -> smallest maximum degree among (k, n)-graphs
    min_degree_at: Dict[int, Dict[int, int]] = Field(default_factory=dict)
    provenance: Dict[str, str] = Field(default_factory=lambda: {
        "smallest_order": "published smallest orders of triangle-free k-chromatic graphs",
        "smallest_order_girth5": "published smallest orders of k-chromatic graphs of girth >= 5",
        "min_degree_at": "bundled count tables",
    })

    def with_count_report(self, report: CountReport) -> "KnownFacts":
        if report.k is None:
            raise ValueError("count report has no chromatic number")
        facts = self.model_copy(deep=True)
        per_n = facts.min_degree_at.setdefault(report.k, {})
        for n, row in report.rows.items():
            low = row.min_max_degree()
            if low is not None:
                per_n[n] = low
        return facts

    def order_lower_bound(self, k: int, girth_min: int = 3) -> Tuple[int, str]:
        """
        Smallest order a (k, n)-graph can have, using chi(G - v) >= chi(G) - 1
        to carry known values upward.
        """
        table = self.smallest_order_girth5 if girth_min == 5 else self.smallest_order
        if k <= 1:
            return 1, "trivial"
        if k in table:
            return table[k], f"imported: smallest order for k={k} is {table[k]}"
        known = [j for j in table if j < k]
        if not known:
            return k, "trivial"
        j = max(known)
        return table[j] + (k - j), f"imported: smallest order for k={j} is {table[j]}, plus one per colour"


class CaseReport(BaseModel):
    d: int
    host_class: str
    verdict: str
    count: int = 0
    reason: str = ""
    # closure only holds for maximal triangle-free graphs
    needs_mtf: bool = False

    @field_validator("verdict")
    @classmethod
    def validate_verdict(cls, v: str) -> str:
        allowed = {"closed-empty-hosts", "closed-exhaustive", "closed-imported", "closed-degree-bound", "witness", "open"}
        if v not in allowed:
            raise ValueError(f"unknown case verdict {v}")
        return v

    @property
    def closed(self) -> bool:
        return self.verdict.startswith("closed")

    def render(self) -> str:
        return (f"case d={self.d} hosts={self.host_class} verdict={self.verdict} "
                f"count={self.count} reason={self.reason}")


class Certificate(BaseModel):
    k: int
    n: int
    girth_min: int = 3
    verdict: str = "undecided"
    cases: List[CaseReport] = Field(default_factory=list)
    assumptions: List[str] = Field(default_factory=list)

    def render(self) -> str:
        lines = [f"certificate k={self.k} n={self.n} girth_min={self.girth_min} verdict={self.verdict}"]
        lines += [case.render() for case in self.cases]
        lines += [f"assumption {a}" for a in self.assumptions]
        return "\n".join(lines) + "\n"


class _Prover:
    def __init__(self, k: int, n: int, girth_min: int, facts: KnownFacts, host_cap: int, workers: int):
        self.k = k
        self.n = n
        self.girth_min = girth_min
        self.facts = facts
        self.host_cap = host_cap
        self.workers = workers
        self.min_girth = 5 if girth_min == 5 else 4
        self.imported: List[str] = []
        self._absent: Dict[Tuple[int, int], Optional[str]] = {}

    def _import(self, fact: str) -> None:
        if fact not in self.imported:
            self.imported.append(fact)

    def no_graphs(self, k: int, m: int) -> Optional[str]:
        """Why no (k, m)-graph exists in this regime, or None if that is not known."""
        if (k, m) not in self._absent:
            self._absent[(k, m)] = self._no_graphs(k, m)
        return self._absent[(k, m)]

    def _no_graphs(self, k: int, m: int) -> Optional[str]:
        if m < 0:
            return "negative order"
        if m <= self.host_cap:
            if self.girth_min == 5:
                found = any(chromatic_number(g) >= k for g in generate_triangle_free(m, min_girth=5))
            else:
                # chi is maximised over triangle-free graphs by the mtf ones
                found = m >= 1 and any(is_k_colorable(g, k - 1) is None for g in generate_mtf(m, min_degree=0))
            return None if found else f"computed: no ({k},{m})-graph"
        low, source = self.facts.order_lower_bound(k, self.girth_min)
        if m < low:
            self._import(source)
            return source
        return None

    def degree_too_small(self, k: int, m: int, cap: int) -> Optional[Tuple[str, str]]:
        low = min_max_degree(k)
        if low > cap:
            return "closed-degree-bound", f"({k},{m})-graphs have max degree >= {low}"
        imported = self.facts.min_degree_at.get(k, {}).get(m)
        if imported is not None and imported > cap:
            source = f"imported: ({k},{m})-graphs have max degree >= {imported} ({self.facts.provenance['min_degree_at']})"
            self._import(source)
            return "closed-imported", source
        return None

    def case(self, d: int) -> CaseReport:
        k, m = self.k, self.n - d - 1
        spec = ExtensionSpec(k=k, n=self.n, d=d, girth_min=self.girth_min)
        label = spec.host_class()
        side = self.no_graphs(k, m)
        if side is None:
            return CaseReport(d=d, host_class=label, verdict="open",
                              reason=f"cannot exclude a {k}-chromatic core of order {m}")

        # cap d holds for any graph, cap d-1 only for mtf graphs
        general = self.degree_too_small(k - 1, m, d)
        if general:
            return CaseReport(d=d, host_class=label, verdict=general[0], reason=general[1])
        if spec.mtf_mode:
            mtf_only = self.degree_too_small(k - 1, m, d - 1)
            if mtf_only:
                return CaseReport(d=d, host_class=label, verdict=mtf_only[0], reason=mtf_only[1], needs_mtf=True)

        if m <= self.host_cap:
            if not _chromatic_class(m, k - 1, d, self.min_girth):
                return CaseReport(d=d, host_class=label, verdict="closed-empty-hosts", reason=f"no ({k - 1},{m})-hosts")
            hosts = hosts_for(spec, cap=self.host_cap)
            if not hosts:
                return CaseReport(d=d, host_class=label, verdict="closed-empty-hosts",
                                  reason="no hosts with the mtf degree cap", needs_mtf=True)
            found = sum(1 for _ in extend_all(spec, hosts, workers=self.workers))
            if found:
                return CaseReport(d=d, host_class=label, verdict="witness", count=found,
                                  reason=f"{found} graphs from {len(hosts)} hosts")
            return CaseReport(d=d, host_class=label, verdict="closed-exhaustive", count=len(hosts),
                              reason=f"{len(hosts)} hosts, no extension", needs_mtf=spec.mtf_mode)

        absent = self.no_graphs(k - 1, m)
        if absent:
            return CaseReport(d=d, host_class=label, verdict="closed-imported", reason=absent)
        return CaseReport(d=d, host_class=label, verdict="open", reason=f"host order {m} above cap {self.host_cap}")


def lower_bound_certificate(k: int, n: int, five_chrom_tables: Optional[CountReport] = None,
                            girth_min: int = 3, facts: Optional[KnownFacts] = None,
                            host_cap: int = DEFAULT_HOST_CAP, workers: int = 1) -> Certificate:
    """
    Case analysis over the maximum degree d of a hypothetical (k, n)-graph.
    The verdict is no-graph only when every case is closed; anything short of
    that is undecided.
    """
    if k < 2 or n < 1:
        raise ValueError(f"need k >= 2 and n >= 1, got k={k} n={n}")
    facts = facts or KnownFacts()
    if five_chrom_tables is not None:
        facts = facts.with_count_report(five_chrom_tables)
    prover = _Prover(k, n, girth_min, facts, host_cap, workers)
    cert = Certificate(k=k, n=n, girth_min=girth_min)
    for d in range(min_max_degree(k), n):
        case = prover.case(d)
        logger.info(case.render())
        cert.cases.append(case)

    if any(c.verdict == "witness" for c in cert.cases):
        cert.verdict = "exists"
    elif all(c.closed for c in cert.cases):
        cert.verdict = "no-graph"
        if any(c.needs_mtf for c in cert.cases):
            # a (k, n)-graph has an mtf supergraph, which is k-chromatic unless a (k+1, n)-graph exists
            reason = prover.no_graphs(k + 1, n)
            if reason is None:
                cert.verdict = "undecided"
                cert.assumptions.append(f"unverified: no ({k + 1},{n})-graph")
            else:
                cert.assumptions.append(f"no ({k + 1},{n})-graph: {reason}")
    cert.assumptions = prover.imported + cert.assumptions
    logger.info(f"certificate k={k} n={n} girth_min={girth_min}: {cert.verdict}")
    return cert
