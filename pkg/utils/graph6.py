"""graph6 codec, graph6 stream files and the adjacency-list fixture format."""
import logging
from pathlib import Path
from typing import Iterable, Iterator, List, Union

from utils.graph import MAX_ORDER, Graph, iter_bits

logger = logging.getLogger(__name__)

HEADER = b">>graph6<<"


class Graph6Error(ValueError):
    """Malformed graph6 input."""


class FixtureError(ValueError):
    """Malformed adjacency-list fixture."""


def _encode_order(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12 & 63) + 63, (n >> 6 & 63) + 63, (n & 63) + 63])
    raise Graph6Error(f"Order {n} too large for graph6")


def graph6_encode(g: Graph) -> bytes:
    """graph6 record without the trailing newline."""
    out = bytearray(_encode_order(g.order))
    acc = 0
    nbits = 0
    for j in range(1, g.order):
        row = g.adj[j]
        for i in range(j):
            acc = acc << 1 | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = 0
                nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def graph6_decode(data: Union[bytes, str]) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.rstrip(b"\r\n")
    if data.startswith(HEADER):
        data = data[len(HEADER):]
    if not data:
        raise Graph6Error("Empty graph6 record")
    for b in data:
        if not 63 <= b <= 126:
            raise Graph6Error(f"Byte {b!r} outside the graph6 range 63..126")
    if data[0] == 126:
        if len(data) < 4 or data[1] == 126:
            raise Graph6Error("Unsupported or truncated graph6 length header")
        n = (data[1] - 63) << 12 | (data[2] - 63) << 6 | (data[3] - 63)
        body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    if n > MAX_ORDER:
        raise Graph6Error(f"Order {n} exceeds the supported maximum of {MAX_ORDER}")
    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    if len(body) != expected:
        raise Graph6Error(f"Expected {expected} data bytes for order {n}, got {len(body)}")
    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] - 63) >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    if nbits % 6 and (body[-1] - 63) & ((1 << (6 - nbits % 6)) - 1):
        raise Graph6Error("Non-zero padding bits in graph6 record")
    return Graph(n, adj, check=False)


def iter_graph6_lines(lines: Iterable[Union[bytes, str]]) -> Iterator[Graph]:
    for lineno, line in enumerate(lines, 1):
        if isinstance(line, str):
            line = line.encode("ascii")
        line = line.strip()
        if not line:
            continue
        try:
            yield graph6_decode(line)
        except Graph6Error as e:
            raise Graph6Error(f"line {lineno}: {e}") from e


def read_graph6_file(path: Union[str, Path]) -> List[Graph]:
    with open(path, "rb") as f:
        return list(iter_graph6_lines(f))


def write_graph6_file(path: Union[str, Path], graphs: Iterable[Graph]) -> int:
    """Write newline-delimited graph6 records; returns the number written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "wb") as f:
        for g in graphs:
            f.write(graph6_encode(g) + b"\n")
            count += 1
    return count


def read_adjacency_list(text: str) -> Graph:
    """
    Parse lines "v: u1 u2 ... uk" (0-indexed). The symmetric closure is taken;
    a one-sided listing is logged since the published lists are symmetric.
    """
    rows = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, tail = line.partition(":")
        if not sep:
            raise FixtureError(f"line {lineno}: missing ':' in {raw!r}")
        try:
            v = int(head)
            nbrs = [int(tok) for tok in tail.split()]
        except ValueError as e:
            raise FixtureError(f"line {lineno}: non-integer vertex in {raw!r}") from e
        if v in rows:
            raise FixtureError(f"line {lineno}: vertex {v} listed twice")
        rows[v] = nbrs
    if not rows:
        return Graph(0, [])
    n = max(max(rows), max((u for nbrs in rows.values() for u in nbrs), default=0)) + 1
    if n > MAX_ORDER:
        raise FixtureError(f"Fixture has {n} vertices, more than {MAX_ORDER}")
    adj = [0] * n
    for v, nbrs in rows.items():
        for u in nbrs:
            if u == v:
                raise FixtureError(f"Loop at vertex {v}")
            adj[v] |= 1 << u
    asymmetric = [(v, u) for v in range(n) for u in iter_bits(adj[v]) if not adj[u] >> v & 1]
    if asymmetric:
        logger.warning(f"Adjacency list is not symmetric ({len(asymmetric)} one-sided entries), closing it")
        for v, u in asymmetric:
            adj[u] |= 1 << v
    return Graph(n, adj)


def load_fixture(path: Union[str, Path]) -> Graph:
    return read_adjacency_list(Path(path).read_text())
