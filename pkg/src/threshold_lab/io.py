"""Text formats: edge lists, DOT, metadata sidecars and code assignments."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .codes import CodeAssignment
from .graph import Graph, GraphError, build_graph


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` followed by m lines ``u v``; comments and blank lines are skipped."""
    lines = list(_content_lines(text))
    if not lines:
        raise GraphError("empty edge list")
    header = lines[0][1].split()
    if len(header) != 2:
        raise GraphError(f"line {lines[0][0]}: header must be 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphError(f"line {lines[0][0]}: header must be two integers") from None
    if m < 0:
        raise GraphError("edge count must be non-negative")
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for lineno, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: vertices must be integers") from None
        edges.append((u, v))
    return build_graph(n, edges)


def format_edge_list(G: Graph) -> str:
    edges = list(G.edges())
    out = [f"{G.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def read_graph(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def write_graph(G: Graph, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(G))


def to_dot(G: Graph, name: str = "G") -> str:
    out = [f"graph {name} {{"]
    out.extend(f"  {v};" for v in range(G.n))
    out.extend(f"  {u} -- {v};" for u, v in G.edges())
    out.append("}")
    return "\n".join(out) + "\n"


def parse_sidecar(text: str) -> dict[str, str]:
    meta = {}
    for lineno, line in _content_lines(text):
        key, sep, value = line.partition("=")
        if not sep:
            raise GraphError(f"line {lineno}: expected key=value")
        meta[key.strip()] = value.strip()
    return meta


def parse_assignment(text: str, n: int) -> CodeAssignment:
    """One line per vertex: ``v bitstring``. Every vertex must appear exactly once."""
    rows: dict[int, str] = {}
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'v bitstring'")
        try:
            v = int(parts[0])
        except ValueError:
            raise GraphError(f"line {lineno}: vertex must be an integer") from None
        if not 0 <= v < n:
            raise GraphError(f"line {lineno}: vertex {v} out of range")
        if v in rows:
            raise GraphError(f"line {lineno}: vertex {v} listed twice")
        rows[v] = parts[1]
    missing = [v for v in range(n) if v not in rows]
    if missing:
        raise GraphError(f"assignment misses vertex {missing[0]}")
    return CodeAssignment.from_strings([rows[v] for v in range(n)])


def format_assignment(A: CodeAssignment) -> str:
    return "".join(f"{v} {A.bitstring(v)}\n" for v in range(A.n))
