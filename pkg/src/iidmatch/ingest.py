"""Parsing of real-world graph files into simple general graphs.

Two on-disk formats are recognized: Matrix Market coordinate files (header
``%%MatrixMarket``, 1-based indices, declared dimensions) and plain
whitespace-separated edge lists (arbitrary integer ids, compacted to
[0, node_count) in first-appearance order).  Self-loops are dropped,
duplicate and symmetric-storage edges are merged.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .generators import GeneralGraph


@dataclass
class EdgeFile:
    """Detected on-disk format of a graph file."""

    path: str
    format: str  # "matrix-market-coordinate" | "plain-edge-list"
    index_base: int  # 1 for Matrix Market, 0 for plain lists


def detect_edge_format(path: str | Path) -> EdgeFile:
    with open(path) as fh:
        first = fh.readline()
    if first.startswith("%%MatrixMarket"):
        return EdgeFile(str(path), "matrix-market-coordinate", 1)
    return EdgeFile(str(path), "plain-edge-list", 0)


class GraphFileError(ValueError):
    def __init__(self, path: str | Path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.lineno = lineno


def _parse_pair(tokens: list[str], path, lineno) -> tuple[int, int]:
    # extra columns (weights, timestamps) are tolerated and ignored
    if len(tokens) < 2:
        raise GraphFileError(path, lineno, "expected at least two columns")
    try:
        return int(tokens[0]), int(tokens[1])
    except ValueError:
        raise GraphFileError(path, lineno,
                             f"non-integer node id in {tokens[:2]}") from None


def parse_graph_file(path: str | Path) -> GeneralGraph:
    """Read a graph file; blank lines and %/# comments are skipped."""
    info = detect_edge_format(path)
    edges: set[tuple[int, int]] = set()
    if info.format == "matrix-market-coordinate":
        with open(path) as fh:
            dims: tuple[int, int] | None = None
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("%") or line.startswith("#"):
                    continue
                tokens = line.split()
                if dims is None:
                    if len(tokens) < 2:
                        raise GraphFileError(path, lineno,
                                             "expected dimension header")
                    dims = (int(tokens[0]), int(tokens[1]))
                    continue
                u, v = _parse_pair(tokens, path, lineno)
                n = max(dims)
                if not (1 <= u <= n and 1 <= v <= n):
                    raise GraphFileError(path, lineno,
                                         f"index ({u}, {v}) outside [1, {n}]")
                if u != v:
                    edges.add((min(u, v) - 1, max(u, v) - 1))
        if dims is None:
            raise GraphFileError(path, 1, "no dimension header found")
        node_count = max(dims)
    else:
        compact: dict[int, int] = {}
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("%") or line.startswith("#"):
                    continue
                raw_u, raw_v = _parse_pair(line.split(), path, lineno)
                if raw_u == raw_v:
                    continue
                u = compact.setdefault(raw_u, len(compact))
                v = compact.setdefault(raw_v, len(compact))
                edges.add((min(u, v), max(u, v)))
        node_count = len(compact)
    if not edges:
        raise GraphFileError(path, 1, "file contains no edges")
    return GeneralGraph(node_count, sorted(edges))
