"""Edge-list file format.

UTF-8 text. Lines starting with '#' are comments. The first non-comment
line is the node count n; every following non-comment line is "u v" with
0 <= u, v < n and u != v, whitespace separated. One representative per
undirected edge; duplicates are tolerated with a warning.
"""
from __future__ import annotations

import io
import warnings
from pathlib import Path

from .errors import EdgeListError
from .graphs import Graph


def read_edge_list(source) -> Graph:
    """Parse an edge list from a path, text stream, or byte stream."""
    with _as_text(source, "r") as handle:
        n = None
        edges = set()
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if n is None:
                if len(fields) != 1:
                    raise EdgeListError(f"expected node count at line {lineno}")
                n = _parse_int(fields[0], lineno, "node count")
                if n < 1:
                    raise EdgeListError(f"node count must be positive at line {lineno}")
                continue
            if len(fields) != 2:
                raise EdgeListError(f"expected 'u v' at line {lineno}")
            u = _parse_int(fields[0], lineno, "node id")
            v = _parse_int(fields[1], lineno, "node id")
            if u == v:
                raise EdgeListError(f"self-loop at line {lineno}")
            if not (0 <= u < n and 0 <= v < n):
                raise EdgeListError(f"node id out of range at line {lineno}")
            edge = (min(u, v), max(u, v))
            if edge in edges:
                warnings.warn(f"duplicate edge {edge} at line {lineno}; keeping one copy")
            edges.add(edge)
        if n is None:
            raise EdgeListError("empty edge list: missing node count header")
        return Graph(n, frozenset(edges))


def write_edge_list(g: Graph, sink) -> None:
    """Write the node count and one sorted 'u v' line per edge."""
    with _as_text(sink, "w") as handle:
        handle.write(f"{g.n}\n")
        for u, v in sorted(g.edges):
            handle.write(f"{u} {v}\n")


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise EdgeListError(f"invalid {what} {token!r} at line {lineno}") from None


class _as_text:
    """Open paths, wrap byte streams, and pass text streams through."""

    def __init__(self, target, mode: str):
        self.target = target
        self.mode = mode
        self.owned = None
        self.wrapper = None

    def __enter__(self):
        if isinstance(self.target, (str, Path)):
            self.owned = open(self.target, self.mode, encoding="utf-8")
            return self.owned
        if isinstance(self.target, (io.RawIOBase, io.BufferedIOBase)):
            self.wrapper = io.TextIOWrapper(self.target, encoding="utf-8",
                                            write_through=True)
            return self.wrapper
        return self.target

    def __exit__(self, *exc):
        if self.owned is not None:
            self.owned.close()
        if self.wrapper is not None:
            self.wrapper.detach()  # leave the caller's byte stream open
        return False
