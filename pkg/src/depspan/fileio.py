"""Text formats for graphs and point sets.

Edge-list format: line 1 is "n m"; then m lines "i j" (rank graphs) or
"i j w" (weighted), 1-based, i < j, ASCII decimal, LF line endings. Parsers
reject malformed headers, out-of-range or reordered endpoints, and duplicate
edges, naming the offending line.

Point format: line 1 is "n d"; then n lines of d decimal coordinates (raw
input units; normalization happens separately so that emit(parse(f)) == f).
"""

from __future__ import annotations

import numpy as np

from .graphs import RankGraph

__all__ = [
    "FormatError",
    "read_edge_list",
    "write_edge_list",
    "edge_list_text",
    "read_points",
    "write_points",
    "points_text",
]


class FormatError(ValueError):
    """Malformed graph or point file; message carries the line number."""


def _fail(lineno: int, msg: str):
    raise FormatError(f"line {lineno}: {msg}")


def read_edge_list(path) -> RankGraph:
    with open(path, "r", encoding="ascii") as fh:
        return parse_edge_list(fh.read())


def parse_edge_list(text: str) -> RankGraph:
    lines = text.splitlines()
    if not lines:
        raise FormatError("line 1: missing header")
    head = lines[0].split()
    if len(head) != 2:
        _fail(1, f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        _fail(1, f"header must be two integers, got {lines[0]!r}")
    if n < 1:
        _fail(1, f"vertex count must be >= 1, got {n}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != m:
        raise FormatError(f"header promises {m} edges, file has {len(body)}")
    ei = np.empty(m, dtype=np.int32)
    ej = np.empty(m, dtype=np.int32)
    weights = None
    seen = set()
    for idx, ln in enumerate(body):
        lineno = idx + 2
        parts = ln.split()
        if len(parts) not in (2, 3):
            _fail(lineno, f"expected 'i j' or 'i j w', got {ln!r}")
        if weights is None and len(parts) == 3:
            if idx != 0:
                _fail(lineno, "mixed weighted and unweighted edge lines")
            weights = np.empty(m, dtype=np.float64)
        if weights is not None and len(parts) == 2:
            _fail(lineno, "mixed weighted and unweighted edge lines")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            _fail(lineno, f"endpoints must be integers, got {ln!r}")
        if not (1 <= i < j <= n):
            _fail(lineno, f"need 1 <= i < j <= {n}, got ({i}, {j})")
        if (i, j) in seen:
            _fail(lineno, f"duplicate edge ({i}, {j})")
        seen.add((i, j))
        ei[idx], ej[idx] = i, j
        if weights is not None:
            try:
                w = float(parts[2])
            except ValueError:
                _fail(lineno, f"weight must be a number, got {parts[2]!r}")
            if not (w > 0):
                _fail(lineno, f"weight must be positive, got {w}")
            weights[idx] = w
    return RankGraph(n, ei, ej, weights)


def edge_list_text(g: RankGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    if g.weights is None:
        lines.extend(f"{i} {j}" for i, j in zip(g.edge_i, g.edge_j))
    else:
        lines.extend(f"{i} {j} {float(w)!r}"
                     for i, j, w in zip(g.edge_i, g.edge_j, g.weights))
    return "\n".join(lines) + "\n"


def write_edge_list(g: RankGraph, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(edge_list_text(g))


def read_points(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        return parse_points(fh.read())


def parse_points(text: str) -> np.ndarray:
    lines = text.splitlines()
    if not lines:
        raise FormatError("line 1: missing header")
    head = lines[0].split()
    if len(head) != 2:
        _fail(1, f"header must be 'n d', got {lines[0]!r}")
    try:
        n, d = int(head[0]), int(head[1])
    except ValueError:
        _fail(1, f"header must be two integers, got {lines[0]!r}")
    if n < 1 or d < 1:
        _fail(1, f"need n >= 1 and d >= 1, got n={n} d={d}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != n:
        raise FormatError(f"header promises {n} points, file has {len(body)}")
    out = np.empty((n, d), dtype=np.float64)
    for idx, ln in enumerate(body):
        lineno = idx + 2
        parts = ln.split()
        if len(parts) != d:
            _fail(lineno, f"expected {d} coordinates, got {len(parts)}")
        try:
            out[idx] = [float(p) for p in parts]
        except ValueError:
            _fail(lineno, f"coordinates must be numbers, got {ln!r}")
    return out


def points_text(coords: np.ndarray) -> str:
    coords = np.asarray(coords, dtype=np.float64)
    lines = [f"{coords.shape[0]} {coords.shape[1]}"]
    lines.extend(" ".join(repr(float(x)) for x in row) for row in coords)
    return "\n".join(lines) + "\n"


def write_points(coords: np.ndarray, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(points_text(coords))
