"""Graphs on ranked vertices 1..n with the rank metric |i - j|.

A RankGraph is immutable after construction. Edges are stored as two parallel
int32 arrays (i, j) with i < j, in lexicographic order; this canonical order
is what makes edge filtering reproducible (one uniform per edge, drawn in
canonical order). An optional weight table replaces the implicit rank metric,
which is how Euclidean graphs reuse this type.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .rng import RandomStream

__all__ = [
    "RankGraph",
    "complete_graph",
    "interval_graph",
    "filter_edges",
    "graph_union",
]


class RankGraph:
    """Undirected graph on vertices 1..n, edge (i, j) weighted |i - j| unless
    an explicit weight table is attached."""

    __slots__ = ("n", "edge_i", "edge_j", "weights")

    def __init__(self, n: int, edge_i: np.ndarray, edge_j: np.ndarray,
                 weights: np.ndarray | None = None, _validated: bool = False):
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {n}")
        self.n = int(n)
        edge_i = np.ascontiguousarray(edge_i, dtype=np.int32)
        edge_j = np.ascontiguousarray(edge_j, dtype=np.int32)
        if weights is not None:
            weights = np.ascontiguousarray(weights, dtype=np.float64)
        if not _validated:
            edge_i, edge_j, weights = _canonicalize(n, edge_i, edge_j, weights)
        for arr in (edge_i, edge_j, weights):
            if arr is not None:
                arr.setflags(write=False)
        self.edge_i = edge_i
        self.edge_j = edge_j
        self.weights = weights

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   weights: Iterable[float] | None = None) -> "RankGraph":
        pairs = list(edges)
        if pairs:
            arr = np.asarray(pairs, dtype=np.int64)
            ei, ej = arr[:, 0], arr[:, 1]
        else:
            ei = ej = np.zeros(0, dtype=np.int64)
        w = None if weights is None else np.asarray(list(weights), dtype=np.float64)
        return cls(n, ei, ej, w)

    @property
    def m(self) -> int:
        """Edge count."""
        return int(self.edge_i.shape[0])

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.edge_i.tolist(), self.edge_j.tolist()))

    def edge_weight_map(self) -> dict[tuple[int, int], float]:
        if self.weights is None:
            return {(int(i), int(j)): float(j - i)
                    for i, j in zip(self.edge_i, self.edge_j)}
        return {(int(i), int(j)): float(w)
                for i, j, w in zip(self.edge_i, self.edge_j, self.weights)}

    def __eq__(self, other) -> bool:
        if not isinstance(other, RankGraph):
            return NotImplemented
        if self.n != other.n or self.m != other.m:
            return False
        if not (np.array_equal(self.edge_i, other.edge_i)
                and np.array_equal(self.edge_j, other.edge_j)):
            return False
        if (self.weights is None) != (other.weights is None):
            return False
        return self.weights is None or np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.n, self.m))

    def __repr__(self) -> str:
        tag = ", weighted" if self.weights is not None else ""
        return f"RankGraph(n={self.n}, m={self.m}{tag})"


def _canonicalize(n, edge_i, edge_j, weights):
    """Normalize to i < j, lexicographic order; reject bad edges."""
    if edge_i.shape != edge_j.shape:
        raise ValueError("edge arrays must have equal length")
    if edge_i.size == 0:
        return (np.zeros(0, np.int32), np.zeros(0, np.int32), weights)
    if np.any(edge_i == edge_j):
        raise ValueError("self-loops are not allowed")
    lo = np.minimum(edge_i, edge_j)
    hi = np.maximum(edge_i, edge_j)
    if lo.min() < 1 or hi.max() > n:
        raise ValueError(f"edge endpoint out of range [1, {n}]")
    keys = lo.astype(np.int64) * (n + 1) + hi
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    if np.any(keys[1:] == keys[:-1]):
        dup = int(np.flatnonzero(keys[1:] == keys[:-1])[0])
        raise ValueError(
            f"duplicate edge ({keys[dup] // (n + 1)}, {keys[dup] % (n + 1)})")
    if weights is not None:
        if weights.shape[0] != lo.shape[0]:
            raise ValueError("weight table must cover exactly the edge set")
        if np.any(~(weights > 0)):
            raise ValueError("edge weights must be positive")
        weights = weights[order]
    return lo[order].astype(np.int32), hi[order].astype(np.int32), weights


def complete_graph(n: int) -> RankGraph:
    """K_n on vertices 1..n, with n(n-1)/2 edges."""
    if n < 1:
        raise ValueError(f"vertex count must be >= 1, got {n}")
    ei, ej = np.triu_indices(n, k=1)
    return RankGraph(n, (ei + 1).astype(np.int32), (ej + 1).astype(np.int32),
                     _validated=True)


def interval_graph(n: int, radius: int) -> RankGraph:
    """Edge (i, j) present iff 0 < j - i <= radius. radius >= n-1 gives K_n."""
    if n < 1:
        raise ValueError(f"vertex count must be >= 1, got {n}")
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    radius = min(radius, n - 1)
    if radius == 0:
        return RankGraph(n, np.zeros(0, np.int32), np.zeros(0, np.int32),
                         _validated=True)
    # counts[i] = number of neighbors above i, in lexicographic order
    counts = np.minimum(radius, n - np.arange(1, n, dtype=np.int64))
    ei = np.repeat(np.arange(1, n, dtype=np.int64), counts)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    offsets = np.arange(counts.sum(), dtype=np.int64) - np.repeat(starts, counts)
    ej = ei + offsets + 1
    return RankGraph(n, ei.astype(np.int32), ej.astype(np.int32), _validated=True)


def filter_edges(g: RankGraph, psi: float, rng: RandomStream) -> RankGraph:
    """Keep each edge independently with probability psi (the survival event).

    Draws one uniform per edge in canonical edge order, so the result is a
    pure function of (g, psi, stream state). The vertex set is unchanged.
    """
    if not (0.0 <= psi <= 1.0):
        raise ValueError(f"survival probability must be in [0, 1], got {psi}")
    keep = rng.uniforms(g.m) < psi
    w = None if g.weights is None else g.weights[keep]
    return RankGraph(g.n, g.edge_i[keep], g.edge_j[keep], w, _validated=True)


def graph_union(g1: RankGraph, g2: RankGraph) -> RankGraph:
    """Edge-set union of two graphs on the same vertex set."""
    if g1.n != g2.n:
        raise ValueError(f"vertex counts differ: {g1.n} vs {g2.n}")
    if (g1.weights is None) != (g2.weights is None):
        raise ValueError("cannot union a weighted graph with an unweighted one")
    n = g1.n
    keys = np.concatenate([
        g1.edge_i.astype(np.int64) * (n + 1) + g1.edge_j,
        g2.edge_i.astype(np.int64) * (n + 1) + g2.edge_j,
    ])
    if g1.weights is None:
        uniq = np.unique(keys)
        return RankGraph(n, (uniq // (n + 1)).astype(np.int32),
                         (uniq % (n + 1)).astype(np.int32), _validated=True)
    weights = np.concatenate([g1.weights, g2.weights])
    order = np.argsort(keys, kind="stable")
    keys, weights = keys[order], weights[order]
    same = keys[1:] == keys[:-1]
    if np.any(same & (weights[1:] != weights[:-1])):
        raise ValueError("weight tables disagree on a shared edge")
    first = np.concatenate(([True], ~same))
    keys, weights = keys[first], weights[first]
    return RankGraph(n, (keys // (n + 1)).astype(np.int32),
                     (keys % (n + 1)).astype(np.int32), weights, _validated=True)


def expected_kept_edges(g: RankGraph, psi: float) -> float:
    """Binomial mean of the surviving edge count under filter_edges."""
    return psi * g.m


def kept_edge_std(g: RankGraph, psi: float) -> float:
    return math.sqrt(psi * (1.0 - psi) * g.m)
