"""Euclidean dependable (1+eps)-spanners via locality-sensitive orderings.

Each ordering of the family linearizes the point set; a 1-D dependable
spanner built on those ranks is mapped back to point pairs, and the union
over orderings is the output graph. Edge weights are Euclidean distances in
normalized coordinates (PointSet.scale converts back to input units).
"""

from __future__ import annotations

import math

import numpy as np

from .graphs import RankGraph
from .lso import build_lso_family
from .rng import derive_seed
from .spanners1d import four_hop_spanner, khop_spanner

__all__ = [
    "PointSet",
    "GeometricGraph",
    "normalize_points",
    "euclidean_dependable_spanner",
    "bounded_hop_distance",
    "extract_bounded_path",
    "count_stretch_failures",
    "stretch_failure_mask",
    "DEFAULT_MAX_ORDERINGS",
]

NORMALIZE_MARGIN = 2.0 ** -16  # keeps normalized coordinates strictly below 1

# Per-ordering sub-spanner builds dominate construction cost, so the union is
# taken over a bounded, evenly spread, deterministic subset of the family.
DEFAULT_MAX_ORDERINGS = 128


class PointSet:
    """n distinct points in [0,1)^d plus the scale back to input units."""

    __slots__ = ("coords", "scale")

    def __init__(self, coords: np.ndarray, scale: float = 1.0):
        coords = np.ascontiguousarray(coords, dtype=np.float64)
        if coords.ndim != 2:
            raise ValueError("coordinates must be an (n, d) array")
        if coords.shape[0] < 2:
            raise ValueError("need at least two points")
        if scale <= 0:
            raise ValueError(f"scale must be positive, got {scale}")
        if coords.size and (coords.min() < 0.0 or coords.max() >= 1.0):
            raise ValueError("coordinates must lie in [0, 1)")
        _reject_duplicates(coords)
        coords.setflags(write=False)
        self.coords = coords
        self.scale = float(scale)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def distance(self, u: int, v: int) -> float:
        """Normalized Euclidean distance between vertices u, v (1-based)."""
        return float(np.linalg.norm(self.coords[u - 1] - self.coords[v - 1]))

    def distance_matrix(self) -> np.ndarray:
        diff = self.coords[:, None, :] - self.coords[None, :, :]
        return np.sqrt((diff * diff).sum(axis=2))

    def __repr__(self) -> str:
        return f"PointSet(n={self.n}, d={self.dim}, scale={self.scale:g})"


def _reject_duplicates(coords: np.ndarray) -> None:
    _, inverse, counts = np.unique(coords, axis=0, return_inverse=True,
                                   return_counts=True)
    if (counts > 1).any():
        bad = np.flatnonzero(counts[inverse] > 1)
        raise ValueError(f"duplicate points at indices {bad.tolist()}")


def normalize_points(raw) -> PointSet:
    """Translate to the origin and, if needed, scale uniformly so every
    coordinate lands in [0, 1 - margin]; relative distances are preserved
    up to the single recorded scale factor."""
    arr = np.asarray(raw, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 2:
        raise ValueError("need an (n, d) array with n >= 2")
    mins = arr.min(axis=0)
    extent = float((arr.max(axis=0) - mins).max())
    if extent == 0.0:
        raise ValueError("all points are identical")
    top = 1.0 - NORMALIZE_MARGIN
    scale = extent / top if extent > top else 1.0
    coords = (arr - mins) / scale
    return PointSet(coords, scale)


class GeometricGraph:
    """A weighted RankGraph over point indices; weight(u, v) = |uv|."""

    __slots__ = ("graph", "points", "info")

    def __init__(self, graph: RankGraph, points: PointSet, info: dict | None = None):
        if graph.n != points.n:
            raise ValueError("graph and point set sizes differ")
        if graph.weights is None:
            raise ValueError("geometric graphs must carry a weight table")
        self.graph = graph
        self.points = points
        self.info = info or {}

    @property
    def n(self) -> int:
        return self.graph.n

    def __repr__(self) -> str:
        return f"GeometricGraph(n={self.n}, m={self.graph.m})"


def _spread_ids(total: int, cap: int | None) -> np.ndarray:
    if cap is None or total <= cap:
        return np.arange(total, dtype=np.int64)
    return np.unique(np.round(np.linspace(0, total - 1, cap)).astype(np.int64))


def euclidean_dependable_spanner(points: PointSet, eps: float, psi: float,
                                 c7: float = 4.0, mode: str = "four-hop",
                                 seed: int = 0,
                                 max_orderings: int | None = DEFAULT_MAX_ORDERINGS,
                                 ) -> GeometricGraph:
    """Union of 1-D dependable spanners over a locality-sensitive ordering
    family; the surviving graph keeps (1+eps)-stretch paths of few hops for
    almost all pairs.

    four-hop mode pairs an eps/8 family with the 4-hop rank construction;
    log-hop trades hops for sparsity with k ~ log2(1/psi) (the rank build is
    clamped to hop budget >= 3, its minimum). max_orderings bounds how many
    family members the union enumerates (evenly spread, always including the
    identity ordering); None means the whole family.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must be in (0, 1), got {eps}")
    if not (0.0 < psi <= 1.0):
        raise ValueError(f"survival probability must be in (0, 1], got {psi}")
    n, d = points.n, points.dim
    if mode == "four-hop":
        fam = build_lso_family(eps / 8.0, d)
        hop_budget = 4

        def build_ranks(sub_seed):
            return four_hop_spanner(n, psi, c7, seed=sub_seed)
    elif mode == "log-hop":
        k_lso = max(1, math.ceil(math.log2(1.0 / psi)))
        k_build = max(3, k_lso)
        fam = build_lso_family(min(0.5, eps / (2.0 * k_lso)), d)
        hop_budget = 2 * k_lso

        def build_ranks(sub_seed):
            return khop_spanner(n, psi, k_build, c7, seed=sub_seed)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected 'four-hop' or 'log-hop'")

    ids = _spread_ids(len(fam), max_orderings)
    adj = np.zeros((n + 1, n + 1), dtype=bool)
    for oid in ids.tolist():
        o = fam.ordering(oid)
        order = fam.sort_indices(o, points.coords)  # rank -> 0-based point index
        sub = build_ranks(derive_seed(seed, oid))
        pu = order[sub.edge_i - 1]
        pv = order[sub.edge_j - 1]
        adj[np.minimum(pu, pv) + 1, np.maximum(pu, pv) + 1] = True
    ei, ej = np.nonzero(adj)
    weights = np.linalg.norm(points.coords[ei - 1] - points.coords[ej - 1], axis=1)
    graph = RankGraph(n, ei.astype(np.int32), ej.astype(np.int32), weights,
                      _validated=True)
    info = {
        "mode": mode,
        "eps": eps,
        "psi": psi,
        "c7": c7,
        "seed": seed,
        "hop_budget": hop_budget,
        "family_eps": fam.eps,
        "family_size": len(fam),
        "orderings_used": int(ids.size),
    }
    return GeometricGraph(graph, points, info)


# ---------------------------------------------------------------------------
# hop-bounded shortest paths

def _sym_edges(g: RankGraph):
    src = np.concatenate([g.edge_i, g.edge_j]).astype(np.int64)
    dst = np.concatenate([g.edge_j, g.edge_i]).astype(np.int64)
    w = np.concatenate([g.weights, g.weights])
    return src, dst, w


def _bellman_rounds(h: GeometricGraph, source: int, k: int) -> np.ndarray:
    """dist[r, v] = cheapest walk source -> v using at most r edges."""
    n = h.n
    src, dst, w = _sym_edges(h.graph)
    rounds = np.full((k + 1, n + 1), np.inf)
    rounds[:, source] = 0.0
    for r in range(1, k + 1):
        cur = rounds[r - 1].copy()
        np.minimum.at(cur, dst, rounds[r - 1][src] + w)
        rounds[r] = cur
    return rounds


def bounded_hop_distance(h: GeometricGraph, u: int, v: int, k: int) -> float:
    """Minimum total weight over paths with at most k edges; inf if none."""
    if k < 1:
        raise ValueError(f"hop bound must be >= 1, got {k}")
    n = h.n
    if not (1 <= u <= n and 1 <= v <= n):
        raise ValueError(f"vertices must be in [1, {n}]")
    return float(_bellman_rounds(h, u, k)[k, v])


def extract_bounded_path(h: GeometricGraph, u: int, v: int, k: int) -> list[int]:
    """A path u..v of at most k edges achieving bounded_hop_distance, found by
    exact backtracking over the relaxation rounds. Raises if v is unreachable
    within k hops."""
    if k < 1:
        raise ValueError(f"hop bound must be >= 1, got {k}")
    rounds = _bellman_rounds(h, u, k)
    if not np.isfinite(rounds[k, v]):
        raise ValueError(f"no path of at most {k} hops from {u} to {v}")
    wmap = h.graph.edge_weight_map()
    nbr: dict[int, list[tuple[int, float]]] = {}
    for (a, b), w in wmap.items():
        nbr.setdefault(a, []).append((b, w))
        nbr.setdefault(b, []).append((a, w))
    path = [v]
    r, cur = k, v
    while cur != u:
        if rounds[r - 1, cur] == rounds[r, cur]:
            r -= 1  # the last round added nothing for this vertex
            continue
        for w_vertex, wt in nbr.get(cur, ()):
            if rounds[r - 1, w_vertex] + wt == rounds[r, cur]:
                path.append(w_vertex)
                cur = w_vertex
                r -= 1
                break
        else:  # pragma: no cover - exact equality always finds the relaxed edge
            raise AssertionError("backtracking failed")
    path.reverse()
    return path


# ---------------------------------------------------------------------------
# all-pairs stretch accounting (min-plus matrix powers)

def _weight_matrix(h: GeometricGraph) -> np.ndarray:
    n = h.n
    w = np.full((n, n), np.inf)
    np.fill_diagonal(w, 0.0)
    i0 = h.graph.edge_i - 1
    j0 = h.graph.edge_j - 1
    w[i0, j0] = h.graph.weights
    w[j0, i0] = h.graph.weights
    return w


def _minplus(a: np.ndarray, b: np.ndarray, want_mid: bool):
    """Min-plus product, chunked by rows; optionally the minimizing midpoint."""
    n = a.shape[0]
    out = np.empty_like(a)
    mid = np.empty((n, n), dtype=np.int32) if want_mid else None
    chunk = max(1, (1 << 23) // (n * n))  # keep the (chunk, n, n) slab ~64 MB
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        cand = a[lo:hi, :, None] + b[None, :, :]  # (rows, mid, col)
        if want_mid:
            am = np.argmin(cand, axis=1)
            mid[lo:hi] = am
            out[lo:hi] = np.take_along_axis(cand, am[:, None, :], axis=1)[:, 0, :]
        else:
            out[lo:hi] = cand.min(axis=1)
    return out, mid


def bounded_hop_matrix(h: GeometricGraph, k: int) -> np.ndarray:
    """(n, n) matrix of bounded_hop_distance for all pairs at hop budget k."""
    if k < 1:
        raise ValueError(f"hop bound must be >= 1, got {k}")
    d = _weight_matrix(h)
    result = None
    power = d
    kk = min(k, max(1, h.n - 1))
    while True:
        if kk & 1:
            result = power if result is None else _minplus(result, power, False)[0]
        kk >>= 1
        if kk == 0:
            break
        power = _minplus(power, power, False)[0]
    return result


def four_hop_paths_resummed(h: GeometricGraph):
    """For every pair, the best <=4-hop distance plus a re-summation of one
    explicit path achieving it (u -> a -> m -> b -> v with degenerate hops
    collapsing onto the diagonal). Returns (d4, resummed); entries are only
    meaningful where d4 is finite."""
    w = _weight_matrix(h)
    d2, m2 = _minplus(w, w, True)
    d4, m4 = _minplus(d2, d2, True)
    n = w.shape[0]
    ii, jj = np.indices((n, n))
    mid = m4
    a = m2[ii, mid]
    b = m2[mid, jj]
    resummed = w[ii, a] + w[a, mid] + w[mid, b] + w[b, jj]
    return d4, resummed


def stretch_failure_mask(h: GeometricGraph, eps: float, k: int) -> np.ndarray:
    """Upper-triangular boolean matrix: True where no <=k-hop path of length
    <= (1+eps)*|uv| exists. Uses normalized coordinates."""
    dist = h.points.distance_matrix()
    bounded = bounded_hop_matrix(h, k)
    bad = bounded > (1.0 + eps) * dist
    return np.triu(bad, k=1)


def count_stretch_failures(h: GeometricGraph, points: PointSet, eps: float,
                           k: int) -> int:
    """Number of unordered pairs whose best <=k-hop path exceeds
    (1+eps) times their Euclidean distance; exact over all pairs."""
    if points.n != h.n:
        raise ValueError("point set does not match the graph")
    dist = points.distance_matrix()
    bounded = bounded_hop_matrix(h, k)
    return int(np.triu(bounded > (1.0 + eps) * dist, k=1).sum())
