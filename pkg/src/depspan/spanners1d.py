"""One-dimensional dependable exact spanners.

All constructions here produce exact spanners on ranks 1..n (deficiency zero
before any failure) engineered so that, after each edge independently survives
with probability psi, the expected number of failed pairs stays close to the
unavoidable floor of the complete graph.

Parameter formulas use natural logarithms throughout. Derived quantities:

    nu  = psi^(-1/(k-1))                    expansion base (k = 4 by default)
    M   = min(n, ceil((c7 * nu / psi) ln n))  block size
    L   = 6M for the 4-hop construction, (k+4)M for the k-hop one, both
          clamped to n-1 (so small n degenerate to the complete graph)
    tau = min(1, c7^2 * nu / (psi * M))     bipartite connector rate
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .graphs import RankGraph, interval_graph
from .rng import RandomStream, derive_stream

__all__ = [
    "SpannerParams",
    "DerivedParams",
    "BlockPartition",
    "interval_radius",
    "dependable_interval_spanner",
    "two_hop_hierarchy",
    "block_partition",
    "bipartite_connector",
    "biclique_block_spanner",
    "four_hop_spanner",
    "khop_spanner",
]


@dataclass(frozen=True)
class SpannerParams:
    """Inputs shared by the few-hop constructions."""

    n: int
    psi: float
    k: int = 4
    c6: float = 4.0
    c7: float = 4.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if not (0.0 < self.psi <= 1.0):
            raise ValueError(f"survival probability must be in (0, 1], got {self.psi}")
        if self.k < 3:
            raise ValueError(f"hop budget must be >= 3, got {self.k}")
        if self.c6 <= 0 or self.c7 <= 0:
            raise ValueError("constants c6 and c7 must be positive")


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from (n, psi, k, c7); see module docstring."""

    nu: float
    block_size: int
    radius: int
    connector_rate: float

    @classmethod
    def for_k_hop(cls, n: int, psi: float, k: int, c7: float,
                  radius_multiplier: int | None = None) -> "DerivedParams":
        if k < 3:
            raise ValueError(f"hop budget must be >= 3, got {k}")
        nu = psi ** (-1.0 / (k - 1))
        block = min(n, math.ceil((c7 * nu / psi) * math.log(n)))
        block = max(1, block)
        mult = (k + 4) if radius_multiplier is None else radius_multiplier
        radius = min(mult * block, n - 1)
        rate = min(1.0, c7 * c7 * nu / (psi * block))
        return cls(nu=nu, block_size=block, radius=radius, connector_rate=rate)

    @classmethod
    def for_four_hop(cls, n: int, psi: float, c7: float) -> "DerivedParams":
        # The 4-hop construction uses the tighter interval radius 6M.
        return cls.for_k_hop(n, psi, 4, c7, radius_multiplier=6)

    def as_dict(self) -> dict:
        return {
            "nu": self.nu,
            "block_size": self.block_size,
            "radius": self.radius,
            "connector_rate": self.connector_rate,
        }


@dataclass(frozen=True)
class BlockPartition:
    """Consecutive rank intervals covering 1..n.

    All blocks have the requested size except the last, which absorbs any
    remainder (sizes stay below twice the requested size); when the requested
    size exceeds n there is a single block.
    """

    n: int
    requested_size: int
    bounds: tuple  # ((start, end), ...) inclusive

    @property
    def count(self) -> int:
        return len(self.bounds)

    def sizes(self) -> list[int]:
        return [e - s + 1 for s, e in self.bounds]


def block_partition(n: int, size: int) -> BlockPartition:
    if not (1 <= size):
        raise ValueError(f"block size must be >= 1, got {size}")
    nb = max(1, n // size)
    bounds = []
    for b in range(nb):
        start = b * size + 1
        end = (b + 1) * size if b < nb - 1 else n
        bounds.append((start, end))
    return BlockPartition(n=n, requested_size=size, bounds=tuple(bounds))


def interval_radius(n: int, psi: float, c6: float = 4.0) -> int:
    """Connection radius of the plain interval spanner: ceil((c6/psi) ln n),
    clamped to n-1."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not (0.0 < psi <= 1.0):
        raise ValueError(f"survival probability must be in (0, 1], got {psi}")
    if c6 <= 0:
        raise ValueError(f"c6 must be positive, got {c6}")
    return min(n - 1, math.ceil((c6 / psi) * math.log(n))) if n > 1 else 0


def dependable_interval_spanner(n: int, psi: float, c6: float = 4.0) -> RankGraph:
    """Connect every pair within rank distance ceil((c6/psi) ln n).

    Within any window of that width this graph is indistinguishable from the
    complete graph, which is what keeps its expected deficiency within one
    failed pair of the optimum.
    """
    if psi < 1.0 / max(n, 1):
        warnings.warn(f"survival probability {psi} below 1/n; the construction "
                      "degenerates", stacklevel=2)
    return interval_graph(n, interval_radius(n, psi, c6))


def two_hop_hierarchy(a: int, b: int) -> np.ndarray:
    """Edges of the median hierarchy on ranks a..b, as an (m, 2) array.

    The median m = floor((a+b)/2) is joined to every other rank of the range
    and both halves recurse, so every pair in the range gets a straight path
    of at most two hops while the edge count stays O(size * log(size)).
    """
    if a > b:
        raise ValueError(f"empty range [{a}, {b}]")
    chunks = []
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        if hi <= lo:
            continue
        mid = (lo + hi) // 2
        others = np.concatenate([np.arange(lo, mid, dtype=np.int64),
                                 np.arange(mid + 1, hi + 1, dtype=np.int64)])
        pair = np.empty((others.size, 2), dtype=np.int64)
        pair[:, 0] = np.minimum(others, mid)
        pair[:, 1] = np.maximum(others, mid)
        chunks.append(pair)
        if mid - 1 > lo:
            stack.append((lo, mid - 1))
        if hi > mid + 1:
            stack.append((mid + 1, hi))
    if not chunks:
        return np.empty((0, 2), dtype=np.int64)
    return np.concatenate(chunks, axis=0)


def bipartite_connector(x_block: tuple[int, int], y_block: tuple[int, int],
                        rate: float, rng: RandomStream) -> np.ndarray:
    """Sample each cross pair of two disjoint rank intervals independently
    with probability `rate`; returns an (m, 2) array with i < j.

    Pairs are enumerated row-major over (x ascending, y ascending), so the
    sample is a pure function of (blocks, rate, stream state).
    """
    if not (0.0 <= rate <= 1.0):
        raise ValueError(f"rate must be in [0, 1], got {rate}")
    xs, xe = x_block
    ys, ye = y_block
    if xs > xe or ys > ye:
        raise ValueError("empty block")
    if not (xe < ys or ye < xs):
        raise ValueError(f"blocks overlap: {x_block} vs {y_block}")
    nx, ny = xe - xs + 1, ye - ys + 1
    keep = np.flatnonzero(rng.uniforms(nx * ny) < rate)
    x = xs + keep // ny
    y = ys + keep % ny
    out = np.empty((keep.size, 2), dtype=np.int64)
    out[:, 0] = np.minimum(x, y)
    out[:, 1] = np.maximum(x, y)
    return out


def _biclique(x_block, y_block) -> np.ndarray:
    xs, xe = x_block
    ys, ye = y_block
    x = np.repeat(np.arange(xs, xe + 1, dtype=np.int64), ye - ys + 1)
    y = np.tile(np.arange(ys, ye + 1, dtype=np.int64), xe - xs + 1)
    out = np.empty((x.size, 2), dtype=np.int64)
    out[:, 0] = np.minimum(x, y)
    out[:, 1] = np.maximum(x, y)
    return out


def _assemble(n: int, dp: DerivedParams, seed: int | None,
              full_biclique: bool) -> RankGraph:
    """Interval graph plus the block hierarchy with biclique or connector
    cross edges; deduplicated."""
    base = interval_graph(n, dp.radius)
    parts = [np.stack([base.edge_i.astype(np.int64),
                       base.edge_j.astype(np.int64)], axis=1)]
    partition = block_partition(n, dp.block_size)
    nb = partition.count
    if nb >= 2:
        for bi, bj in two_hop_hierarchy(1, nb):
            x = partition.bounds[bi - 1]
            y = partition.bounds[bj - 1]
            if full_biclique:
                parts.append(_biclique(x, y))
            else:
                stream = derive_stream(seed, (bi - 1) * nb + (bj - 1))
                parts.append(bipartite_connector(x, y, dp.connector_rate, stream))
    allp = np.concatenate(parts, axis=0)
    keys = np.unique(allp[:, 0] * (n + 1) + allp[:, 1])
    return RankGraph(n, (keys // (n + 1)).astype(np.int32),
                     (keys % (n + 1)).astype(np.int32), _validated=True)


def biclique_block_spanner(n: int, psi: float, c7: float = 4.0) -> RankGraph:
    """Baseline few-hop spanner: block hierarchy with full bicliques.

    Denser than the connector version by roughly a block-size factor; kept as
    the reference the sparse construction is measured against.
    """
    SpannerParams(n=n, psi=psi, c7=c7)
    dp = DerivedParams.for_four_hop(n, psi, c7)
    return _assemble(n, dp, None, full_biclique=True)


def four_hop_spanner(n: int, psi: float, c7: float = 4.0, seed: int = 0) -> RankGraph:
    """Sparse dependable spanner giving (with high probability) straight paths
    of at most 4 hops to every surviving long pair.

    Cross-block bicliques are replaced by random bipartite connectors at rate
    tau, each sampled from its own derived stream indexed by the block pair,
    so the build is reproducible and order-independent.
    """
    SpannerParams(n=n, psi=psi, c7=c7, seed=seed)
    dp = DerivedParams.for_four_hop(n, psi, c7)
    return _assemble(n, dp, seed, full_biclique=False)


def khop_spanner(n: int, psi: float, k: int, c7: float = 4.0, seed: int = 0) -> RankGraph:
    """Generalization of the 4-hop construction to a hop budget k >= 3.

    Larger budgets shrink the expansion base nu = psi^(-1/(k-1)) and with it
    the connector rate, trading hops for edges. k = 4 matches the 4-hop
    construction except for the interval radius constant ((k+4)M here, 6M
    there).
    """
    SpannerParams(n=n, psi=psi, k=k, c7=c7, seed=seed)
    dp = DerivedParams.for_k_hop(n, psi, k, c7)
    return _assemble(n, dp, seed, full_biclique=False)
