"""Straight-path reachability and deficiency measurement.

A straight path is a path whose vertex ranks strictly increase, so the edges
of a RankGraph form a DAG when oriented low-to-high and reachability is a
single forward sweep. Two exact engines back the pair counts:

* unbounded reachability: a bitset closure, one row of bits per target vertex,
  filled in one ascending pass (row j ORs the rows of its in-neighbors);
* hop-bounded reachability: boolean matrix powers evaluated as float32 BLAS
  matmuls for n <= 8192, and a level-by-level bitset sweep above that.

Both count exactly the same quantity; the test suite cross-checks them against
each other and against brute-force path enumeration on small graphs.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graphs import RankGraph
from .rng import derive_stream

__all__ = [
    "DeficiencyReport",
    "straight_reachable",
    "straight_hops",
    "deficiency",
    "khop_deficiency",
    "khop_deficiency_split",
    "no_two_hop_probability",
    "expected_two_hop_deficiency",
    "monte_carlo_deficiency",
]

# Above this vertex count the dense matmul engine would need multi-GB matrices.
_MATMUL_MAX_N = 8192

_ONE = np.uint64(1)


# ---------------------------------------------------------------------------
# per-source sweeps (the reference per-vertex API)

def _in_neighbor_slices(n: int, ei: np.ndarray, ej: np.ndarray):
    """Edges regrouped by upper endpoint: lower endpoints sorted by upper,
    plus per-vertex slice bounds (lo[j]:hi[j])."""
    order = np.argsort(ej, kind="stable")
    ik = ei[order]
    counts = np.bincount(ej[order], minlength=n + 2)
    hi = np.cumsum(counts)
    lo = hi - counts
    return ik, lo, hi


def straight_reachable(g: RankGraph, source: int) -> np.ndarray:
    """Boolean vector over ranks: entry j is True iff a straight path
    source = t_1 < ... < t_k = j exists. Indexed by rank; entries at
    positions <= source are False. One forward sweep, O(|E|).
    """
    if not (1 <= source <= g.n):
        raise ValueError(f"vertex {source} out of range [1, {g.n}]")
    ik, lo, hi = _in_neighbor_slices(g.n, g.edge_i, g.edge_j)
    reach = np.zeros(g.n + 1, dtype=bool)
    seen = np.zeros(g.n + 1, dtype=bool)
    seen[source] = True
    for j in range(source + 1, g.n + 1):
        nb = ik[lo[j]:hi[j]]
        if nb.size and seen[nb].any():
            seen[j] = True
            reach[j] = True
    return reach


def straight_hops(g: RankGraph, source: int) -> np.ndarray:
    """Minimum straight-path hop counts from source, np.inf where unreachable.

    Indexed by rank; hops[source] = 0, positions below source are np.inf.
    """
    if not (1 <= source <= g.n):
        raise ValueError(f"vertex {source} out of range [1, {g.n}]")
    ik, lo, hi = _in_neighbor_slices(g.n, g.edge_i, g.edge_j)
    hops = np.full(g.n + 1, np.inf)
    hops[source] = 0.0
    for j in range(source + 1, g.n + 1):
        nb = ik[lo[j]:hi[j]]
        if nb.size:
            best = hops[nb].min()
            if best < np.inf:
                hops[j] = best + 1.0
    hops[0] = np.inf
    return hops


# ---------------------------------------------------------------------------
# bitset closure engine (all sources at once)

def _self_bit_rows(n: int) -> np.ndarray:
    words = (n + 63) >> 6
    rows = np.zeros((n + 1, words), dtype=np.uint64)
    idx = np.arange(1, n + 1)
    rows[idx, (idx - 1) >> 6] = _ONE << ((idx - 1) & 63).astype(np.uint64)
    return rows


def _closure_reachable_pairs(n: int, ik: np.ndarray, jk: np.ndarray) -> int:
    """Number of pairs i < j joined by a straight path.

    ik/jk must be sorted by jk. Row j of the bit matrix holds the sources that
    reach j; rows are final once written because in-neighbors precede j.
    """
    rows = _self_bit_rows(n)
    counts = np.bincount(jk, minlength=n + 2)
    hi = np.cumsum(counts)
    lo = hi - counts
    for j in range(2, n + 1):
        a, b = lo[j], hi[j]
        if b > a:
            rows[j] |= np.bitwise_or.reduce(rows[ik[a:b]], axis=0)
    return int(np.bitwise_count(rows[1:]).sum()) - n


def deficiency(g: RankGraph) -> int:
    """Number of pairs i < j with no straight path in g."""
    order = np.argsort(g.edge_j, kind="stable")
    reachable = _closure_reachable_pairs(g.n, g.edge_i[order], g.edge_j[order])
    return g.n * (g.n - 1) // 2 - reachable


# ---------------------------------------------------------------------------
# hop-bounded engines

def _bool_mm(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return (x @ y > 0).astype(np.float32)


def _khop_matmul(n: int, ei: np.ndarray, ej: np.ndarray, k: int,
                 split_radius: int | None):
    """(total failures, long failures) via boolean powers of I + A.

    A is strictly upper triangular, so all matrix powers stay upper triangular
    and a zero entry above the diagonal is exactly a missing <=k-hop path.
    """
    base = np.zeros((n, n), dtype=np.float32)
    base[ei - 1, ej - 1] = 1.0
    np.fill_diagonal(base, 1.0)
    result = None
    power = base
    kk = min(k, max(1, n - 1))  # longer straight paths cannot exist
    while True:
        if kk & 1:
            result = power if result is None else _bool_mm(result, power)
        kk >>= 1
        if kk == 0:
            break
        power = _bool_mm(power, power)
    below_diag = n * (n - 1) // 2
    total_fail = int(np.count_nonzero(result == 0)) - below_diag
    if split_radius is None:
        return total_fail, None
    zcum = np.cumsum(result == 0, axis=1, dtype=np.int32)
    rows = np.arange(0, n - split_radius - 1)
    if rows.size == 0:
        return total_fail, 0
    # zeros in row i among columns j with j - i > split_radius (0-based)
    long_fail = int((zcum[rows, n - 1] - zcum[rows, rows + split_radius]).sum())
    return total_fail, long_fail


def _khop_bits(n: int, ik: np.ndarray, jk: np.ndarray, k: int,
               split_radius: int | None):
    """Level-by-level bitset sweep; ik/jk must be sorted by jk."""
    base = _self_bit_rows(n)
    rows = base
    if ik.size:
        ju, starts = np.unique(jk, return_index=True)
        for _ in range(min(k, max(1, n - 1))):
            nxt = base.copy()
            red = np.bitwise_or.reduceat(rows[ik], starts, axis=0)
            nxt[ju] |= red
            rows = nxt
    reachable = int(np.bitwise_count(rows[1:]).sum()) - n
    total_fail = n * (n - 1) // 2 - reachable
    if split_radius is None:
        return total_fail, None
    long_reached = 0
    words = rows.shape[1]
    word_idx = np.arange(words, dtype=np.int64)
    full = ~np.uint64(0)
    for j in range(split_radius + 2, n + 1):
        c = j - split_radius - 1  # ranks 1..c are long sources for j
        nbits = np.clip(c - word_idx * 64, 0, 64)
        capped = np.minimum(nbits, 63).astype(np.uint64)
        mask = np.where(nbits >= 64, full, (_ONE << capped) - _ONE)
        long_reached += int(np.bitwise_count(rows[j] & mask).sum())
    long_total = sum(max(0, n - d) for d in range(split_radius + 1, n))
    return total_fail, long_total - long_reached


def _khop_counts(n, ei, ej, k, split_radius):
    if n <= _MATMUL_MAX_N:
        return _khop_matmul(n, ei, ej, k, split_radius)
    order = np.argsort(ej, kind="stable")
    return _khop_bits(n, ei[order], ej[order], k, split_radius)


def khop_deficiency(g: RankGraph, k: int) -> int:
    """Number of pairs i < j whose minimum straight hop count exceeds k."""
    if k < 1:
        raise ValueError(f"hop bound must be >= 1, got {k}")
    total, _ = _khop_counts(g.n, g.edge_i, g.edge_j, k, None)
    return total


def khop_deficiency_split(g: RankGraph, k: int, radius: int) -> tuple[int, int]:
    """(short, long) k-hop failure counts, split at rank distance `radius`:
    a pair is long when j - i > radius."""
    if k < 1:
        raise ValueError(f"hop bound must be >= 1, got {k}")
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    total, long_fail = _khop_counts(g.n, g.edge_i, g.edge_j, k, radius)
    return total - long_fail, long_fail


# ---------------------------------------------------------------------------
# closed-form two-hop oracle

def no_two_hop_probability(delta: int, psi: float) -> float:
    """Probability that a pair at rank distance delta has no straight path of
    at most 2 hops after filtering K_n at survival rate psi.

    The direct edge and the delta-1 midpoint paths use pairwise disjoint edge
    sets, so (1 - psi) * (1 - psi^2)^(delta - 1) is exact, not just a bound.
    """
    if delta < 1:
        raise ValueError(f"rank distance must be >= 1, got {delta}")
    if not (0.0 <= psi <= 1.0):
        raise ValueError(f"survival probability must be in [0, 1], got {psi}")
    return (1.0 - psi) * (1.0 - psi * psi) ** (delta - 1)


def expected_two_hop_deficiency(n: int, psi: float) -> float:
    """Expected count of pairs of K_n with no <=2-hop straight path after
    filtering at psi; always at most n / psi^2."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not (0.0 < psi <= 1.0):
        raise ValueError(f"survival probability must be in (0, 1], got {psi}")
    deltas = np.arange(1, n, dtype=np.float64)
    terms = (n - deltas) * (1.0 - psi) * (1.0 - psi * psi) ** (deltas - 1.0)
    return float(terms.sum())


# ---------------------------------------------------------------------------
# Monte Carlo estimation

@dataclass(frozen=True)
class DeficiencyReport:
    """Aggregate of independent failure trials on one graph."""

    n: int
    psi: float
    trials: int
    hop_bound: int | None  # None = unbounded straight paths
    seed: int
    per_trial_counts: tuple
    mean_failed_pairs: float
    stderr: float

    CSV_HEADER = "n,psi,hop_bound,trials,mean,stderr,seed"

    @classmethod
    def from_counts(cls, n, psi, hop_bound, seed, counts) -> "DeficiencyReport":
        arr = np.asarray(counts, dtype=np.float64)
        mean = float(arr.mean())
        stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
        return cls(n=n, psi=psi, trials=int(arr.size), hop_bound=hop_bound,
                   seed=seed, per_trial_counts=tuple(counts),
                   mean_failed_pairs=mean, stderr=stderr)

    def csv_row(self) -> str:
        hop = "inf" if self.hop_bound is None else str(self.hop_bound)
        return (f"{self.n},{self.psi:.12g},{hop},{self.trials},"
                f"{self.mean_failed_pairs:.12g},{self.stderr:.12g},{self.seed}")


def _trial_count(n, ib, jb, keep_byj, hop_bound, source_sample, stream):
    ik = ib[keep_byj]
    jk = jb[keep_byj]
    if hop_bound is not None:
        total, _ = _khop_counts(n, ik, jk, hop_bound, None)
        return total
    if source_sample is not None and source_sample < n:
        return _sampled_deficiency(n, ik, jk, source_sample, stream)
    return n * (n - 1) // 2 - _closure_reachable_pairs(n, ik, jk)


def _sampled_deficiency(n, ik, jk, s, stream):
    """Unbiased estimate from s sampled sources, scaled by n/s."""
    counts = np.bincount(jk, minlength=n + 2)
    hi = np.cumsum(counts)
    lo = hi - counts
    sources = np.sort(stream.choice_without_replacement(n, s) + 1)
    missing = 0
    for src in sources:
        seen = np.zeros(n + 1, dtype=bool)
        seen[src] = True
        reached = 0
        for j in range(src + 1, n + 1):
            nb = ik[lo[j]:hi[j]]
            if nb.size and seen[nb].any():
                seen[j] = True
                reached += 1
        missing += (n - src) - reached
    return missing * n / s


def monte_carlo_deficiency(g: RankGraph, psi: float, trials: int,
                           hop_bound: int | None = None, master: int = 0,
                           jobs: int = 1,
                           source_sample: int | None = None) -> DeficiencyReport:
    """Estimate the expected deficiency of g under survival rate psi.

    Trial t filters g with derive_stream(master, t) (bit-identical to calling
    filter_edges with that stream) and counts failed pairs, exactly unless
    source_sample is given. The report is a pure function of the arguments;
    jobs only controls thread fan-out, never the result.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    if not (0.0 <= psi <= 1.0):
        raise ValueError(f"survival probability must be in [0, 1], got {psi}")
    if hop_bound is not None and hop_bound < 1:
        raise ValueError(f"hop bound must be >= 1, got {hop_bound}")
    order = np.argsort(g.edge_j, kind="stable")
    ib = g.edge_i[order]
    jb = g.edge_j[order]

    def run(t: int):
        stream = derive_stream(master, t)
        keep = stream.uniforms(g.m) < psi
        return _trial_count(g.n, ib, jb, keep[order], hop_bound,
                            source_sample, stream)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            counts = list(pool.map(run, range(trials)))
    else:
        counts = [run(t) for t in range(trials)]
    return DeficiencyReport.from_counts(g.n, psi, hop_bound, master, counts)
