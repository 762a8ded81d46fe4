"""Threshold clustering of object types and threshold tuning.

Thresholds handed to the tuner live on a two-decimal grid.  Internally they
are kept as integer hundredths so that midpoints and rounding are exact.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Iterable, Mapping

from .dfm import MarkovDfm, SimilarityMatrix
from .errors import ThresholdOutOfRange

__all__ = [
    "ClusterSet",
    "TuningResult",
    "discover_clusters",
    "brute_force_clusters",
    "tune_clusters",
    "sweep_clusters",
    "distinct_cluster_sets",
]


@dataclass(frozen=True)
class ClusterSet:
    """A partition of object types."""

    clusters: frozenset[frozenset[str]] = frozenset()

    @classmethod
    def of(cls, groups: Iterable[Iterable[str]]) -> "ClusterSet":
        return cls(frozenset(frozenset(g) for g in groups))

    def __len__(self):
        return len(self.clusters)

    def __iter__(self):
        return iter(self.clusters)

    def members(self) -> set[str]:
        return set().union(*self.clusters) if self.clusters else set()

    def sorted(self) -> list[list[str]]:
        """Members sorted, groups ordered by their first member."""
        return sorted(sorted(c) for c in self.clusters)

    def refines(self, coarser: "ClusterSet") -> bool:
        """True if every cluster here lies inside some cluster of `coarser`."""
        return all(any(c <= d for d in coarser.clusters) for c in self.clusters)

    def cluster_of(self, otype: str) -> frozenset[str]:
        for c in self.clusters:
            if otype in c:
                return c
        raise KeyError(otype)

    def __str__(self):
        return "|".join("{" + ",".join(c) + "}" for c in self.sorted())


def _sim_source(m: MarkovDfm | SimilarityMatrix) -> SimilarityMatrix:
    return m.sim_matrix if isinstance(m, MarkovDfm) else m


def _check_threshold(threshold: float) -> None:
    if not (isinstance(threshold, (int, float)) and 0.0 <= threshold <= 1.0):
        raise ThresholdOutOfRange(f"threshold must lie in [0, 1], got {threshold!r}")


def discover_clusters(m: MarkovDfm | SimilarityMatrix, threshold: float,
                      pairs: Iterable[tuple[str, str]] | None = None) -> ClusterSet:
    """Merge object types whose similarity reaches `threshold`.

    Every pair, self-pairs included, is visited once; a qualifying pair
    replaces all clusters touching either type by their union.

    Parameters
    ----------
    m : MarkovDfm or SimilarityMatrix
    threshold : float
        In ``[0, 1]``.  The comparison is ``sim >= threshold``.
    pairs : iterable of (str, str), optional
        Visiting order.  Defaults to the upper triangle in type order; the
        result does not depend on it.
    """
    _check_threshold(threshold)
    sm = _sim_source(m)
    if pairs is None:
        pairs = combinations_with_replacement(sm.order, 2)
    index = {o: i for i, o in enumerate(sm.order)}
    values = sm.values
    clusters: set[frozenset[str]] = set()
    for a, b in pairs:
        if values[index[a], index[b]] >= threshold:
            touched = {c for c in clusters if a in c or b in c}
            clusters -= touched
            clusters.add(frozenset().union(*touched, (a, b)))
    return ClusterSet(frozenset(clusters))


def brute_force_clusters(m: MarkovDfm | SimilarityMatrix, threshold: float) -> ClusterSet:
    """Connected components of the thresholded similarity graph, by set expansion."""
    _check_threshold(threshold)
    sm = _sim_source(m)
    n = len(sm.order)
    adjacent = [[j for j in range(n) if sm.values[i, j] >= threshold or i == j]
                for i in range(n)]
    groups = []
    seen: set[int] = set()
    for start in range(n):
        if start in seen:
            continue
        component = {start}
        while True:
            grown = component.union(*(adjacent[i] for i in component))
            if grown == component:
                break
            component = grown
        seen |= component
        groups.append([sm.order[i] for i in component])
    return ClusterSet.of(groups)


@dataclass(frozen=True)
class TuningResult:
    """Cluster sets for every threshold the tuner evaluated, keyed by threshold."""

    entries: Mapping[float, ClusterSet] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(sorted(self.entries.items())))

    def thresholds(self) -> list[float]:
        return list(self.entries)

    def counts(self) -> dict[float, int]:
        return {t: len(c) for t, c in self.entries.items()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["threshold", "num_clusters", "clusters"])
        for t, cs in self.entries.items():
            w.writerow([f"{t:.2f}", len(cs), str(cs)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps([cluster_json(t, cs) for t, cs in self.entries.items()], indent=2)


def cluster_json(threshold: float, cs: ClusterSet) -> dict:
    return {"threshold": threshold, "clusters": cs.sorted()}


def tune_clusters(m: MarkovDfm | SimilarityMatrix, mode: str = "recursive") -> TuningResult:
    """Half-interval search for the thresholds at which the partition changes.

    Seeds the result with thresholds 0 and 1 and starts at 0.5.  At each
    evaluated threshold the nearest evaluated neighbours above and below are
    looked up; when a neighbour's cluster count differs, the midpoint
    (rounded half-up to two decimals) is evaluated next.  Already evaluated
    thresholds stop the search, so at most 101 thresholds are visited.

    ``mode="recursive"`` keeps bisecting from every new midpoint, which finds
    every cluster count reachable on the two-decimal grid; it skips the search
    entirely when thresholds 0 and 1 give the same count.  ``mode="literal"``
    always evaluates 0.5 and then each midpoint once, without descending
    further.
    """
    if mode not in ("recursive", "literal"):
        raise ValueError(f"unknown tuning mode {mode!r}")
    res: dict[int, ClusterSet] = {}

    def evaluate(k: int) -> ClusterSet:
        cs = res[k] = discover_clusters(m, k / 100)
        return cs

    def midpoint(a: int, b: int) -> int:
        return (a + b + 1) // 2

    def tune(k: int) -> None:
        if k in res:
            return
        ct = evaluate(k)
        upper = min(i for i in res if i > k)
        lower = max(i for i in res if i < k)
        if len(res[upper]) != len(ct):
            mid = midpoint(k, upper)
            if mode == "recursive":
                tune(mid)
            elif mid not in res:
                evaluate(mid)
        if len(res[lower]) != len(ct):
            mid = midpoint(k, lower)
            if mode == "recursive":
                tune(mid)
            elif mid not in res:
                evaluate(mid)

    lowest, highest = evaluate(0), evaluate(100)
    # counts are monotone in the threshold: equal ends leave nothing to find
    if mode == "literal" or len(lowest) != len(highest):
        tune(50)
    return TuningResult({k / 100: cs for k, cs in res.items()})


def sweep_clusters(m: MarkovDfm | SimilarityMatrix, step: int = 1) -> TuningResult:
    """Evaluate every two-decimal threshold (or every `step` hundredths)."""
    return TuningResult({k / 100: discover_clusters(m, k / 100) for k in range(0, 101, step)})


def distinct_cluster_sets(r: TuningResult) -> list[tuple[float, ClusterSet]]:
    """One (lowest threshold, partition) pair per distinct partition, ascending."""
    first: dict[ClusterSet, float] = {}
    for t, cs in r.entries.items():
        if cs not in first or t < first[cs]:
            first[cs] = t
    return sorted(((t, cs) for cs, t in first.items()), key=lambda x: x[0])
