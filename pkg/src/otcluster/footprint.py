"""Flattening an object-centric log onto object types, and footprint comparison.

A flattened log treats every selected object as a classic case.  Events that
reference several selected objects are copied into each of their cases.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime
from enum import IntEnum
from typing import Iterable, Mapping

import numpy as np

from .dfm import SimilarityMatrix
from .errors import EmptyLog, EmptyTypeSet, UnknownObjectType
from .ocel_io import OcelLog

__all__ = [
    "FlattenedLog",
    "Footprint",
    "Relation",
    "flatten",
    "footprint_of",
    "footprint_similarity",
    "footprint_matrix",
]


@dataclass(frozen=True)
class FlattenedLog:
    cases: Mapping[str, tuple[str, ...]]
    source_types: frozenset[str]
    timestamps: Mapping[str, tuple[datetime, ...]] = field(default_factory=dict)

    def __len__(self):
        return len(self.cases)

    def to_csv(self) -> str:
        """``case_id,activity,timestamp,position`` rows sorted by case, then position."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case_id", "activity", "timestamp", "position"])
        for case in sorted(self.cases):
            stamps = self.timestamps.get(case, ())
            for pos, act in enumerate(self.cases[case]):
                ts = stamps[pos].isoformat() if pos < len(stamps) else ""
                w.writerow([case, act, ts, pos])
        return buf.getvalue()


def flatten(log: OcelLog, types: Iterable[str]) -> FlattenedLog:
    """One case per object of the selected types that occurs in at least one event."""
    types = frozenset(types)
    if not types:
        raise EmptyTypeSet("flattening needs at least one object type")
    unknown = types - set(log.object_types)
    if unknown:
        raise UnknownObjectType(f"unknown object types {sorted(unknown)}")
    cases, stamps = {}, {}
    for obj in log.objects.values():
        if obj.otype not in types:
            continue
        events = log.ordered_events_for_object(obj.id)
        if events:
            cases[obj.id] = tuple(ev.activity for ev in events)
            stamps[obj.id] = tuple(ev.timestamp for ev in events)
    return FlattenedLog(cases, types, stamps)


class Relation(IntEnum):
    UNRELATED = 0
    CAUSAL = 1
    INVERSE = 2
    PARALLEL = 3

    @property
    def symbol(self) -> str:
        return {0: "#", 1: "->", 2: "<-", 3: "||"}[self.value]


@dataclass(frozen=True)
class Footprint:
    """Activity-pair relations derived from the directly-follows pairs of a log.

    ``relations[i, j]`` holds a :class:`Relation` code for
    ``(activities[i], activities[j])``.
    """

    activities: tuple[str, ...]
    relations: np.ndarray

    @classmethod
    def from_pairs(cls, activities: Iterable[str], follows: set[tuple[str, str]]) -> "Footprint":
        acts = tuple(sorted(set(activities)))
        index = {a: i for i, a in enumerate(acts)}
        df = np.zeros((len(acts), len(acts)), dtype=bool)
        for a, b in follows:
            df[index[a], index[b]] = True
        rel = np.full(df.shape, Relation.UNRELATED, dtype=np.int8)
        rel[df & ~df.T] = Relation.CAUSAL
        rel[~df & df.T] = Relation.INVERSE
        rel[df & df.T] = Relation.PARALLEL
        return cls(acts, rel)

    def relation(self, a: str, b: str) -> Relation:
        """Relation between `a` and `b`; activities outside the alphabet are unrelated."""
        try:
            i, j = self.activities.index(a), self.activities.index(b)
        except ValueError:
            return Relation.UNRELATED
        return Relation(int(self.relations[i, j]))

    def extended(self, activities: tuple[str, ...]) -> np.ndarray:
        """Relation codes over a superset alphabet, padding with UNRELATED."""
        index = [activities.index(a) for a in self.activities]
        out = np.full((len(activities), len(activities)), Relation.UNRELATED, dtype=np.int8)
        out[np.ix_(index, index)] = self.relations
        return out

    def table(self) -> list[list[str]]:
        rows = [[""] + list(self.activities)]
        for a, row in zip(self.activities, self.relations):
            rows.append([a] + [Relation(int(x)).symbol for x in row])
        return rows


def footprint_of(flat: FlattenedLog) -> Footprint:
    if not flat.cases:
        raise EmptyLog("cannot compute the footprint of an empty log")
    activities = set()
    follows = set()
    for trace in flat.cases.values():
        activities.update(trace)
        follows.update(zip(trace, trace[1:]))
    return Footprint.from_pairs(activities, follows)


def footprint_similarity(fp1: Footprint, fp2: Footprint) -> float:
    """Share of cells on which two footprints agree, over the joint alphabet."""
    acts = tuple(sorted(set(fp1.activities) | set(fp2.activities)))
    if not acts:
        return 1.0
    differ = np.count_nonzero(fp1.extended(acts) != fp2.extended(acts))
    return 1.0 - differ / len(acts) ** 2


_EMPTY = Footprint((), np.zeros((0, 0), dtype=np.int8))


def footprint_matrix(log: OcelLog) -> SimilarityMatrix:
    """Footprint similarity of every pair of object types, each flattened on its own.

    Types without events get an empty footprint.
    """
    order = log.object_types
    prints = []
    for otype in order:
        flat = flatten(log, [otype])
        prints.append(footprint_of(flat) if flat.cases else _EMPTY)
    n = len(order)
    values = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = footprint_similarity(prints[i], prints[j])
    return SimilarityMatrix(order, values)
