"""Directly-follows multigraphs, their Markov form and object-type similarity.

A DFM relation ``(source, otype, target)`` counts how often an object of type
``otype`` went straight from activity ``source`` to activity ``target``.
Normalising the outgoing frequencies of every ``(source, otype)`` turns the
DFM into one transition matrix per object type; two object types are similar
when their transition matrices overlap.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import UnknownObjectType, UnknownTask
from .ocel_io import OcelLog

__all__ = [
    "Dfm",
    "MarkovDfm",
    "SimilarityMatrix",
    "discover_dfm",
    "preset",
    "postset",
    "to_markov",
    "pairwise_similarity",
    "similarity_matrix",
    "export_dot",
    "dfm_to_json",
]

Relation = tuple[str, str, str]

# Fixed edge palette; colour i goes to the i-th object type in sorted order.
PALETTE = (
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173",
)


@dataclass(frozen=True)
class Dfm:
    object_types: tuple[str, ...] = ()
    tasks: tuple[str, ...] = ()
    freq: Mapping[Relation, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "object_types", tuple(sorted(set(self.object_types))))
        object.__setattr__(self, "tasks", tuple(sorted(set(self.tasks))))
        types, tasks = set(self.object_types), set(self.tasks)
        for (src, otype, tgt), n in self.freq.items():
            if src not in tasks or tgt not in tasks:
                raise UnknownTask(f"relation {(src, otype, tgt)} uses an unknown task")
            if otype not in types:
                raise UnknownObjectType(f"relation {(src, otype, tgt)} uses unknown type")
            if n < 1:
                raise ValueError(f"relation {(src, otype, tgt)} has frequency {n} < 1")

    @property
    def relations(self) -> list[Relation]:
        return sorted(self.freq)

    def relations_of(self, otype: str) -> dict[tuple[str, str], int]:
        return {(s, t): n for (s, o, t), n in self.freq.items() if o == otype}

    def restrict(self, types: Iterable[str]) -> "Dfm":
        """Sub-multigraph keeping only the relations of `types`."""
        keep = set(types)
        unknown = keep - set(self.object_types)
        if unknown:
            raise UnknownObjectType(f"unknown object types {sorted(unknown)}")
        freq = {r: n for r, n in self.freq.items() if r[1] in keep}
        tasks = {r[0] for r in freq} | {r[2] for r in freq}
        return Dfm(tuple(keep), tuple(tasks), freq)


def discover_dfm(log: OcelLog, types: Iterable[str] | None = None) -> Dfm:
    """Count directly-follows pairs along every object's lifecycle.

    If `types` is given, only objects of those types are followed and the
    task set shrinks to the activities those objects touch.
    """
    if types is None:
        object_types = log.object_types
        tasks = set(log.activities)
    else:
        object_types = tuple(types)
        unknown = set(object_types) - set(log.object_types)
        if unknown:
            raise UnknownObjectType(f"unknown object types {sorted(unknown)}")
        tasks = set()
    selected = set(object_types)
    freq: Counter = Counter()
    for obj in log.objects.values():
        if obj.otype not in selected:
            continue
        trace = [ev.activity for ev in log.ordered_events_for_object(obj.id)]
        if types is not None:
            tasks.update(trace)
        for a, b in zip(trace, trace[1:]):
            freq[a, obj.otype, b] += 1
    return Dfm(object_types, tuple(tasks), dict(freq))


def _check(dfm: Dfm, t: str, thetas: Iterable[str]) -> set[str]:
    if t not in dfm.tasks:
        raise UnknownTask(f"unknown task {t!r}")
    thetas = set(thetas)
    unknown = thetas - set(dfm.object_types)
    if unknown:
        raise UnknownObjectType(f"unknown object types {sorted(unknown)}")
    return thetas


def preset(dfm: Dfm, t: str, thetas: Iterable[str]) -> set[str]:
    """Tasks with a relation into `t` for any type in `thetas`."""
    thetas = _check(dfm, t, thetas)
    return {s for (s, o, tgt) in dfm.freq if tgt == t and o in thetas}


def postset(dfm: Dfm, t: str, thetas: Iterable[str]) -> set[str]:
    """Tasks reached by a relation out of `t` for any type in `thetas`."""
    thetas = _check(dfm, t, thetas)
    return {tgt for (s, o, tgt) in dfm.freq if s == t and o in thetas}


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric matrix of object-type similarities with a unit diagonal."""

    order: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        values = np.asarray(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        n = len(self.order)
        if values.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got {values.shape}")

    def __getitem__(self, pair: tuple[str, str]) -> float:
        a, b = pair
        try:
            return float(self.values[self.order.index(a), self.order.index(b)])
        except ValueError:
            raise UnknownObjectType(f"unknown object type in {pair!r}") from None

    def __len__(self):
        return len(self.order)

    def rounded(self, decimals: int = 2) -> np.ndarray:
        return np.round(self.values, decimals)

    def to_rows(self, decimals: int | None = None) -> list[list[str]]:
        """Header row plus one row per type, ready for :mod:`csv`."""
        fmt = repr if decimals is None else (lambda x: f"{x:.{decimals}f}")
        rows = [[""] + list(self.order)]
        for name, row in zip(self.order, self.values):
            rows.append([name] + [fmt(float(x)) for x in row])
        return rows

    def to_dict(self) -> dict:
        return {"order": list(self.order), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, raw: Mapping) -> "SimilarityMatrix":
        return cls(tuple(raw["order"]), np.array(raw["values"], dtype=float))


@dataclass(frozen=True)
class MarkovDfm:
    dfm: Dfm
    prob: Mapping[Relation, float]
    sim_matrix: SimilarityMatrix

    @property
    def object_types(self) -> tuple[str, ...]:
        return self.dfm.object_types

    def sim(self, theta1: str, theta2: str) -> float:
        return self.sim_matrix[theta1, theta2]

    def probability_matrix(self, otype: str) -> np.ndarray:
        """Dense transition matrix of `otype`; rows are sources, columns targets,
        both in ``dfm.tasks`` order.  Rows without outgoing relations are zero."""
        if otype not in self.dfm.object_types:
            raise UnknownObjectType(f"unknown object type {otype!r}")
        index = {t: i for i, t in enumerate(self.dfm.tasks)}
        mat = np.zeros((len(index), len(index)))
        for (s, o, t), p in self.prob.items():
            if o == otype:
                mat[index[s], index[t]] = p
        return mat


def _probabilities(dfm: Dfm) -> dict[Relation, float]:
    out_total: Counter = Counter()
    for (s, o, _), n in dfm.freq.items():
        out_total[s, o] += n
    return {(s, o, t): n / out_total[s, o] for (s, o, t), n in dfm.freq.items()}


def _by_type(prob: Mapping[Relation, float]) -> dict[str, dict[tuple[str, str], float]]:
    out: dict[str, dict[tuple[str, str], float]] = {}
    for (s, o, t), p in prob.items():
        out.setdefault(o, {})[s, t] = p
    return out


def _similarity(p1: Mapping[tuple[str, str], float],
                p2: Mapping[tuple[str, str], float]) -> float:
    # fsum is correctly rounded, so the result does not depend on key order;
    # identical matrices give numerator == denominator bit for bit.
    num = math.fsum(p * p2[k] for k, p in p1.items() if k in p2)
    den = (math.fsum(p * p for p in p1.values()) + math.fsum(p * p for p in p2.values())) / 2
    if den == 0.0:
        return 0.0
    return min(1.0, num / den)


def _sim_matrix(dfm: Dfm, prob: Mapping[Relation, float]) -> SimilarityMatrix:
    per_type = _by_type(prob)
    order = dfm.object_types
    values = np.eye(len(order))
    for i, j in combinations(range(len(order)), 2):
        s = _similarity(per_type.get(order[i], {}), per_type.get(order[j], {}))
        values[i, j] = values[j, i] = s
    return SimilarityMatrix(order, values)


def to_markov(dfm: Dfm) -> MarkovDfm:
    """Normalise outgoing frequencies per (source, type) and fill the similarity matrix."""
    prob = _probabilities(dfm)
    return MarkovDfm(dfm, prob, _sim_matrix(dfm, prob))


def pairwise_similarity(m: MarkovDfm, theta1: str, theta2: str) -> float:
    """Overlap of two types' transition matrices.

    The sum of element-wise products divided by the mean of the two sums of
    squares.  A type is always fully similar to itself; two distinct types
    without any relation have similarity 0.
    """
    for theta in (theta1, theta2):
        if theta not in m.dfm.object_types:
            raise UnknownObjectType(f"unknown object type {theta!r}")
    if theta1 == theta2:
        return 1.0
    per_type = _by_type(m.prob)
    return _similarity(per_type.get(theta1, {}), per_type.get(theta2, {}))


def similarity_matrix(m: MarkovDfm) -> SimilarityMatrix:
    return m.sim_matrix


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(dfm: Dfm | MarkovDfm, include_probabilities: bool = False) -> str:
    """Render a DFM as a Graphviz digraph, one coloured edge per relation.

    Edges carry ``f=<frequency>`` and, when requested, ``p=<probability>``
    rounded to two decimals.  Output is sorted and therefore stable.
    """
    if isinstance(dfm, MarkovDfm):
        markov, dfm = dfm, dfm.dfm
    else:
        markov = to_markov(dfm) if include_probabilities else None
    if not dfm.tasks and not dfm.freq:
        return "digraph dfm { }\n"
    colors = {o: PALETTE[i % len(PALETTE)] for i, o in enumerate(dfm.object_types)}
    lines = ["digraph dfm {", "  rankdir=LR;", "  node [shape=box, style=rounded];"]
    for t in dfm.tasks:
        lines.append(f"  {_quote(t)};")
    for (s, o, t) in dfm.relations:
        label = f"f={dfm.freq[s, o, t]}"
        if include_probabilities:
            label += f" p={markov.prob[s, o, t]:.2f}"
        lines.append(
            f"  {_quote(s)} -> {_quote(t)} "
            f"[label={_quote(label)}, color={_quote(colors[o])}, "
            f"fontcolor={_quote(colors[o])}, tooltip={_quote(o)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def dfm_to_json(dfm: Dfm | MarkovDfm) -> str:
    if isinstance(dfm, MarkovDfm):
        prob, dfm = dfm.prob, dfm.dfm
    else:
        prob = _probabilities(dfm)
    doc = {
        "object_types": list(dfm.object_types),
        "tasks": list(dfm.tasks),
        "relations": [
            {"source": s, "otype": o, "target": t, "freq": dfm.freq[s, o, t],
             "prob": prob[s, o, t]}
            for (s, o, t) in dfm.relations
        ],
    }
    return json.dumps(doc, indent=2)


def dfm_from_json(text: str) -> Dfm:
    doc = json.loads(text)
    freq = {(r["source"], r["otype"], r["target"]): int(r["freq"]) for r in doc["relations"]}
    return Dfm(tuple(doc["object_types"]), tuple(doc["tasks"]), freq)
