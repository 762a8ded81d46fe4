"""Reading, writing and generating JSON-OCEL event logs.

Only the JSON flavour of OCEL 1.0 is supported.  The parser keeps events in
document order; all downstream discovery relies on that order to break
timestamp ties, see :func:`ordered_events_for_object`.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from functools import cached_property
from typing import Any, Mapping, Sequence

from dateutil.parser import isoparse

from .errors import (
    BadTimestamp,
    DanglingObjectRef,
    DuplicateId,
    InvalidSpec,
    MalformedJson,
    MissingRequiredKey,
    UnknownObject,
    UnsupportedFormat,
)

__all__ = [
    "Event",
    "ObjectInstance",
    "OcelLog",
    "TraceTemplate",
    "SyntheticSpec",
    "parse_ocel",
    "read_ocel",
    "write_ocel",
    "ordered_events_for_object",
    "generate_synthetic_log",
]


@dataclass(frozen=True)
class Event:
    id: str
    activity: str
    timestamp: datetime
    omap: tuple[str, ...] = ()
    vmap: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.activity:
            raise MalformedJson(f"event {self.id!r} has an empty activity")
        if len(set(self.omap)) != len(self.omap):
            raise DuplicateId(f"event {self.id!r} references an object twice")


@dataclass(frozen=True)
class ObjectInstance:
    id: str
    otype: str
    ovmap: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.otype:
            raise MalformedJson(f"object {self.id!r} has an empty type")


@dataclass(frozen=True)
class OcelLog:
    """An object-centric event log.

    ``events`` keeps document order.  ``object_types`` is the union of the
    declared types and the types of the objects present in the log, so a type
    that never has two consecutive events is still clustered.
    """

    events: tuple[Event, ...] = ()
    objects: Mapping[str, ObjectInstance] = field(default_factory=dict)
    declared_object_types: frozenset[str] = frozenset()
    attribute_names: frozenset[str] = frozenset()
    version: str = "1.0"

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "declared_object_types", frozenset(self.declared_object_types))
        object.__setattr__(self, "attribute_names", frozenset(self.attribute_names))
        seen = set()
        for ev in self.events:
            if ev.id in seen:
                raise DuplicateId(f"duplicate event id {ev.id!r}")
            seen.add(ev.id)
            for oid in ev.omap:
                if oid not in self.objects:
                    raise DanglingObjectRef(
                        f"event {ev.id!r} references unknown object {oid!r}")
        for key, obj in self.objects.items():
            if key != obj.id:
                raise MalformedJson(f"object stored under {key!r} has id {obj.id!r}")

    @cached_property
    def object_types(self) -> tuple[str, ...]:
        types = set(self.declared_object_types)
        types.update(obj.otype for obj in self.objects.values())
        return tuple(sorted(types))

    @cached_property
    def activities(self) -> tuple[str, ...]:
        return tuple(sorted({ev.activity for ev in self.events}))

    @cached_property
    def _lifecycles(self) -> dict[str, tuple[int, ...]]:
        # object id -> event positions ordered by (timestamp, document order)
        positions: dict[str, list[int]] = {oid: [] for oid in self.objects}
        for i, ev in enumerate(self.events):
            for oid in ev.omap:
                positions[oid].append(i)
        events = self.events
        return {
            oid: tuple(sorted(idx, key=lambda i: (events[i].timestamp, i)))
            for oid, idx in positions.items()
        }

    def objects_of_type(self, otype: str) -> list[ObjectInstance]:
        return [obj for obj in self.objects.values() if obj.otype == otype]

    def ordered_events_for_object(self, object_id: str) -> list[Event]:
        try:
            idx = self._lifecycles[object_id]
        except KeyError:
            raise UnknownObject(f"unknown object {object_id!r}") from None
        return [self.events[i] for i in idx]


def ordered_events_for_object(log: OcelLog, object_id: str) -> list[Event]:
    """Events referencing `object_id`, sorted by timestamp.

    The sort is stable: events sharing a timestamp keep their document order.
    """
    return log.ordered_events_for_object(object_id)


# -- parsing -----------------------------------------------------------------

class _JsonObject(dict):
    duplicates: tuple[str, ...] = ()


def _pairs_hook(pairs):
    obj = _JsonObject(pairs)
    if len(obj) != len(pairs):
        seen, dups = set(), []
        for k, _ in pairs:
            if k in seen:
                dups.append(k)
            seen.add(k)
        obj.duplicates = tuple(dups)
    return obj


def _require(mapping: Mapping, key: str, where: str):
    try:
        return mapping[key]
    except KeyError:
        raise MissingRequiredKey(f"{where}: missing {key!r}") from None


def _expect(value, kind, what: str):
    if not isinstance(value, kind):
        raise MalformedJson(f"{what} must be a {getattr(kind, '__name__', kind)}")
    return value


def _parse_timestamp(value, event_id: str) -> datetime:
    if not isinstance(value, str):
        raise BadTimestamp(f"event {event_id!r}: timestamp must be a string")
    try:
        ts = isoparse(value)
        if ts.tzinfo is None:
            return ts.replace(tzinfo=timezone.utc)
        return ts.astimezone(timezone.utc)
    except (ValueError, OverflowError) as exc:
        raise BadTimestamp(f"event {event_id!r}: cannot parse {value!r}") from exc


def _string_list(value, what: str) -> list[str]:
    _expect(value, list, what)
    for item in value:
        _expect(item, str, f"entries of {what}")
    return value


def parse_ocel(data: bytes | str) -> OcelLog:
    """Parse a JSON-OCEL document.

    Parameters
    ----------
    data : bytes or str
        UTF-8 encoded JSON text.

    Returns
    -------
    OcelLog

    Raises
    ------
    MalformedJson, MissingRequiredKey, DanglingObjectRef, BadTimestamp,
    DuplicateId, UnsupportedFormat
        All derive from :class:`~otcluster.errors.OcelParseError`.
    """
    if isinstance(data, (bytes, bytearray, memoryview)):
        try:
            text = bytes(data).decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise MalformedJson(f"input is not UTF-8: {exc}") from exc
    else:
        text = data
    if text.lstrip().startswith("<"):
        raise UnsupportedFormat("XML-OCEL is not supported, convert the log to JSON-OCEL")
    try:
        doc = json.loads(text, object_pairs_hook=_pairs_hook)
    except (ValueError, RecursionError) as exc:
        raise MalformedJson(f"invalid JSON: {exc}") from exc
    _expect(doc, dict, "top-level document")

    glog = _expect(doc.get("ocel:global-log", {}), dict, "ocel:global-log")
    declared = _string_list(glog.get("ocel:object-types", []), "ocel:object-types")
    attr_names = _string_list(glog.get("ocel:attribute-names", []), "ocel:attribute-names")
    version = glog.get("ocel:version", "1.0")
    if not isinstance(version, str):
        version = str(version)

    raw_objects = _expect(_require(doc, "ocel:objects", "document"), dict, "ocel:objects")
    raw_events = _expect(_require(doc, "ocel:events", "document"), dict, "ocel:events")
    for name, raw in (("object", raw_objects), ("event", raw_events)):
        if raw.duplicates:
            raise DuplicateId(f"duplicate {name} id {raw.duplicates[0]!r}")

    objects = {}
    for oid, raw in raw_objects.items():
        _expect(raw, dict, f"object {oid!r}")
        otype = _expect(_require(raw, "ocel:type", f"object {oid!r}"), str, "ocel:type")
        ovmap = _expect(raw.get("ocel:ovmap", {}), dict, "ocel:ovmap")
        objects[oid] = ObjectInstance(oid, otype, dict(ovmap))

    events = []
    for eid, raw in raw_events.items():
        _expect(raw, dict, f"event {eid!r}")
        activity = _expect(
            _require(raw, "ocel:activity", f"event {eid!r}"), str, "ocel:activity")
        ts = _parse_timestamp(_require(raw, "ocel:timestamp", f"event {eid!r}"), eid)
        omap = _string_list(_require(raw, "ocel:omap", f"event {eid!r}"), "ocel:omap")
        vmap = _expect(raw.get("ocel:vmap", {}), dict, "ocel:vmap")
        # repeated references collapse to one
        omap = tuple(dict.fromkeys(omap))
        events.append(Event(eid, activity, ts, omap, dict(vmap)))

    return OcelLog(
        events=tuple(events),
        objects=objects,
        declared_object_types=frozenset(declared),
        attribute_names=frozenset(attr_names),
        version=version,
    )


def read_ocel(path) -> OcelLog:
    with open(path, "rb") as fh:
        return parse_ocel(fh.read())


def _format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).isoformat()


def write_ocel(log: OcelLog, indent: int | None = 1) -> bytes:
    """Serialize `log` to JSON-OCEL bytes.  Output is deterministic."""
    doc = {
        "ocel:global-log": {
            "ocel:version": log.version,
            "ocel:attribute-names": sorted(log.attribute_names),
            "ocel:object-types": sorted(log.declared_object_types),
        },
        "ocel:events": {
            ev.id: {
                "ocel:activity": ev.activity,
                "ocel:timestamp": _format_timestamp(ev.timestamp),
                "ocel:omap": list(ev.omap),
                "ocel:vmap": dict(ev.vmap),
            }
            for ev in log.events
        },
        "ocel:objects": {
            obj.id: {"ocel:type": obj.otype, "ocel:ovmap": dict(obj.ovmap)}
            for obj in log.objects.values()
        },
    }
    return json.dumps(doc, indent=indent, ensure_ascii=False).encode("utf-8")


# -- synthetic logs ----------------------------------------------------------

@dataclass(frozen=True)
class TraceTemplate:
    """`count` objects that all follow the activity sequence `activities`."""

    activities: tuple[str, ...]
    count: int = 1

    def __post_init__(self):
        object.__setattr__(self, "activities", tuple(self.activities))


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for :func:`generate_synthetic_log`.

    ``templates`` maps each object type to the trace templates of its objects.
    Types listed in ``extra_types`` are declared in the log but get no objects.
    """

    templates: Mapping[str, Sequence[TraceTemplate]]
    seed: int = 0
    start: datetime = datetime(2022, 1, 1, tzinfo=timezone.utc)
    extra_types: tuple[str, ...] = ()

    @classmethod
    def from_dict(cls, raw: Mapping) -> "SyntheticSpec":
        """Build a spec from its JSON form.

        ``{"seed": 1, "types": {"order": [{"activities": ["a", "b"], "count": 2}]},
        "extra_types": ["route"]}``
        """
        try:
            templates = {
                otype: [TraceTemplate(tuple(t["activities"]), int(t.get("count", 1)))
                        for t in tmpls]
                for otype, tmpls in raw["types"].items()
            }
            return cls(templates, seed=int(raw.get("seed", 0)),
                       extra_types=tuple(raw.get("extra_types", ())))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise InvalidSpec(f"bad synthetic spec: {exc}") from exc


def generate_synthetic_log(spec: SyntheticSpec) -> OcelLog:
    """Generate a log in which every object follows one of its type's templates.

    Each object starts at a random offset and advances by random gaps, so
    lifecycles of different objects interleave in time.  The result depends
    only on `spec` (including its seed).
    """
    if not spec.templates:
        raise InvalidSpec("at least one object type is required")
    for otype, tmpls in spec.templates.items():
        if not otype:
            raise InvalidSpec("object type names must be non-empty")
        if not tmpls:
            raise InvalidSpec(f"object type {otype!r} has no trace templates")
        for t in tmpls:
            if not t.activities or t.count < 0 or not all(t.activities):
                raise InvalidSpec(f"invalid template {t!r} for {otype!r}")

    rng = random.Random(spec.seed)
    objects = {}
    pending = []  # (timestamp, creation order, activity, object id)
    for otype, tmpls in spec.templates.items():
        n = 0
        for tmpl in tmpls:
            for _ in range(tmpl.count):
                n += 1
                oid = f"{otype}-{n}"
                objects[oid] = ObjectInstance(oid, otype)
                ts = spec.start + timedelta(seconds=rng.randrange(0, 86400))
                for act in tmpl.activities:
                    pending.append((ts, len(pending), act, oid))
                    ts += timedelta(seconds=rng.randint(60, 3600))
    pending.sort()
    events = tuple(
        Event(f"e{i}", act, ts, (oid,)) for i, (ts, _, act, oid) in enumerate(pending, 1)
    )
    return OcelLog(
        events=events,
        objects=objects,
        declared_object_types=frozenset(spec.templates) | frozenset(spec.extra_types),
    )
