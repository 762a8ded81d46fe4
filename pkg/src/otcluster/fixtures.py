"""Built-in example logs.

``running-example``
    Three object types: orders ``o``, items ``i`` and packages ``p``, with
    tasks ``po`` (place order), ``ca`` (check availability), ``pi`` (pick
    item), ``sp`` (send package) and ``sr`` (store receipt).  Every order has
    two items; events touching an order usually touch one of its items too.
    Its DFM has eight relations with frequencies 3, 6, 3, 3, 6, 6, 3, 2.

``order-handling``
    Four object types (Item, Order, Package, Route) generated from trace
    templates.  Tuning it yields four distinct partitions.
"""
from __future__ import annotations

from datetime import datetime, timedelta, timezone

from .ocel_io import Event, ObjectInstance, OcelLog, SyntheticSpec, TraceTemplate, \
    generate_synthetic_log

__all__ = ["FIXTURES", "running_example_log", "running_example_spec",
           "order_handling_spec", "load_fixture"]

_START = datetime(2022, 1, 3, 9, 0, tzinfo=timezone.utc)


def running_example_log() -> OcelLog:
    objects = {}
    for oid, otype in ([(f"o{k}", "o") for k in (1, 2, 3)]
                       + [(f"i{k}", "i") for k in range(1, 7)]
                       + [("p1", "p"), ("p2", "p")]):
        objects[oid] = ObjectInstance(oid, otype)

    steps = []
    for k in (1, 2, 3):
        order, a, b = f"o{k}", f"i{2 * k - 1}", f"i{2 * k}"
        # order: po ca ca pi ca pi;  item a: po ca ca pi;  item b: po ca pi
        steps += [
            ("po", (order, a, b)),
            ("ca", (order, a)),
            ("ca", (order, a)),
            ("pi", (order, a)),
            ("ca", (order, b)),
            ("pi", (order, b)),
        ]
    for pkg in ("p1", "p2"):
        steps += [("sp", (pkg,)), ("sr", (pkg,))]

    events = tuple(
        Event(f"e{n}", act, _START + timedelta(minutes=15 * n), omap)
        for n, (act, omap) in enumerate(steps, 1)
    )
    return OcelLog(events, objects, frozenset({"o", "i", "p"}))


def running_example_spec(seed: int = 0) -> SyntheticSpec:
    """Same DFM as :func:`running_example_log`, but every event touches one object."""
    return SyntheticSpec(
        {
            "o": [TraceTemplate(("po", "ca", "ca", "pi", "ca", "pi"), 3)],
            "i": [TraceTemplate(("po", "ca", "ca", "pi"), 3),
                  TraceTemplate(("po", "ca", "pi"), 3)],
            "p": [TraceTemplate(("sp", "sr"), 2)],
        },
        seed=seed,
    )


def order_handling_spec(seed: int = 0) -> SyntheticSpec:
    """Items and orders behave alike, packages and routes behave alike.

    Similarities: Item/Order about 0.674, Package/Route about 0.567, and no
    cross pair above 0.154.  Tuning therefore reports partitions starting at
    thresholds 0, 0.16, 0.57 and 0.68.
    """
    po, ca, pi, sp = "place_order", "check_availability", "pick_item", "send_package"
    pd, fd, cp = "package_delivered", "failed_delivery", "create_package"
    return SyntheticSpec(
        {
            "Item": [
                TraceTemplate((po, ca, pi, sp, pd), 2),
                TraceTemplate((po, ca, ca, pi, sp), 1),
                TraceTemplate((po, ca, pi, pi, sp), 6),
                TraceTemplate((po, ca, pi, sp, "pay_order"), 1),
            ],
            "Order": [
                TraceTemplate((po, ca, pi, sp, "pay_order"), 5),
                TraceTemplate((po, ca, ca, pi, sp, "payment_reminder", "pay_order"), 8),
            ],
            "Package": [
                TraceTemplate((cp, sp, pd), 1),
                TraceTemplate((cp, sp, fd, pd), 12),
            ],
            "Route": [
                TraceTemplate((cp, sp, pd, "end_route"), 8),
                TraceTemplate(("start_route", sp, fd, pd, "end_route"), 1),
            ],
        },
        seed=seed,
    )


FIXTURES = {
    "running-example": lambda seed=0: running_example_log(),
    "running-example-synthetic": lambda seed=0: generate_synthetic_log(running_example_spec(seed)),
    "order-handling": lambda seed=0: generate_synthetic_log(order_handling_spec(seed)),
}


def load_fixture(name: str, seed: int = 0) -> OcelLog:
    try:
        return FIXTURES[name](seed)
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
