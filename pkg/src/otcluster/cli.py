"""Command-line front end.

Exit codes: 0 success, 1 unparseable log, 2 I/O failure, 3 unknown object
type, 4 threshold outside [0, 1].
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from collections import Counter

from . import __version__
from .clustering import cluster_json, discover_clusters, distinct_cluster_sets, \
    tune_clusters
from .dfm import dfm_to_json, discover_dfm, export_dot, to_markov
from .errors import InvalidSpec, OcelParseError, ThresholdOutOfRange, UnknownObjectType
from .fixtures import FIXTURES, load_fixture
from .footprint import flatten, footprint_matrix
from .ocel_io import SyntheticSpec, generate_synthetic_log, parse_ocel, write_ocel

EXIT_PARSE, EXIT_IO, EXIT_TYPE, EXIT_THRESHOLD = 1, 2, 3, 4

FORMATS = {
    "info": ("text",),
    "dfm": ("dot", "json"),
    "sim": ("csv", "json"),
    "cluster": ("json", "csv"),
    "tune": ("csv", "json"),
    "flatten": ("csv",),
    "footprints": ("csv", "json"),
    "gen": ("json",),
}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load_log(args):
    if args.input is None:
        raise CliError("--input is required", EXIT_IO)
    try:
        data = _read_bytes(args.input)
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc}", EXIT_IO) from exc
    try:
        return parse_ocel(data)
    except OcelParseError as exc:
        raise CliError(f"{type(exc).__name__}: {exc}", EXIT_PARSE) from exc


def _write(args, text: str | bytes) -> None:
    data = text.encode("utf-8") if isinstance(text, str) else text
    if args.output in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    target = os.path.abspath(args.output)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".otcluster-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _types(args, log) -> list[str] | None:
    if not args.types:
        return None
    types = [t.strip() for t in args.types.split(",") if t.strip()]
    unknown = sorted(set(types) - set(log.object_types))
    if unknown:
        raise CliError(f"unknown object types: {', '.join(unknown)}", EXIT_TYPE)
    return types


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_info(args) -> None:
    log = _load_log(args)
    per_type = Counter(obj.otype for obj in log.objects.values())
    lines = [
        f"events: {len(log.events)}, objects: {len(log.objects)}, "
        f"object types: {len(log.object_types)}",
        f"activities: {len(log.activities)}",
    ]
    if log.events:
        stamps = [ev.timestamp for ev in log.events]
        lines.append(f"time span: {min(stamps).isoformat()} .. {max(stamps).isoformat()}")
    for otype in log.object_types:
        lines.append(f"  {otype}: {per_type.get(otype, 0)} objects")
    _write(args, "\n".join(lines) + "\n")


def cmd_dfm(args) -> None:
    log = _load_log(args)
    dfm = discover_dfm(log, _types(args, log))
    if args.format == "json":
        _write(args, dfm_to_json(dfm) + "\n")
    else:
        _write(args, export_dot(dfm, include_probabilities=args.probabilities))


def cmd_sim(args) -> None:
    log = _load_log(args)
    sm = to_markov(discover_dfm(log)).sim_matrix
    if args.format == "json":
        _write(args, json.dumps(sm.to_dict(), indent=2) + "\n")
    else:
        _write(args, _csv(sm.to_rows()))


def _threshold(args) -> float:
    if args.threshold is None:
        raise CliError("--threshold is required", EXIT_THRESHOLD)
    if not 0.0 <= args.threshold <= 1.0:
        raise CliError(f"threshold {args.threshold} is outside [0, 1]", EXIT_THRESHOLD)
    return args.threshold


def cmd_cluster(args) -> None:
    threshold = _threshold(args)
    log = _load_log(args)
    cs = discover_clusters(to_markov(discover_dfm(log)), threshold)
    if args.format == "csv":
        _write(args, _csv([["threshold", "num_clusters", "clusters"],
                           [f"{threshold:.2f}", len(cs), str(cs)]]))
    else:
        _write(args, json.dumps(cluster_json(threshold, cs), separators=(",", ":")) + "\n")


def cmd_tune(args) -> None:
    log = _load_log(args)
    result = tune_clusters(to_markov(discover_dfm(log)), mode=args.tune_mode)
    if args.format == "json":
        doc = {
            "mode": args.tune_mode,
            "entries": [cluster_json(t, cs) for t, cs in result.entries.items()],
            "distinct": [cluster_json(t, cs) for t, cs in distinct_cluster_sets(result)],
        }
        _write(args, json.dumps(doc, indent=2) + "\n")
    else:
        _write(args, result.to_csv())


def cmd_flatten(args) -> None:
    log = _load_log(args)
    types = _types(args, log) or list(log.object_types)
    _write(args, flatten(log, types).to_csv())


def cmd_footprints(args) -> None:
    log = _load_log(args)
    fm = footprint_matrix(log)
    if args.format == "json":
        _write(args, json.dumps(fm.to_dict(), indent=2) + "\n")
    else:
        _write(args, _csv(fm.to_rows(decimals=4)))


def cmd_gen(args) -> None:
    if args.input is not None:
        try:
            raw = json.loads(_read_bytes(args.input))
        except OSError as exc:
            raise CliError(f"cannot read {args.input}: {exc}", EXIT_IO) from exc
        except ValueError as exc:
            raise CliError(f"spec is not valid JSON: {exc}", EXIT_PARSE) from exc
        try:
            spec = SyntheticSpec.from_dict(raw)
            if args.seed is not None:
                spec = SyntheticSpec(spec.templates, seed=args.seed, extra_types=spec.extra_types)
            log = generate_synthetic_log(spec)
        except InvalidSpec as exc:
            raise CliError(str(exc), EXIT_PARSE) from exc
    else:
        log = load_fixture(args.fixture, args.seed or 0)
    _write(args, write_ocel(log) + b"\n")


COMMANDS = {
    "info": (cmd_info, "summarise a log"),
    "dfm": (cmd_dfm, "export the directly-follows multigraph"),
    "sim": (cmd_sim, "object-type similarity matrix"),
    "cluster": (cmd_cluster, "cluster object types at one threshold"),
    "tune": (cmd_tune, "search thresholds for all distinct partitions"),
    "flatten": (cmd_flatten, "flatten the log onto object types"),
    "footprints": (cmd_footprints, "footprint similarity between object types"),
    "gen": (cmd_gen, "write a built-in or synthetic log"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="otcluster", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (func, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("-i", "--input", help="JSON-OCEL log ('-' for stdin)")
        p.add_argument("-o", "--output", help="output file (default: stdout)")
        p.add_argument("--format", choices=FORMATS[name], default=FORMATS[name][0])
        if name in ("dfm", "flatten"):
            p.add_argument("--types", help="comma-separated object types")
        if name == "dfm":
            p.add_argument("--probabilities", action="store_true",
                           help="label DOT edges with transition probabilities")
        if name == "cluster":
            p.add_argument("--threshold", type=float)
        if name == "tune":
            p.add_argument("--tune-mode", choices=("recursive", "literal"), default="recursive")
        if name == "gen":
            p.add_argument("--fixture", choices=sorted(FIXTURES), default="running-example")
            p.add_argument("--seed", type=int)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"otcluster: {exc}", file=sys.stderr)
        return exc.code
    except UnknownObjectType as exc:
        print(f"otcluster: {exc}", file=sys.stderr)
        return EXIT_TYPE
    except ThresholdOutOfRange as exc:
        print(f"otcluster: {exc}", file=sys.stderr)
        return EXIT_THRESHOLD
    except OSError as exc:
        print(f"otcluster: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
