"""Command-line front end: ``dimgroup <command> [map source] [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from . import __version__
from .bratteli import DEFAULT_LEVELS, DEFAULT_MAX_VERTICES, build_diagram, export, k0_sequence, stabilized_matrix
from .dimension import classify_module, ga_coordinates, is_simple
from .errors import BoundExceeded, DimgroupError, ValidationError
from .examples import EXAMPLES, example, preset
from .field import parse_element
from .linalg import charpoly
from .mapspec import MapSpec, load, map_to_json
from .maps import PwmMap
from .markov import condition_L, dynamics_verdict, to_dot
from .orbits import (
    DEFAULT_STEPS,
    EventuallyPeriodic,
    MarkovPartition,
    eventual_range,
    forward_orbit,
)
from .transfer import StepFunction, generator_intervals, transfer_power

REPORT_FORMAT = 1


# -- report builders --------------------------------------------------------


def orbit_section(m: PwmMap, bound: int, seeds: Sequence[Any] | None = None, threads: int = 1) -> dict:
    rep = forward_orbit(m, seeds if seeds is not None else m.partition, bound, threads=threads)
    rows = []
    for s, st in rep.status.items():
        row: dict[str, Any] = {"seed": str(s)}
        if isinstance(st, EventuallyPeriodic):
            row.update(status="eventually periodic", preperiod=st.preperiod, period=st.period)
        else:
            row.update(status="open", bound=st.bound)
        rows.append(row)
    return {
        "seeds": rows,
        "exhausted": rep.exhausted,
        "points": [str(x) for x in sorted(rep.points)] if rep.exhausted else len(rep.points),
    }


def markov_section(m: PwmMap, bound: int) -> dict:
    v = dynamics_verdict(m, bound)
    out: dict[str, Any] = {}
    if isinstance(v.markov, MarkovPartition):
        a = v.matrix
        out["partition"] = v.markov.to_json()
        out["matrix"] = a.row_strings()
        out["graph"] = v.graph.to_json()
        out["condition_L"] = condition_L(a)
    else:
        out["partition"] = {"detected": False, "bound": v.markov.bound}
    out["verdicts"] = v.to_json()
    return out


def presentation_section(m: PwmMap, bound: int) -> dict:
    cls = classify_module(m, bound)
    out: dict[str, Any] = {"summary": cls.summary(), "classification": cls.to_json()}
    if cls.presentation is not None:
        p = cls.presentation
        out["order_unit"] = [str(x) for x in ga_coordinates(p, p.order_unit)]
        out["charpoly"] = [str(c) for c in charpoly(p.action)] if p.rank else ["1"]
    out["simple"] = is_simple(m, bound).to_json()
    return out


def analyze_report(m: PwmMap, bound: int, threads: int = 1) -> dict:
    er = eventual_range(m, bound)
    out: dict[str, Any] = {
        "orbit": orbit_section(m, bound, threads=threads),
        "eventual_range": {
            "stabilized_at": er.stabilized_at,
            "range": er.final.to_json(),
        },
        "markov": markov_section(m, bound),
    }
    if er.stabilized:
        out["generators"] = [f"I({u}, {v})" for u, v in generator_intervals(m, bound)]
    out["dimension_group"] = presentation_section(m, bound)
    return out


def bratteli_section(m: PwmMap, levels: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> dict:
    d = build_diagram(m, levels, max_vertices)
    seq = k0_sequence(d)
    out = d.to_json()
    out["multiplicities"] = [list(d.multiplicities(n)) for n in range(d.depth + 1)]
    out["matrices"] = [[list(r) for r in mat] for mat in seq.matrices]
    stab = stabilized_matrix(d)
    if stab is not None:
        out["stabilized_matrix"] = [list(r) for r in stab]
        out["stabilized_charpoly"] = [str(c) for c in charpoly(stab)]
    return out


def parse_function(text: str) -> StepFunction:
    """``"lo,hi:coef; lo,hi:coef"`` (coefficient defaults to 1)."""
    pieces = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        span, _, coef = chunk.partition(":")
        parts = span.split(",")
        if len(parts) != 2:
            raise ValidationError(f"cannot read interval {span!r}; expected 'lo,hi'", "function")
        pieces.append((parse_element(parts[0]), parse_element(parts[1]), int(coef) if coef.strip() else 1))
    return StepFunction.from_pieces(pieces)


def transfer_section(m: PwmMap, f: StepFunction, steps: int) -> dict:
    out = []
    g = f
    for k in range(steps + 1):
        out.append({"k": k, "function": str(g)})
        if k < steps:
            g = transfer_power(m, g, 1)
    return {"iterates": out}


# -- rendering --------------------------------------------------------------


def _scalar(x: Any) -> str:
    return "none" if x is None else str(x)


def _is_matrix(value: Any) -> bool:
    return (
        isinstance(value, list)
        and bool(value)
        and all(isinstance(r, list) and all(not isinstance(x, (list, dict)) for x in r) for r in value)
    )


def _matrix(value: list) -> str:
    return "[" + "; ".join(" ".join(_scalar(x) for x in r) for r in value) + "]"


def _render(value: Any, indent: int, lines: list[str], key: str | None = None) -> None:
    pad = "  " * indent
    head = f"{pad}{key}: " if key is not None else pad
    if isinstance(value, dict):
        if value and set(value) >= {"value"} and set(value) <= {"value", "reason", "bound", "level"}:
            v = value["value"]
            label = "Unknown" if v is None else str(v)
            extra = [value[k] for k in ("reason",) if k in value]
            if "bound" in value and v is None:
                extra.append(f"bound {value['bound']}")
            lines.append(head + label + (f" ({'; '.join(map(str, extra))})" if extra else ""))
            return
        if not value:
            lines.append(head + "(none)")
            return
        if key is not None:
            lines.append(f"{pad}{key}:")
            indent += 1
        for k, v in value.items():
            _render(v, indent, lines, k)
    elif _is_matrix(value):
        lines.append(head + _matrix(value))
    elif isinstance(value, list) and value and all(isinstance(x, (dict, list)) for x in value):
        lines.append(f"{pad}{key}:" if key is not None else pad.rstrip())
        for item in value:
            if _is_matrix(item):
                lines.append("  " * (indent + 1) + "- " + _matrix(item))
                continue
            sub: list[str] = []
            _render(item, indent + 2, sub)
            if sub:
                sub[0] = "  " * (indent + 1) + "- " + sub[0].lstrip()
            lines.extend(sub)
    elif isinstance(value, list):
        lines.append(head + (", ".join(_scalar(x) for x in value) if value else "(none)"))
    else:
        lines.append(head + _scalar(value))


def render_text(report: dict) -> str:
    lines = [f"dimgroup report v{report['format_version']}", f"command: {report['command']}"]
    body = {k: v for k, v in report.items() if k not in ("format_version", "tool_version", "command")}
    _render(body, 0, lines)
    return "\n".join(lines) + "\n"


def _has_unknown(obj: Any) -> bool:
    if isinstance(obj, dict):
        if "value" in obj and obj["value"] is None:
            return True
        if obj.get("tag") == "Unknown" or obj.get("detected") is False:
            return True
        return any(_has_unknown(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_has_unknown(v) for v in obj)
    return False


# -- argument handling ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dimgroup",
        description="Exact invariants of piecewise monotone interval maps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("mapfile", nargs="?", help="JSON or TOML map description")
    src.add_argument("--preset", help="tent:S, restricted_tent:S or interval_exchange[:L1,L2;P1,P2]")
    src.add_argument("--example", choices=sorted(EXAMPLES), help="a named built-in map")
    common.add_argument("--bound", type=int, help=f"orbit step budget (default {DEFAULT_STEPS})")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--strict", action="store_true", help="exit 3 when any verdict is Unknown")
    common.add_argument("--threads", type=int, default=1, help="worker threads for orbit expansion")

    sub.add_parser("analyze", parents=[common], help="full pipeline report")
    p = sub.add_parser("orbit", parents=[common], help="forward orbit of the partition")
    p.add_argument("--seeds", help="comma-separated seed points (default: the partition)")
    p = sub.add_parser("markov", parents=[common], help="Markov partition, matrix and verdicts")
    p.add_argument("--dot", action="store_true", help="emit the transition graph in DOT")
    p = sub.add_parser("transfer", parents=[common], help="iterate the transfer operator")
    p.add_argument("--function", required=True, help="'lo,hi:coef; ...' sum of interval indicators")
    p.add_argument("--steps", type=int, default=1, help="number of applications (default 1)")
    sub.add_parser("dimgroup", parents=[common], help="dimension group presentation")
    sub.add_parser("classify", parents=[common], help="module classification")
    p = sub.add_parser("bratteli", parents=[common], help="K0 diagram")
    p.add_argument("--levels", type=int, help=f"number of levels (default {DEFAULT_LEVELS})")
    p.add_argument("--format", choices=("dot", "json", "text"), default="text")
    p.add_argument("--output", help="write the diagram to this file")
    p.add_argument(
        "--max-vertices", type=int, default=DEFAULT_MAX_VERTICES, help="abort beyond this many vertices"
    )
    return parser


def _map_from_args(args: argparse.Namespace) -> MapSpec:
    if args.example:
        return MapSpec(example(args.example))
    if args.preset:
        return MapSpec(preset(args.preset))
    return load(args.mapfile)


def build_report(args: argparse.Namespace, spec: MapSpec) -> dict | str:
    m = spec.map
    bound = args.bound or int(spec.options.get("bound", DEFAULT_STEPS))
    report: dict[str, Any] = {
        "format_version": REPORT_FORMAT,
        "tool_version": __version__,
        "command": args.command,
        "map": map_to_json(m),
    }
    cmd = args.command
    if cmd == "analyze":
        report.update(analyze_report(m, bound, args.threads))
    elif cmd == "orbit":
        seeds = [parse_element(s) for s in args.seeds.split(",")] if args.seeds else None
        report["orbit"] = orbit_section(m, bound, seeds, args.threads)
    elif cmd == "markov":
        sec = markov_section(m, bound)
        if args.dot:
            v = dynamics_verdict(m, bound)
            if v.matrix is None:
                raise ValidationError("no Markov partition found; nothing to draw", "markov")
            return to_dot(v.matrix)
        report["markov"] = sec
    elif cmd == "transfer":
        report["transfer"] = transfer_section(m, parse_function(args.function), args.steps)
    elif cmd == "dimgroup":
        report["dimension_group"] = presentation_section(m, bound)
    elif cmd == "classify":
        cls = classify_module(m, bound)
        report["summary"] = cls.summary()
        report["classification"] = cls.to_json()
    elif cmd == "bratteli":
        levels = args.levels if args.levels is not None else int(spec.options.get("levels", DEFAULT_LEVELS))
        if args.format in ("dot", "json") and not args.json:
            return export(build_diagram(m, levels, args.max_vertices), args.format)
        report["bratteli"] = bratteli_section(m, levels, args.max_vertices)
    return report


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = _map_from_args(args)
        report = build_report(args, spec)
    except ValidationError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except BoundExceeded as exc:
        print(f"error: {exc}", file=err)
        return 3 if args.strict else 1
    except DimgroupError as exc:
        print(f"error: {exc}", file=err)
        return 1
    if isinstance(report, str):
        text = report
    elif args.json:
        text = json.dumps(report, indent=2) + "\n"
    else:
        text = render_text(report)
    target = getattr(args, "output", None)
    if target:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    if args.strict and not isinstance(report, str) and _has_unknown(report):
        return 3
    return 0


def main() -> None:
    sys.exit(run())
