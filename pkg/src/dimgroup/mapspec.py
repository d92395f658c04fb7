"""Map-description files (JSON or TOML) and their conversion to maps.

Accepted keys::

    field = "sqrt(2)"                 # optional; "Q" for the rationals
    partition = ["0", "1/2", "1"]
    branches = [["2", "0"], ["-2", "2"]]        # or tables {slope, intercept}
    nodes = {x = [...], y = [...]}     # alternative: continuous interpolation
    preset = "restricted_tent:sqrt(2)"
    example = "three_fold"

    [options]
    bound = 10000
    levels = 8
"""

from __future__ import annotations

import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ParseError, ValidationError
from .examples import example, preset
from .field import FieldDescriptor, as_element, parse_element, sqrt
from .maps import Branch, PwmMap, make_from_nodes

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass
class MapSpec:
    map: PwmMap
    options: dict[str, Any] = field(default_factory=dict)


_TOML_POS = re.compile(r"line (\d+), column (\d+)")


def load(path: str | Path) -> MapSpec:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {p}: {exc.strerror}", "file") from None
    return loads(text, "toml" if p.suffix.lower() == ".toml" else "json")


def loads(text: str, fmt: str = "json") -> MapSpec:
    if fmt == "toml":
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            line, col = getattr(exc, "lineno", None), getattr(exc, "colno", None)
            if line is None:
                pos = _TOML_POS.search(str(exc))
                line, col = (int(pos.group(1)), int(pos.group(2))) if pos else (None, None)
            raise ParseError(f"invalid TOML: {str(exc).split(' (at')[0]}", line, col) from None
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ValidationError("a map description must be a table/object", "schema")
    try:
        return from_dict(data)
    except ParseError as exc:
        raise _locate(exc, text) from None


def _locate(exc: ParseError, text: str) -> ParseError:
    """Re-anchor an error inside a quoted number to its position in the whole file."""
    if exc.source is None:
        return exc
    at = text.find(json.dumps(exc.source))
    if at < 0:
        return exc
    line = text.count("\n", 0, at) + 1
    column = at - (text.rfind("\n", 0, at) + 1) + 1 + (exc.column or 1)
    return ParseError(exc.detail, line, column, exc.source)


def _descriptor(raw: Any) -> FieldDescriptor:
    if raw in (None, "Q", "QQ", "rational", 1):
        return FieldDescriptor(1)
    if isinstance(raw, int):
        return FieldDescriptor(raw)
    if isinstance(raw, str):
        m = re.fullmatch(r"\s*(?:Q\()?\s*sqrt\(?\s*(\d+)\s*\)?\s*\)?\s*", raw)
        if m:
            r = sqrt(int(m.group(1)))
            return FieldDescriptor(r.d if not r.is_rational else 1)
    raise ValidationError(f"unrecognised field descriptor {raw!r}", "field")


def _num(x: Any):
    if isinstance(x, bool):
        raise ValidationError(f"{x!r} is not a number", "number")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return parse_element(x)
    raise ValidationError(f"numbers must be integers or strings, got {x!r}", "number")


def _branch(entry: Any) -> Branch:
    if isinstance(entry, dict):
        try:
            return Branch(_as(entry["slope"]), _as(entry["intercept"]))
        except KeyError as exc:
            raise ValidationError(f"branch entry missing {exc.args[0]!r}", "schema") from None
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return Branch(_as(entry[0]), _as(entry[1]))
    raise ValidationError(f"cannot read branch {entry!r}", "schema")


def _as(x: Any):
    return as_element(_num(x))


def from_dict(data: dict[str, Any]) -> MapSpec:
    options = dict(data.get("options", {}))
    sources = [k for k in ("example", "preset", "partition", "nodes") if k in data]
    if len(sources) != 1:
        raise ValidationError(
            "give exactly one of example, preset, partition/branches or nodes", "schema"
        )
    kind = sources[0]
    if kind == "example":
        m = example(str(data["example"]))
    elif kind == "preset":
        m = _preset(data["preset"])
    elif kind == "partition":
        if "branches" not in data:
            raise ValidationError("partition given without branches", "schema")
        m = PwmMap(
            [_num(x) for x in data["partition"]],
            [_branch(b) for b in data["branches"]],
            name=data.get("name"),
        )
    else:
        nodes = data["nodes"]
        m = make_from_nodes([_num(x) for x in nodes["x"]], [_num(y) for y in nodes["y"]], data.get("name"))
    declared = _descriptor(data.get("field"))
    if m.field.d != 1 and m.field != declared:
        raise ValidationError(f"map lives in {m.field} but the file declares {declared}", "field")
    return MapSpec(m, options)


def _preset(raw: Any) -> PwmMap:
    if isinstance(raw, str):
        return preset(raw)
    if isinstance(raw, dict) and len(raw) == 1:
        (kind, arg), = raw.items()
        if kind == "interval_exchange" and isinstance(arg, dict):
            lens = ",".join(str(x) for x in arg["lengths"])
            perm = ",".join(str(x) for x in arg.get("permutation", []))
            return preset(f"interval_exchange:{lens};{perm}" if perm else f"interval_exchange:{lens}")
        return preset(f"{kind}:{arg}")
    raise ValidationError(f"cannot read preset {raw!r}", "schema")


def map_to_json(m: PwmMap) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if m.name:
        out["name"] = m.name
    out["field"] = str(m.field)
    out["partition"] = [str(x) for x in m.partition]
    out["branches"] = [{"slope": str(b.slope), "intercept": str(b.intercept)} for b in m.branches]
    return out
