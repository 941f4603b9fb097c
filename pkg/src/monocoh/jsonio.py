"""JSON interchange for monoids, modules, cochains and report objects.

Formats:

  monoid   {"elements": [names...], "table": [[indices]], "identity": i}
  module   {"free_rank": r, "torsion": [d...], "action": {name: [[row]...]}}
  cochain  {"degree": n, "values": [[coeff vector]...]}  (row-major slots)
  page     {"r": r, "entries": {"p,q": {"free_rank": r, "invariant_factors": [...]}}}
"""

from __future__ import annotations

import json

from .abelian import FgAbelianGroup, IntMatrix
from .cochains import Cochain
from .modules import GModule
from .monoids import FiniteMonoid, build_monoid


class FormatError(Exception):
    pass


def monoid_to_json(monoid: FiniteMonoid) -> dict:
    return {
        "elements": list(monoid.names),
        "table": [list(row) for row in monoid.table],
        "identity": monoid.identity,
    }


def monoid_from_json(data: dict) -> FiniteMonoid:
    try:
        table = data["table"]
        identity = data["identity"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"monoid object needs 'table' and 'identity': {exc}")
    names = data.get("elements")
    if names is not None and len(names) != len(table):
        raise FormatError("'elements' must name every row of the table")
    return build_monoid(table, identity, names)


def group_to_json(group: FgAbelianGroup) -> dict:
    free, invs = group.canonical
    return {"free_rank": free, "invariant_factors": list(invs)}


def module_to_json(module: GModule) -> dict:
    free, invs = module.carrier.canonical
    return {
        "free_rank": free,
        "torsion": list(invs),
        "action": {
            module.monoid.names[g]: module.action[g].to_rows()
            for g in range(module.monoid.size)
        },
    }


def module_from_json(data: dict, monoid: FiniteMonoid) -> GModule:
    try:
        free = int(data.get("free_rank", 0))
        torsion = [int(d) for d in data.get("torsion", [])]
        action_spec = data["action"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"module object needs 'action' and shape fields: {exc}")
    carrier = FgAbelianGroup.from_invariants(torsion, free_rank=free)
    name_index = {name: i for i, name in enumerate(monoid.names)}
    action = {}
    for name, rows in action_spec.items():
        if name not in name_index:
            raise FormatError(
                f"unknown element name {name!r}; expected one of {list(monoid.names)}"
            )
        action[name_index[name]] = IntMatrix.from_rows(rows)
    missing = [monoid.names[g] for g in range(monoid.size) if g not in action]
    if missing:
        raise FormatError(f"action missing for elements: {missing}")
    return GModule(monoid, carrier, action)


def cochain_to_json(f: Cochain) -> dict:
    return {"degree": f.degree, "values": [list(v) for v in f.values]}


def cochain_from_json(data: dict, module: GModule) -> Cochain:
    from .cochains import cochain_from_table

    try:
        degree = int(data["degree"])
        values = [tuple(int(x) for x in v) for v in data["values"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"cochain object needs 'degree' and 'values': {exc}")
    return cochain_from_table(module, degree, values)


def page_to_json(page) -> dict:
    return {
        "r": page.r,
        "entries": {
            f"{p},{q}": {
                "free_rank": ent.canonical[0],
                "invariant_factors": list(ent.canonical[1]),
            }
            for (p, q), ent in sorted(page.entries.items())
        },
    }


def canonical_to_json(canonical) -> dict:
    return {"free_rank": canonical[0], "invariant_factors": list(canonical[1])}


def load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise FormatError(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {path}: {exc}")


def dump_report(report, path: str | None, fmt: str = "json") -> str:
    if fmt == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    elif fmt == "csv":
        text = _report_to_csv(report)
    else:
        raise FormatError(f"unknown format: {fmt}")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _flatten(prefix: str, obj, rows) -> None:
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, (list, tuple)):
        rows.append((prefix, " ".join(str(x) for x in obj)))
    else:
        rows.append((prefix, str(obj)))


def _report_to_csv(report) -> str:
    rows: list[tuple[str, str]] = []
    _flatten("", report, rows)
    lines = ["key,value"]
    for k, v in rows:
        lines.append(f"{k},{v}")
    return "\n".join(lines) + "\n"
