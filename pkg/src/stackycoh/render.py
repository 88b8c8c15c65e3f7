"""Text and JSON rendering of results.

JSON output is byte-stable: keys sorted, ASCII only, fixed indentation.
"""

from __future__ import annotations

import json
from typing import Any, Iterable

from .stackcurve import CohomologyValue, PicardValue
from .zlin import AbelianGroup, GroupValue


def render_group(g: GroupValue) -> str:
    return str(g)


def result_record(v: CohomologyValue) -> dict[str, Any]:
    return {
        "degree": v.degree,
        "value": v.render(),
        "kind": v.kind,
        "provenance": v.provenance,
        "resolved": v.resolved,
        "order": v.order,
        "pieces": [render_group(p) for p in v.pieces] if v.kind == "filtration" else [],
        "reason": v.reason or None,
        "notes": list(v.notes),
    }


def picard_record(p: PicardValue) -> dict[str, Any]:
    div = p.divisible_part
    return {
        "value": render_group(p.value),
        "divisible_part": None if div is None else render_group(div.value()),
        "discrete_part": render_group(p.discrete_part),
        "coarse_quotient": render_group(p.coarse_quotient),
        "quotient_check": p.quotient_check,
        "provenance": p.provenance,
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True, default=_default)


def _default(obj):
    if isinstance(obj, AbelianGroup):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def table(rows: Iterable[dict[str, Any]], columns: list[str]) -> str:
    rows = [[cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(r[i]) for r in rows]) for i, c in enumerate(columns)]
    out = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    for r in rows:
        out.append("  ".join(x.ljust(w) for x, w in zip(r, widths)).rstrip())
    return "\n".join(out)


def cell(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, list):
        return "; ".join(str(i) for i in x) or "-"
    return str(x)
