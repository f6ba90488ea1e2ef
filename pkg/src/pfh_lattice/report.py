"""Deterministic JSON/CSV serialization of exact results."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
from fractions import Fraction

from .lattice import LatticePath, format_path
from .surd import Surd, format_exact

__all__ = ["jsonable", "dumps", "csv_text", "decimal12"]


def decimal12(x) -> str:
    return format(float(x), ".12g")


def jsonable(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (Fraction, Surd)):
        return format_exact(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, LatticePath):
        return format_path(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if hasattr(obj, "_asdict"):
        return jsonable(obj._asdict())
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def _is_num(v) -> bool:
    return isinstance(v, (Fraction, Surd, int)) and not isinstance(v, bool)


def csv_text(header, rows) -> str:
    """CSV with a decimal column (12 significant digits) and an exact twin per numeric field."""
    rows = [list(r) for r in rows]
    numeric = [any(_is_num(r[i]) for r in rows) for i in range(len(header))]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    out_header = []
    for h, num in zip(header, numeric):
        out_header.extend([h, f"{h}_exact"] if num else [h])
    w.writerow(out_header)
    for row in rows:
        cells = []
        for v, num in zip(row, numeric):
            if not num:
                cells.append("" if v is None else str(v))
            elif v is None:
                cells.extend(["", ""])
            else:
                cells.extend([decimal12(v), format_exact(v)])
        w.writerow(cells)
    return buf.getvalue()
