"""Figure datasets: named numeric columns plus the config that made them.

Every file embeds its full generating configuration so a run can be
replayed and byte-compared.  CSV numbers are rendered in fixed notation
with 12 significant digits and a locale-independent decimal point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

CSV_META_PREFIX = "# meta: "


@dataclass(frozen=True)
class FigureDataset:
    kind: str
    columns: dict  # name -> list of values, equal lengths, insertion ordered
    metadata: dict

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"column lengths differ: {lengths}")


def format_number(x) -> str:
    """Fixed-notation rendering, 12 significant digits, '.' decimal point."""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return np.format_float_positional(
        float(x), precision=12, unique=False, fractional=False, trim="0"
    )


def to_csv(ds: FigureDataset) -> str:
    meta = {"kind": ds.kind, **ds.metadata}
    lines = [CSV_META_PREFIX + json.dumps(meta, sort_keys=True, separators=(",", ":"))]
    names = list(ds.columns)
    lines.append(",".join(names))
    n_rows = len(ds.columns[names[0]]) if names else 0
    for i in range(n_rows):
        lines.append(",".join(format_number(ds.columns[name][i]) for name in names))
    return "\n".join(lines) + "\n"


def to_json(ds: FigureDataset) -> str:
    payload = {
        "kind": ds.kind,
        "metadata": ds.metadata,
        "columns": {
            name: [v if isinstance(v, str) else float(v) for v in values]
            for name, values in ds.columns.items()
        },
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def render(ds: FigureDataset, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(ds)
    if fmt == "json":
        return to_json(ds)
    raise ValueError(f"unknown format {fmt!r} (expected csv or json)")


def read_metadata(text: str) -> dict:
    """Recover the embedded metadata (including kind) from a rendered dataset."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = json.loads(stripped)
        return {"kind": payload["kind"], **payload["metadata"]}
    for line in text.splitlines():
        if line.startswith(CSV_META_PREFIX):
            return json.loads(line[len(CSV_META_PREFIX):])
    raise ValueError("no embedded metadata found in dataset file")
