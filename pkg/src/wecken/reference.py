"""Published reference values shipped with the package."""

from __future__ import annotations

import csv
import io
import json
from functools import lru_cache
from importlib import resources

TABLE2_NS = (2, 3, 4, 5, 10, 20, 50)
TABLE2_PS = tuple(range(2, 15))


def _read(name: str) -> str:
    return resources.files("wecken").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def table2() -> dict[tuple[int, int], float]:
    """Published D_p(V_n) estimates keyed by ``(p, n)``."""
    out = {}
    for row in csv.DictReader(io.StringIO(_read("table2_reference.csv"))):
        p = int(row.pop("p"))
        for col, val in row.items():
            out[p, int(col.removeprefix("n="))] = float(val)
    return out


@lru_cache(maxsize=None)
def bounds() -> dict:
    raw = json.loads(_read("bounds_reference.json"))
    out = {}
    for key, val in raw.items():
        if isinstance(val, dict) and key != "limits":
            out[key] = {int(n): v for n, v in val.items()}
        else:
            out[key] = val
    return out
