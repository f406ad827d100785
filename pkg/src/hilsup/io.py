"""JSON algebra files: ``{"size", "top", "imp", "join"}`` with row-major tables.

The writer is deterministic (one table row per line, LF endings) so that
save -> load -> save reproduces the same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import FiniteAlgebra
from .free import FreeAlgebra


def _rows(table) -> str:
    return ",\n".join("    [" + ",".join(str(v) for v in row) + "]" for row in table)


def dumps_algebra(A: FiniteAlgebra) -> str:
    return (
        "{\n"
        f'  "size": {A.size},\n'
        f'  "top": {A.top},\n'
        f'  "imp": [\n{_rows(A.imp.tolist())}\n  ],\n'
        f'  "join": [\n{_rows(A.join.tolist())}\n  ]\n'
        "}\n"
    )


def loads_algebra(text: str) -> FiniteAlgebra:
    doc = json.loads(text)
    missing = {"size", "top", "imp", "join"} - set(doc)
    if missing:
        raise ValueError(f"algebra document lacks {sorted(missing)}")
    return FiniteAlgebra(int(doc["size"]), doc["imp"], doc["join"], int(doc["top"]))


def save_algebra(A: FiniteAlgebra, path) -> None:
    Path(path).write_text(dumps_algebra(A), encoding="utf-8", newline="\n")


def load_algebra(path) -> FiniteAlgebra:
    return loads_algebra(Path(path).read_text(encoding="utf-8"))


def free_header(F: FreeAlgebra) -> dict:
    return {
        "n": F.n,
        "r": F.r,
        "generators": [list(F.tuple_of(g)) for g in F.generators],
        "elements": [list(F.tuple_of(i)) for i in range(F.size)],
    }


def dumps_header(F: FreeAlgebra) -> str:
    h = free_header(F)
    lines = [f'  "n": {h["n"]},', f'  "r": {h["r"]},']
    for key in ("generators", "elements"):
        body = ",\n".join("    " + json.dumps(t, separators=(",", ":")) for t in h[key])
        lines.append(f'  "{key}": [\n{body}\n  ]' + ("," if key == "generators" else ""))
    return "{\n" + "\n".join(lines) + "\n}\n"


def header_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".header.json")


def save_free(F: FreeAlgebra, path) -> tuple[Path, Path]:
    path = Path(path)
    save_algebra(F.algebra, path)
    side = header_path(path)
    side.write_text(dumps_header(F), encoding="utf-8", newline="\n")
    return path, side
