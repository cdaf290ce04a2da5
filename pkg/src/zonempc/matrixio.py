"""Plain-text matrix dump/load.

Format, one or more named matrices per file:

    # matrix <name> <rows> <cols>
    <row of whitespace-separated float repr values>
    ...

Scalars are stored as 1x1 matrices. Values are written with ``repr`` so a
dump/load round trip is bit-exact for float64.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def save_matrices(path: str | Path, matrices: dict[str, np.ndarray]) -> None:
    lines: list[str] = []
    for name, mat in matrices.items():
        arr = np.atleast_2d(np.asarray(mat, dtype=float))
        lines.append(f"# matrix {name} {arr.shape[0]} {arr.shape[1]}")
        for row in arr:
            lines.append(" ".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def load_matrices(path: str | Path) -> dict[str, np.ndarray]:
    matrices: dict[str, np.ndarray] = {}
    lines = Path(path).read_text().splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if not line.startswith("# matrix "):
            raise ValueError(f"{path}: expected '# matrix' header, got: {line!r}")
        _, _, name, rows_s, cols_s = line.split()
        rows, cols = int(rows_s), int(cols_s)
        data = np.empty((rows, cols))
        for r in range(rows):
            values = lines[i].split()
            if len(values) != cols:
                raise ValueError(
                    f"{path}: matrix {name} row {r} has {len(values)} values, "
                    f"expected {cols}"
                )
            data[r] = [float(v) for v in values]
            i += 1
        matrices[name] = data
    return matrices
