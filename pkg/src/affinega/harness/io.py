"""Text formats for point-sets and transforms.

Point-set files hold one point per line as two whitespace-separated decimal
reals. Lines starting with ``#`` and blank lines are ignored. Transform files
hold the six parameters on one line, with optional ``#`` header lines.
Numbers are written with 17 significant digits, which round-trips float64.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from ..geometry import AffineParams
from ..validation import check_pointset

__all__ = [
    "PointSetFormatError",
    "load_pointset",
    "save_pointset",
    "load_transform",
    "save_transform",
    "fmt",
]


class PointSetFormatError(ValueError):
    """A point-set or transform file could not be parsed."""

    def __init__(self, path, message, line=None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}, line {line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


def fmt(value: float) -> str:
    return f"{value:.17g}"


def _header_lines(header) -> list[str]:
    if header is None:
        return []
    if isinstance(header, dict):
        header = [f"{k}={v}" for k, v in header.items()]
    return [f"# {line}" for line in header]


def _data_lines(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def load_pointset(path) -> np.ndarray:
    """Read a point-set file into an ``(n, 2)`` array, keeping line order.

    Raises
    ------
    FileNotFoundError
        If ``path`` does not exist.
    PointSetFormatError
        On a malformed line, a non-finite value, or a file with no points.
    """
    path = Path(path)
    rows = []
    for lineno, line in _data_lines(path):
        fields = line.split()
        if len(fields) != 2:
            raise PointSetFormatError(path, f"expected 2 values, got {len(fields)}", lineno)
        try:
            x, y = float(fields[0]), float(fields[1])
        except ValueError:
            raise PointSetFormatError(path, f"cannot parse {line!r} as two numbers", lineno) from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise PointSetFormatError(path, "non-finite coordinate", lineno)
        rows.append((x, y))
    if not rows:
        raise PointSetFormatError(path, "no points found")
    return np.array(rows, dtype=np.float64)


def save_pointset(points, path, header=None) -> None:
    points = check_pointset(points)
    lines = _header_lines(header)
    lines += [f"{fmt(x)} {fmt(y)}" for x, y in points]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def save_transform(params: AffineParams, path, header=None) -> None:
    lines = _header_lines(header)
    lines.append(" ".join(fmt(v) for v in params.theta))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_transform(path) -> AffineParams:
    path = Path(path)
    lines = list(_data_lines(path))
    if len(lines) != 1:
        raise PointSetFormatError(path, f"expected one line of 6 values, found {len(lines)} data lines")
    lineno, line = lines[0]
    try:
        values = [float(v) for v in line.split()]
    except ValueError:
        raise PointSetFormatError(path, f"cannot parse {line!r}", lineno) from None
    if len(values) != 6:
        raise PointSetFormatError(path, f"expected 6 values, got {len(values)}", lineno)
    try:
        return AffineParams(tuple(values))
    except ValueError as exc:
        raise PointSetFormatError(path, str(exc), lineno) from None
