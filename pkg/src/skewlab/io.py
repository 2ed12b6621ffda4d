"""File formats: matrix JSON, report/verdict JSON and the sweep CSV.

All floats are written with 17 significant digits so every value
round-trips exactly and identical runs give byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import SkewlabError
from .hermitian import as_matrix


class MatrixFormatError(SkewlabError, ValueError):
    pass


def format_float(x: float) -> str:
    x = float(x) + 0.0  # drops the sign of -0.0
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    # keep integral floats recognisable as floats
    if all(c not in s for c in ".eEn"):
        s += ".0"
    return s


def _encode(obj, indent: int | None, level: int) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = [(json.dumps(str(k), ensure_ascii=False), _encode(v, indent, level + 1)) for k, v in obj.items()]
        if not items:
            return "{}"
        if indent is None:
            return "{" + ", ".join(f"{k}: {v}" for k, v in items) + "}"
        pad = " " * (indent * (level + 1))
        body = ",\n".join(f"{pad}{k}: {v}" for k, v in items)
        return "{\n" + body + "\n" + " " * (indent * level) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        # numeric rows stay on one line
        return "[" + ", ".join(_encode(v, None, level + 1) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int | None = 2) -> str:
    """JSON text with floats rendered to 17 significant digits."""
    return _encode(obj, indent, 0)


def matrix_to_dict(m) -> dict:
    m = as_matrix(m)
    d = {"dim": m.shape[0], "re": m.real.tolist()}
    if np.any(m.imag != 0):
        d["im"] = m.imag.tolist()
    return d


def matrix_from_dict(d: dict) -> np.ndarray:
    if not isinstance(d, dict) or "dim" not in d or "re" not in d:
        raise MatrixFormatError('matrix JSON needs "dim" and "re"')
    n = d["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MatrixFormatError(f"dim must be a positive integer, got {n!r}")
    parts = []
    for key in ("re", "im"):
        if key not in d:
            parts.append(np.zeros((n, n)))
            continue
        try:
            arr = np.array(d[key], dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise MatrixFormatError(f'"{key}" is not a numeric array: {exc}') from None
        if arr.shape != (n, n):
            raise MatrixFormatError(f'"{key}" has shape {arr.shape}, expected ({n}, {n})')
        if not np.all(np.isfinite(arr)):
            raise MatrixFormatError(f'"{key}" has non-finite entries')
        parts.append(arr)
    return parts[0] + 1j * parts[1]


def load_matrix(path) -> np.ndarray:
    """Read a matrix file; raises ``FileNotFoundError`` or :class:`MatrixFormatError`."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"{path}: malformed JSON ({exc})") from None
    return matrix_from_dict(d)


def save_matrix(m, path) -> None:
    Path(path).write_text(dumps(matrix_to_dict(m)) + "\n", encoding="utf-8")


def write_text(text: str, path=None) -> None:
    """Write to ``path``, or to standard output when ``path`` is None or ``"-"``."""
    if path is None or str(path) == "-":
        import sys

        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="utf-8")


def _csv_field(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[dict]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_field(row[h]) for h in header) for row in rows)
    return "\n".join(lines) + "\n"
