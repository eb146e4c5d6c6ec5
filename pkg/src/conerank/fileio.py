"""Matrix, factorization, and grid-function serialization.

Formats:
  * matrix CSV  - one row per line, comma separated, decimal or "p/q" literals;
  * matrix JSON - {"rows": m, "cols": n, "entries": [...], "scalar": "rational"|"float"};
  * factorization JSON - {"k": k, "L": matrix-json, "R": matrix-json};
  * grid function CSV - header "t,value", one sample per line.

Readers reject ragged rows and non-finite floats.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import FormatError
from .matcore import ExactMatrix, FloatMatrix, Matrix


def format_sig(x: float, digits: int = 12) -> str:
    """Fixed significant-digit rendering used in reports."""
    return f"{x:.{digits}g}"


def canonical_json(obj: Any) -> str:
    """Deterministic compact JSON used for every report."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _rational_token(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _parse_rational(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational literal {tok!r}") from exc


def _is_integer_token(tok: str) -> bool:
    t = tok.strip()
    if t.startswith(("+", "-")):
        t = t[1:]
    return t.isdigit()


def _parse_float(tok: str) -> float:
    try:
        v = float(tok)
    except ValueError as exc:
        raise FormatError(f"bad float literal {tok!r}") from exc
    if not math.isfinite(v):
        raise FormatError(f"non-finite value {tok!r} rejected")
    return v


def matrix_from_csv_text(text: str, scalar: str = "auto") -> Matrix:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        rows.append([tok.strip() for tok in line.split(",")])
    if not rows:
        raise FormatError("empty matrix file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise FormatError("ragged rows")
    if scalar == "auto":
        # p/q or pure-integer input certifies exactly; decimal/exponent
        # literals signal sampled data and stay on the float path
        toks = [tok for r in rows for tok in r]
        if any("/" in tok for tok in toks) or all(_is_integer_token(tok) for tok in toks):
            scalar = "rational"
        else:
            scalar = "float"
    if scalar == "rational":
        return ExactMatrix.from_rows([[_parse_rational(t) for t in r] for r in rows])
    if scalar == "float":
        return FloatMatrix.from_rows([[_parse_float(t) for t in r] for r in rows])
    raise FormatError(f"unknown scalar kind {scalar!r}")


def read_matrix_csv(path, scalar: str = "auto") -> Matrix:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_csv_text(fh.read(), scalar=scalar)


def matrix_to_csv_text(M: Matrix) -> str:
    lines = []
    for i in range(M.rows):
        if isinstance(M, ExactMatrix):
            lines.append(",".join(_rational_token(x) for x in M.row(i)))
        else:
            lines.append(",".join(repr(float(x)) for x in M.data[i]))
    return "\n".join(lines) + "\n"


def write_matrix_csv(M: Matrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(matrix_to_csv_text(M))


def matrix_to_json_obj(M: Matrix) -> dict:
    if isinstance(M, ExactMatrix):
        return {
            "rows": M.rows,
            "cols": M.cols,
            "entries": [_rational_token(x) for x in M.entries],
            "scalar": "rational",
        }
    return {"rows": M.rows, "cols": M.cols, "entries": list(M.entries), "scalar": "float"}


def matrix_from_json_obj(obj) -> Matrix:
    if not isinstance(obj, dict):
        raise FormatError("matrix JSON must be an object")
    try:
        rows, cols, entries, scalar = obj["rows"], obj["cols"], obj["entries"], obj["scalar"]
    except KeyError as exc:
        raise FormatError(f"matrix JSON missing field {exc}") from exc
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise FormatError("rows/cols must be nonnegative integers")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise FormatError("entry count does not match rows*cols")
    if scalar == "rational":
        return ExactMatrix(rows, cols, [_parse_rational(str(e)) for e in entries])
    if scalar == "float":
        vals = []
        for e in entries:
            if not isinstance(e, (int, float)) or not math.isfinite(float(e)):
                raise FormatError(f"non-finite or non-numeric entry {e!r}")
            vals.append(float(e))
        return FloatMatrix(np.array(vals, dtype=float).reshape(rows, cols))
    raise FormatError(f"unknown scalar kind {scalar!r}")


def read_matrix_json(path) -> Matrix:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc
    return matrix_from_json_obj(obj)


def write_matrix_json(M: Matrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(matrix_to_json_obj(M)) + "\n")


def read_matrix(path, scalar: str = "auto") -> Matrix:
    """Dispatch on extension: .json uses the JSON schema, anything else CSV."""
    if str(path).endswith(".json"):
        return read_matrix_json(path)
    return read_matrix_csv(path, scalar=scalar)


def factorization_to_json_obj(F) -> dict:
    return {"k": F.k, "L": matrix_to_json_obj(F.L), "R": matrix_to_json_obj(F.R)}


def factorization_from_json_obj(obj):
    from .nnfactor import NonnegFactorization

    if not isinstance(obj, dict) or not {"k", "L", "R"} <= set(obj):
        raise FormatError("factorization JSON needs fields k, L, R")
    L = matrix_from_json_obj(obj["L"])
    R = matrix_from_json_obj(obj["R"])
    F = NonnegFactorization(L, R)
    if F.k != obj["k"]:
        raise FormatError(f"declared k={obj['k']} does not match factor shapes (k={F.k})")
    return F


def read_factorization_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from exc
    return factorization_from_json_obj(obj)


def write_factorization_json(F, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(factorization_to_json_obj(F)) + "\n")


def grid_function_to_csv_text(f) -> str:
    lines = ["t,value"]
    for t, v in zip(f.grid.points(), f.values):
        lines.append(f"{float(t)!r},{float(v)!r}")
    return "\n".join(lines) + "\n"


def write_grid_function_csv(f, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(grid_function_to_csv_text(f))
