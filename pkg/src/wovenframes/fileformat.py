"""JSON frame and operator files.

Frame file::

    {"dim": 2, "field": "real", "vectors": [[1, 0], [0, 1]], "tol": 1e-10}

With ``"field": "complex"`` every entry is a two-element ``[re, im]`` array.
Operator files have the same layout with ``"matrix"`` (``dim`` rows) in place
of ``"vectors"``.  Floats are written with ``repr`` so a parse of a
serialisation reproduces every entry bit for bit.
"""
from __future__ import annotations

import json
import json.decoder
import json.scanner
import math
import os
from pathlib import Path
from typing import Union

import numpy as np

from .core import DEFAULT_TOL, Frame
from .errors import FrameError, ParseError

Source = Union[str, os.PathLike]

_FRAME_KEYS = {"dim", "field", "vectors", "tol"}
_OPERATOR_KEYS = {"dim", "field", "matrix"}


class _PositionDecoder(json.JSONDecoder):
    """Decoder that remembers where each array starts, for line numbers in errors."""

    def __init__(self):
        super().__init__()
        self.positions = {}

        def parse_array(s_and_end, scan_once, **kw):
            values, end = json.decoder.JSONArray(s_and_end, scan_once, **kw)
            self.positions[id(values)] = s_and_end[1] - 1
            return values, end

        self.parse_array = parse_array
        self.scan_once = json.scanner.py_make_scanner(self)


class _Doc:
    def __init__(self, text: str, name: str):
        self.text = text
        self.name = name
        dec = _PositionDecoder()
        try:
            self.data = dec.decode(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{name}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        self.positions = dec.positions

    def line_of(self, obj) -> int | None:
        pos = self.positions.get(id(obj))
        return None if pos is None else self.text.count("\n", 0, pos) + 1

    def fail(self, where: str, msg: str, obj=None):
        line = self.line_of(obj) if obj is not None else None
        loc = f"line {line}, " if line is not None else ""
        raise ParseError(f"{self.name}: {loc}{where}: {msg}")


def _read(source: Source) -> tuple[str, str]:
    if isinstance(source, str) and source.lstrip()[:1] in ("{", "["):
        return source, "<text>"
    path = Path(source)
    try:
        return path.read_text(encoding="utf-8"), str(path)
    except OSError as exc:
        raise ParseError(f"{path}: cannot read ({exc.strerror})") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path}: not valid UTF-8") from None


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _entry(doc: _Doc, x, field: str, where: str, row) -> complex:
    if field == "real":
        if not _is_number(x):
            doc.fail(where, f"expected a number, got {json.dumps(x)}", row)
        value = complex(float(x), 0.0)
    else:
        if not (isinstance(x, list) and len(x) == 2 and all(_is_number(t) for t in x)):
            doc.fail(where, f"expected [re, im], got {json.dumps(x)}", row)
        value = complex(float(x[0]), float(x[1]))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        doc.fail(where, "entry is NaN or infinite", row)
    return value


def _header(doc: _Doc, allowed: set, body: str):
    data = doc.data
    if not isinstance(data, dict):
        doc.fail("document", "top level must be an object")
    extra = set(data) - allowed
    if extra:
        doc.fail(", ".join(sorted(extra)), "unknown field")
    for key in ("dim", "field", body):
        if key not in data:
            doc.fail(key, "missing required field")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        doc.fail("dim", f"must be a positive integer, got {json.dumps(dim)}")
    field = data["field"]
    if field not in ("real", "complex"):
        doc.fail("field", f'must be "real" or "complex", got {json.dumps(field)}')
    rows = data[body]
    if not isinstance(rows, list):
        doc.fail(body, "must be a list of rows")
    return dim, field, rows


def _rows(doc: _Doc, rows, dim: int, field: str, body: str) -> np.ndarray:
    out = np.empty((len(rows), dim), dtype=complex)
    for i, row in enumerate(rows):
        where = f"{body}[{i}]"
        if not isinstance(row, list):
            doc.fail(where, "must be a list")
        if len(row) != dim:
            doc.fail(where, f"has {len(row)} entries, expected dim = {dim}", row)
        for j, x in enumerate(row):
            out[i, j] = _entry(doc, x, field, f"{where}[{j}]", row)
    return out


def parse_frame_file(source: Source) -> Frame:
    """Parse a frame document from a path or from JSON text."""
    doc = _Doc(*_read(source))
    dim, field, rows = _header(doc, _FRAME_KEYS, "vectors")
    if not rows:
        doc.fail("vectors", "needs at least one vector", rows)
    tol = doc.data.get("tol", DEFAULT_TOL)
    if not _is_number(tol) or not math.isfinite(tol) or tol < 0:
        doc.fail("tol", f"must be a finite nonnegative number, got {json.dumps(tol)}")
    vectors = _rows(doc, rows, dim, field, "vectors")
    try:
        return Frame(dim, vectors, float(tol))
    except FrameError as exc:
        raise ParseError(f"{doc.name}: {exc}") from None


def parse_operator_file(source: Source, dim: int | None = None) -> np.ndarray:
    """Parse a ``dim x dim`` operator grid; ``dim`` checks it against a frame."""
    doc = _Doc(*_read(source))
    d, field, rows = _header(doc, _OPERATOR_KEYS, "matrix")
    if len(rows) != d:
        doc.fail("matrix", f"has {len(rows)} rows, expected dim = {d}", rows)
    if dim is not None and d != dim:
        doc.fail("dim", f"operator acts on dimension {d}, frame has dimension {dim}")
    return _rows(doc, rows, d, field, "matrix")


def _is_real(a: np.ndarray) -> bool:
    return bool(np.all(a.imag == 0) and not np.any(np.signbit(a.imag)))


def _format_rows(a: np.ndarray, field: str) -> str:
    def fmt(z):
        if field == "real":
            return repr(float(z.real))
        return f"[{float(z.real)!r}, {float(z.imag)!r}]"

    lines = ["    [" + ", ".join(fmt(z) for z in row) + "]" for row in a]
    return "[\n" + ",\n".join(lines) + "\n  ]"


def serialize_frame(frame: Frame, field: str | None = None) -> str:
    """Frame document text, one vector per line.

    ``field`` defaults to ``"real"`` when every imaginary part is +0.0.
    """
    v = frame.vectors
    field = field or ("real" if _is_real(v) else "complex")
    if field == "real" and not _is_real(v):
        raise ValueError("frame has nonzero imaginary parts")
    return (
        "{\n"
        f'  "dim": {frame.dim},\n'
        f'  "field": "{field}",\n'
        f'  "tol": {float(frame.tol)!r},\n'
        f'  "vectors": {_format_rows(v, field)}\n'
        "}\n"
    )


def serialize_operator(T, field: str | None = None) -> str:
    T = np.asarray(T, dtype=complex)
    field = field or ("real" if _is_real(T) else "complex")
    return (
        "{\n"
        f'  "dim": {T.shape[0]},\n'
        f'  "field": "{field}",\n'
        f'  "matrix": {_format_rows(T, field)}\n'
        "}\n"
    )


def write_frame(path: Source, frame: Frame, field: str | None = None) -> None:
    Path(path).write_text(serialize_frame(frame, field), encoding="utf-8")


def frame_document(frame: Frame) -> dict:
    """The frame file as a JSON-ready dict."""
    return json.loads(serialize_frame(frame))
