"""Embedding file ingestion and score serialization.

Formats:

- csv:       one row per sample, comma-separated decimal values, no header.
             Floats are written with repr() so float64 round-trips exactly.
- raw_f32 /
  raw_f64:   16-byte header of two little-endian uint64 (n_samples, dim)
             followed by the row-major payload; file size must match the
             header exactly.
- npy_subset: version 1.0 files, C order, little-endian float32/float64,
             2-D only. Anything else is a clean error naming the feature.

Values are held as float64 internally regardless of source precision.
Positions in error messages are 1-based.
"""

from __future__ import annotations

import ast
import math
import struct
from pathlib import Path

import numpy as np

from .errors import DataError
from .knn import as_embedding_array
from .metrics import PrdcScores

FORMATS = ("csv", "raw_f32", "raw_f64", "npy_subset")

_EXTENSIONS = {".csv": "csv", ".f32": "raw_f32", ".f64": "raw_f64", ".npy": "npy_subset"}

_NPY_MAGIC = b"\x93NUMPY"


def detect_format(path) -> str:
    ext = Path(path).suffix.lower()
    fmt = _EXTENSIONS.get(ext)
    if fmt is None:
        raise DataError(f"{path}: cannot detect format from extension {ext!r} "
                        f"(expected .csv, .f32, .f64, or .npy)")
    return fmt


def load_embeddings(path, format: str | None = None) -> np.ndarray:
    """Read a sample matrix; format auto-detected from the extension by default."""
    fmt = format or detect_format(path)
    if fmt not in FORMATS:
        raise DataError(f"unknown format {fmt!r} (expected one of {FORMATS})")
    try:
        data = Path(path).read_bytes()
    except FileNotFoundError:
        raise DataError(f"{path}: file not found") from None
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None
    if fmt == "csv":
        arr = _parse_csv(data, path)
    elif fmt == "npy_subset":
        arr = _parse_npy(data, path)
    else:
        arr = _parse_raw(data, path, fmt)
    return as_embedding_array(arr, str(path))


def save_embeddings(path, arr, format: str | None = None) -> None:
    """Write a sample matrix; format auto-detected from the extension by default."""
    arr = as_embedding_array(arr, "array")
    fmt = format or detect_format(path)
    if fmt not in FORMATS:
        raise DataError(f"unknown format {fmt!r} (expected one of {FORMATS})")
    if fmt == "csv":
        payload = _csv_bytes(arr)
    elif fmt == "npy_subset":
        payload = npy_bytes(arr, "<f8")
    elif fmt == "raw_f32":
        payload = _raw_bytes(arr, "<f4")
    else:
        payload = _raw_bytes(arr, "<f8")
    try:
        Path(path).write_bytes(payload)
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from None


def _parse_csv(data: bytes, path) -> np.ndarray:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not valid utf-8 text: {exc}") from None
    rows = []
    width = None
    for lineno, line in enumerate(text.split("\n"), start=1):
        line = line.strip()
        if not line:
            continue
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise DataError(f"{path}: row {lineno} has {len(cells)} values, "
                            f"expected {width}")
        parsed = []
        for col, cell in enumerate(cells, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {lineno}, column {col}: "
                                f"cannot parse {cell.strip()!r} as a number") from None
            if not math.isfinite(value):
                raise DataError(f"{path}: non-finite value at row {lineno}, "
                                f"column {col}")
            parsed.append(value)
        rows.append(parsed)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


def _csv_bytes(arr: np.ndarray) -> bytes:
    lines = [",".join(repr(float(v)) for v in row) for row in arr]
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_raw(data: bytes, path, fmt: str) -> np.ndarray:
    dtype = np.dtype("<f4" if fmt == "raw_f32" else "<f8")
    if len(data) < 16:
        raise DataError(f"{path}: truncated header, need 16 bytes, found {len(data)}")
    n, d = struct.unpack("<QQ", data[:16])
    if n < 1 or d < 1:
        raise DataError(f"{path}: header declares empty shape ({n}, {d})")
    expected = n * d * dtype.itemsize
    actual = len(data) - 16
    if actual != expected:
        raise DataError(f"{path}: header declares {n}x{d} {dtype.name} "
                        f"({expected} payload bytes), found {actual}")
    arr = np.frombuffer(data, dtype=dtype, offset=16).reshape(n, d)
    return _finite_f64(arr, path)


def _raw_bytes(arr: np.ndarray, descr: str) -> bytes:
    header = struct.pack("<QQ", arr.shape[0], arr.shape[1])
    return header + np.ascontiguousarray(arr, dtype=descr).tobytes()


def _parse_npy(data: bytes, path) -> np.ndarray:
    if len(data) < 10 or data[:6] != _NPY_MAGIC:
        raise DataError(f"{path}: not an npy file (bad magic)")
    major, minor = data[6], data[7]
    if (major, minor) != (1, 0):
        raise DataError(f"{path}: unsupported npy version {major}.{minor} "
                        f"(only 1.0 supported)")
    (hlen,) = struct.unpack("<H", data[8:10])
    if len(data) < 10 + hlen:
        raise DataError(f"{path}: truncated npy header")
    try:
        header = ast.literal_eval(data[10:10 + hlen].decode("latin-1"))
        descr = header["descr"]
        fortran = header["fortran_order"]
        shape = header["shape"]
    except Exception:
        raise DataError(f"{path}: malformed npy header") from None
    if descr not in ("<f4", "<f8"):
        raise DataError(f"{path}: unsupported npy dtype {descr!r} "
                        f"(only little-endian float32/float64)")
    if fortran is not False:
        raise DataError(f"{path}: Fortran-order npy is not supported (C order only)")
    if not (isinstance(shape, tuple) and len(shape) == 2
            and all(isinstance(s, int) and s >= 1 for s in shape)):
        raise DataError(f"{path}: unsupported npy shape {shape} "
                        f"(2-D with positive sizes only)")
    dtype = np.dtype(descr)
    expected = shape[0] * shape[1] * dtype.itemsize
    actual = len(data) - 10 - hlen
    if actual != expected:
        raise DataError(f"{path}: npy payload has {actual} bytes, "
                        f"shape {shape} needs {expected}")
    arr = np.frombuffer(data, dtype=dtype, offset=10 + hlen).reshape(shape)
    return _finite_f64(arr, path)


def npy_bytes(arr: np.ndarray, descr: str = "<f8") -> bytes:
    """Minimal npy 1.0 serialization (C order, little-endian floats)."""
    if descr not in ("<f4", "<f8"):
        raise DataError(f"unsupported npy dtype {descr!r}")
    header = ("{'descr': '%s', 'fortran_order': False, 'shape': (%d, %d), }"
              % (descr, arr.shape[0], arr.shape[1]))
    # total preamble (magic + version + length field + header) padded to 64 bytes
    unpadded = len(_NPY_MAGIC) + 2 + 2 + len(header) + 1
    header = header + " " * (-unpadded % 64) + "\n"
    out = _NPY_MAGIC + bytes((1, 0)) + struct.pack("<H", len(header))
    return out + header.encode("latin-1") + np.ascontiguousarray(arr, dtype=descr).tobytes()


def _finite_f64(arr: np.ndarray, path) -> np.ndarray:
    if not np.isfinite(arr).all():
        i, j = np.argwhere(~np.isfinite(arr))[0]
        raise DataError(f"{path}: non-finite value at row {i + 1}, column {j + 1}")
    return arr.astype(np.float64)


def format_scores_json(scores: PrdcScores) -> str:
    """Fixed schema, fixed order, %.6f for the metric values."""
    return ('{"precision": %.6f, "recall": %.6f, "density": %.6f, '
            '"coverage": %.6f, "k_pr": %d, "k_dc": %d, "n_real": %d, "n_fake": %d}'
            % (scores.precision, scores.recall, scores.density, scores.coverage,
               scores.k_pr, scores.k_dc, scores.n_real, scores.n_fake))


def format_scores_csv(scores: PrdcScores) -> str:
    rec = scores.as_record()
    header = ",".join(rec)
    values = ",".join("%.6f" % rec[name] if isinstance(rec[name], float) else str(rec[name])
                      for name in rec)
    return f"{header}\n{values}"
