"""Canonical dataset serialization and the compressor backend registry.

Datasets are matrices of fixed-point scalars with six fractional digits,
stored internally as signed integer counts of 1e-6.  A dataset is rendered
as ``((v11,v12,...),(v21,...),...)`` in ASCII and prefixed with its 8-byte
big-endian body length, which makes every blob self-delimiting.
"""

from __future__ import annotations

import bz2
import csv
import io
import json
import lzma
import math
import re
import zlib
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import BackendError, ParseError, ScalarRangeError, SpecError

SCALE = 10**6
FRACTION_DIGITS = 6
MAX_ABS = 10**9
MAX_ABS_MICROS = MAX_ABS * SCALE
HEADER_SIZE = 8

_CANONICAL = re.compile(r"-?(0|[1-9][0-9]*)\.[0-9]{6}")
_QUANTUM = Decimal(1).scaleb(-FRACTION_DIGITS)


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

def quantize(value) -> int:
    """Convert a number (or numeric text) to integer micro-units.

    Floats are scaled then rounded half-to-even, the same rule numpy's
    ``rint`` applies, so scalar and array paths agree.  Text and Decimal
    values are rounded exactly.
    """
    if isinstance(value, (bool, np.bool_)):
        value = int(value)
    if isinstance(value, (int, np.integer)):
        micros = int(value) * SCALE
    elif isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ScalarRangeError(f"non-finite scalar {value!r}")
        micros = round(float(value) * SCALE)
    else:
        try:
            dec = Decimal(str(value).strip()) if not isinstance(value, Decimal) else value
            if not dec.is_finite():
                raise ScalarRangeError(f"non-finite scalar {value!r}")
            micros = int(dec.quantize(_QUANTUM, rounding=ROUND_HALF_EVEN).scaleb(FRACTION_DIGITS))
        except InvalidOperation as exc:
            raise ParseError(f"not a number: {value!r}") from exc
    if abs(micros) > MAX_ABS_MICROS:
        raise ScalarRangeError(f"scalar {value!r} outside [-{MAX_ABS}, {MAX_ABS}]")
    return micros


def render_scalar(micros: int) -> str:
    """Render integer micro-units as fixed-point text, e.g. ``-0.250000``."""
    sign = "-" if micros < 0 else ""
    whole, frac = divmod(abs(micros), SCALE)
    return f"{sign}{whole}.{frac:06d}"


def parse_scalar(text: str) -> int:
    """Inverse of :func:`render_scalar`; accepts only the canonical form."""
    if not _CANONICAL.fullmatch(text) or text == "-0.000000":
        raise ParseError(f"non-canonical scalar text {text!r}")
    negative = text.startswith("-")
    whole, frac = text.lstrip("-").split(".")
    micros = int(whole) * SCALE + int(frac)
    if micros > MAX_ABS_MICROS:
        raise ScalarRangeError(f"scalar {text!r} outside [-{MAX_ABS}, {MAX_ABS}]")
    return -micros if negative else micros


def quantize_array(values) -> np.ndarray:
    """Vectorized :func:`quantize` for float or integer arrays."""
    arr = np.asarray(values)
    if arr.dtype.kind in "iub":
        return arr.astype(np.int64) * SCALE
    if arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)):
            raise ScalarRangeError("non-finite scalar in array")
        if arr.size and np.max(np.abs(arr)) > MAX_ABS + 1:
            raise ScalarRangeError(f"scalar outside [-{MAX_ABS}, {MAX_ABS}]")
        return np.rint(arr * SCALE).astype(np.int64)
    return np.vectorize(quantize, otypes=[np.int64])(arr)


# ---------------------------------------------------------------------------
# Datasets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TupleDataset:
    """Ordered m x n matrix of fixed-point scalars.

    ``micros`` holds the values as int64 multiples of 1e-6.  The array is
    copied and frozen on construction.  Row order is part of identity.
    """

    micros: np.ndarray

    def __post_init__(self):
        arr = np.array(self.micros, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise SpecError(f"dataset must be 2-dimensional, got shape {arr.shape}")
        if arr.shape[1] < 1:
            raise SpecError("n_cols must be positive")
        if arr.size:
            bad = np.abs(arr) > MAX_ABS_MICROS
            if bad.any():
                row, col = (int(i) for i in np.argwhere(bad)[0])
                raise ScalarRangeError(
                    f"scalar at row {row + 1}, column {col + 1} outside [-{MAX_ABS}, {MAX_ABS}]",
                    row=row + 1,
                    col=col + 1,
                )
        arr.setflags(write=False)
        object.__setattr__(self, "micros", arr)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], n_cols: int | None = None) -> "TupleDataset":
        if isinstance(rows, np.ndarray) and rows.ndim == 2:
            if n_cols is not None and rows.shape[1] != n_cols:
                raise SpecError(f"expected {n_cols} columns, got {rows.shape[1]}")
            return cls(quantize_array(rows))
        rows = [list(r) for r in rows]
        if n_cols is None:
            if not rows:
                raise SpecError("n_cols is required for an empty dataset")
            n_cols = len(rows[0])
        out = np.empty((len(rows), n_cols), dtype=np.int64)
        for i, row in enumerate(rows):
            if len(row) != n_cols:
                raise SpecError(f"row {i + 1} has {len(row)} entries, expected {n_cols}")
            for j, v in enumerate(row):
                try:
                    out[i, j] = quantize(v)
                except ScalarRangeError as exc:
                    raise ScalarRangeError(f"row {i + 1}, column {j + 1}: {exc}", row=i + 1, col=j + 1) from None
        return cls(out)

    @classmethod
    def empty(cls, n_cols: int) -> "TupleDataset":
        return cls(np.zeros((0, n_cols), dtype=np.int64))

    @property
    def n_cols(self) -> int:
        return self.micros.shape[1]

    @property
    def m_rows(self) -> int:
        return self.micros.shape[0]

    def to_floats(self) -> np.ndarray:
        return self.micros / SCALE

    def rows(self) -> list[tuple[str, ...]]:
        """Rows as tuples of canonical scalar text."""
        return [tuple(r) for r in self.tokens.tolist()]

    @cached_property
    def tokens(self) -> np.ndarray:
        """Object array of rendered scalars, same shape as ``micros``."""
        flat = self.micros.ravel()
        uniq, inverse = np.unique(flat, return_inverse=True)
        rendered = np.array([render_scalar(v) for v in uniq.tolist()] + [""], dtype=object)[:-1]
        return rendered[inverse.ravel()].reshape(self.micros.shape)

    def select_columns(self, keep: Sequence[int]) -> "TupleDataset":
        """Dataset with only the given 0-based columns, in the given order."""
        keep = list(keep)
        child = TupleDataset(self.micros[:, keep])
        if "tokens" in self.__dict__:
            child.__dict__["tokens"] = self.tokens[:, keep]
        return child

    def select_rows(self, mask) -> "TupleDataset":
        child = TupleDataset(self.micros[mask])
        if "tokens" in self.__dict__:
            child.__dict__["tokens"] = self.tokens[mask]
        return child

    def __eq__(self, other):
        if not isinstance(other, TupleDataset):
            return NotImplemented
        return self.micros.shape == other.micros.shape and np.array_equal(self.micros, other.micros)

    def __hash__(self):
        return hash((self.micros.shape, self.micros.tobytes()))

    def __repr__(self):
        return f"TupleDataset(m_rows={self.m_rows}, n_cols={self.n_cols})"


@dataclass(frozen=True)
class EncodedBlob:
    """Self-delimited byte string: 8-byte big-endian body length, then body."""

    payload: bytes

    def __post_init__(self):
        if len(self.payload) < HEADER_SIZE:
            raise ParseError("blob shorter than its length header")
        if int.from_bytes(self.payload[:HEADER_SIZE], "big") != len(self.payload) - HEADER_SIZE:
            raise ParseError("blob length header does not match body")

    @property
    def declared_len(self) -> int:
        return len(self.payload)

    @property
    def body(self) -> bytes:
        return self.payload[HEADER_SIZE:]


def self_delimit(body: bytes) -> EncodedBlob:
    return EncodedBlob(len(body).to_bytes(HEADER_SIZE, "big") + body)


def body_text(d: TupleDataset) -> str:
    rows = d.tokens.tolist()
    return "(" + ",".join(["(" + ",".join(r) + ")" for r in rows]) + ")"


def encode(d: TupleDataset) -> EncodedBlob:
    return self_delimit(body_text(d).encode("ascii"))


def decode(blob: EncodedBlob | bytes, n_cols: int | None = None) -> TupleDataset:
    """Parse a blob produced by :func:`encode`.

    ``n_cols`` is needed only for the empty dataset, whose text ``()``
    carries no column count.
    """
    if not isinstance(blob, EncodedBlob):
        blob = EncodedBlob(bytes(blob))
    try:
        text = blob.body.decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError("blob body is not ASCII") from exc
    if len(text) < 2 or text[0] != "(" or text[-1] != ")":
        raise ParseError("blob body is not parenthesized")
    inner = text[1:-1]
    if not inner:
        if n_cols is None:
            raise ParseError("empty dataset: n_cols must be supplied")
        return TupleDataset.empty(n_cols)
    if inner[0] != "(" or inner[-1] != ")":
        raise ParseError("rows must be parenthesized")
    rows = [r.split(",") for r in inner[1:-1].split("),(")]
    width = len(rows[0])
    if n_cols is not None and width != n_cols:
        raise ParseError(f"expected {n_cols} columns, found {width}")
    out = np.empty((len(rows), width), dtype=np.int64)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"row {i + 1} has {len(row)} entries, expected {width}")
        out[i] = [parse_scalar(tok) for tok in row]
    return TupleDataset(out)


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

def read_csv(source, header: bool = False) -> TupleDataset:
    """Read a dataset from CSV text, a path, or a file object."""
    text = _read_text(source)
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(f.strip() for f in r)]
    if header and rows:
        rows = rows[1:]
    if not rows:
        raise ParseError("CSV input contains no rows")
    try:
        return TupleDataset.from_rows([[f.strip() for f in r] for r in rows])
    except (SpecError, ScalarRangeError) as exc:
        raise ParseError(str(exc)) from exc


def read_json(source) -> TupleDataset:
    """Read a dataset from a JSON array of arrays."""
    text = _read_text(source)
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError("JSON dataset must be an array of arrays")
    if not data:
        raise ParseError("JSON input contains no rows")
    for r in data:
        if not all(isinstance(v, (int, Decimal)) and not isinstance(v, bool) for v in r):
            raise ParseError("JSON dataset entries must be numbers")
    try:
        return TupleDataset.from_rows(data)
    except (SpecError, ScalarRangeError) as exc:
        raise ParseError(str(exc)) from exc


def read_dataset(path, header: bool = False) -> TupleDataset:
    """Dispatch on file extension: ``.json`` is JSON, anything else CSV."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return read_json(path)
    return read_csv(path, header=header)


def write_csv(d: TupleDataset, fp) -> None:
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerows(d.tokens.tolist())


def _read_text(source) -> str:
    if isinstance(source, Path):
        return source.read_text(encoding="ascii")
    if hasattr(source, "read"):
        return source.read()
    return source


# ---------------------------------------------------------------------------
# Compressor backends
# ---------------------------------------------------------------------------

class _Codec(NamedTuple):
    compress: Callable[[bytes, int], bytes]
    decompress: Callable[[bytes, int], bytes]
    levels: range
    default_level: int
    # worst-case overhead in bytes for ``n`` incompressible input bytes,
    # not counting the backend's empty-input output
    overhead: Callable[[int], int]


def _lzma_filters(level):
    return [{"id": lzma.FILTER_LZMA2, "preset": level}]


def _lzma_compress(data, level):
    return lzma.compress(data, format=lzma.FORMAT_RAW, filters=_lzma_filters(level))


def _lzma_decompress(data, level):
    return lzma.decompress(data, format=lzma.FORMAT_RAW, filters=_lzma_filters(level))


_REGISTRY = {
    # raw LZMA2 stream: no container, so no timestamps or checks to vary.
    # Chunks cover >= 32 KiB of input unless final; chunk headers are <= 6 bytes.
    "lzma": _Codec(_lzma_compress, _lzma_decompress, range(0, 10), 1,
                   lambda n: 6 * math.ceil(n / 32768)),
    # zlib container (no name or mtime fields); bound is zlib's compressBound
    "zlib": _Codec(lambda d, lv: zlib.compress(d, lv), lambda d, lv: zlib.decompress(d),
                   range(0, 10), 9,
                   lambda n: (n >> 12) + (n >> 14) + (n >> 25) + 13),
    # bzip2 documents 1% + 600 bytes as its worst case
    "bz2": _Codec(lambda d, lv: bz2.compress(d, lv), lambda d, lv: bz2.decompress(d),
                  range(1, 10), 9,
                  lambda n: n // 100 + 601),
}

BACKENDS = MappingProxyType(_REGISTRY)
DEFAULT_BACKEND = "lzma"


@dataclass(frozen=True)
class CompressorBackend:
    """A registered lossless compressor at a fixed level."""

    id: str = DEFAULT_BACKEND
    level: int | None = None

    def __post_init__(self):
        if self.id not in _REGISTRY:
            raise BackendError(f"unknown backend {self.id!r}; registered: {', '.join(sorted(_REGISTRY))}")
        codec = _REGISTRY[self.id]
        if self.level is None:
            object.__setattr__(self, "level", codec.default_level)
        elif self.level not in codec.levels:
            raise BackendError(
                f"level {self.level} invalid for {self.id}; expected {codec.levels.start}..{codec.levels.stop - 1}"
            )

    @property
    def name(self) -> str:
        return f"{self.id}:{self.level}"

    def compress(self, data: bytes) -> bytes:
        return _REGISTRY[self.id].compress(data, self.level)

    def decompress(self, data: bytes) -> bytes:
        return _REGISTRY[self.id].decompress(data, self.level)

    @cached_property
    def empty_size(self) -> int:
        """Output length for empty input (the container's fixed framing)."""
        return len(self.compress(b""))

    def expansion_bound(self, raw_len: int) -> int:
        """Largest output length this backend can produce for ``raw_len`` bytes."""
        return raw_len + self.empty_size + _REGISTRY[self.id].overhead(raw_len)


def get_backend(backend_id: str | None = None, level: int | None = None) -> CompressorBackend:
    return CompressorBackend(backend_id or DEFAULT_BACKEND, level)


def compress(blob: EncodedBlob | bytes, backend: CompressorBackend | str | None = None) -> bytes:
    """Compress a blob's payload with ``backend`` (default registry backend)."""
    if not isinstance(backend, CompressorBackend):
        backend = get_backend(backend)
    payload = blob.payload if isinstance(blob, EncodedBlob) else bytes(blob)
    return backend.compress(payload)
