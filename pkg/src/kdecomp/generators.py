"""Seeded reference datasets and the textual generator-spec syntax.

Spec strings look like ``constant:2^20``, ``random:1048576``,
``hypercube:n=100,m=3000`` or ``curve:n=100``.
"""

from __future__ import annotations

import numpy as np

from .codec import SCALE, TupleDataset
from .errors import SpecError


def constant_bits(count: int) -> TupleDataset:
    """``count`` ones as a single column."""
    return TupleDataset(np.full((count, 1), SCALE, dtype=np.int64))


def alternating_bits(count: int) -> TupleDataset:
    """0, 1, 0, 1, ... (the indicator of an even 1-based index)."""
    bits = (np.arange(1, count + 1) % 2 == 0).astype(np.int64)
    return TupleDataset((bits * SCALE).reshape(-1, 1))


def random_bits(count: int, seed: int) -> TupleDataset:
    bits = np.random.default_rng(seed).integers(0, 2, size=count, dtype=np.int64)
    return TupleDataset((bits * SCALE).reshape(-1, 1))


def hypercube(n: int, m: int, seed: int) -> TupleDataset:
    """``m`` points drawn uniformly from [-1, 1]^n."""
    pts = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(m, n))
    return TupleDataset.from_rows(pts)


def curve(n: int) -> TupleDataset:
    """Points ``(a cos t, a^2 sin t, a, 0, ..., 0)`` on a swept parametric curve.

    ``a`` runs over -1, -0.99, ..., 1 (outer loop) and ``t`` over
    0, 0.1, ..., 6.2 (inner loop), 201 * 63 rows in all.
    """
    if n < 3:
        raise SpecError("curve dataset needs n >= 3")
    a = (np.arange(201) - 100) / 100
    t = np.arange(63) / 10
    aa, tt = np.meshgrid(a, t, indexing="ij")
    aa, tt = aa.ravel(), tt.ravel()
    pts = np.zeros((aa.size, n))
    pts[:, 0] = aa * np.cos(tt)
    pts[:, 1] = aa**2 * np.sin(tt)
    pts[:, 2] = aa
    return TupleDataset.from_rows(pts)


def _parse_count(text: str) -> int:
    text = text.strip()
    try:
        if "^" in text:
            base, exp = text.split("^")
            value = int(base) ** int(exp)
        else:
            value = int(text)
    except ValueError:
        raise SpecError(f"bad count {text!r}") from None
    if value < 1:
        raise SpecError(f"count must be positive, got {value}")
    return value


def _parse_params(text: str) -> dict[str, int]:
    params = {}
    for item in filter(None, text.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise SpecError(f"expected key=value, got {item!r}")
        params[key.strip()] = _parse_count(value)
    return params


def from_spec(spec: str, seed: int = 0) -> TupleDataset:
    """Build a dataset from a generator spec string."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "constant":
        return constant_bits(_parse_count(arg))
    if kind == "alternating":
        return alternating_bits(_parse_count(arg))
    if kind == "random":
        return random_bits(_parse_count(arg), seed)
    if kind == "hypercube":
        params = _parse_params(arg)
        if set(params) != {"n", "m"}:
            raise SpecError("hypercube generator takes n=...,m=...")
        return hypercube(params["n"], params["m"], seed)
    if kind == "curve":
        params = _parse_params(arg) if arg else {"n": 100}
        if set(params) != {"n"}:
            raise SpecError("curve generator takes n=...")
        return curve(params["n"])
    raise SpecError(f"unknown generator {kind!r}")
