"""Compression-based upper estimates of Kolmogorov complexity."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from .codec import (
    HEADER_SIZE,
    CompressorBackend,
    EncodedBlob,
    TupleDataset,
    encode,
    get_backend,
    self_delimit,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComplexityEstimate:
    """Compressed length ``k_hat`` of a self-delimited blob of ``raw_len`` bytes."""

    k_hat: int
    raw_len: int
    backend_id: str

    @property
    def density(self) -> float:
        """Compressed bytes per raw byte."""
        return self.k_hat / self.raw_len

    def to_dict(self) -> dict:
        return {"k_hat": self.k_hat, "raw_len": self.raw_len, "backend_id": self.backend_id}


def slack_bytes(raw_len: int) -> int:
    """Allowance for framing and logarithmic terms: 64 + ceil(log2(raw_len))."""
    return 64 + math.ceil(math.log2(max(raw_len, 1)))


def _resolve(backend) -> CompressorBackend:
    if isinstance(backend, CompressorBackend):
        return backend
    return get_backend(backend)


def estimate_blob(blob: EncodedBlob, backend=None) -> ComplexityEstimate:
    backend = _resolve(backend)
    k_hat = len(backend.compress(blob.payload))
    return ComplexityEstimate(k_hat, blob.declared_len, backend.name)


def estimate(d: TupleDataset, backend=None) -> ComplexityEstimate:
    """Estimate the complexity of a dataset as the compressed size of its blob."""
    return estimate_blob(encode(d), backend)


def estimate_bytes(b: bytes, backend=None) -> ComplexityEstimate:
    """Estimate the complexity of a raw byte string (self-delimited first)."""
    return estimate_blob(self_delimit(bytes(b)), backend)


def estimate_joint(d1: TupleDataset, d2: TupleDataset, backend=None) -> ComplexityEstimate:
    """Estimate K(d1, d2) from the concatenation of both self-delimited blobs.

    Each blob's length header tells the two parts apart.
    """
    backend = _resolve(backend)
    payload = encode(d1).payload + encode(d2).payload
    return ComplexityEstimate(len(backend.compress(payload)), len(payload), backend.name)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of a soft inequality ``lhs <= rhs + slack``."""

    name: str
    lhs: int
    rhs: int
    slack: int

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs + self.slack

    @property
    def margin(self) -> int:
        return self.rhs + self.slack - self.lhs


def _report(check: BoundCheck) -> BoundCheck:
    if not check.ok:
        log.warning("backend anomaly: %s violated by %d bytes", check.name, -check.margin)
    return check


def check_subadditivity(d1: TupleDataset, d2: TupleDataset, backend=None) -> BoundCheck:
    """K(d1, d2) <= K(d1) + K(d2) + slack."""
    backend = _resolve(backend)
    joint = estimate_joint(d1, d2, backend)
    rhs = estimate(d1, backend).k_hat + estimate(d2, backend).k_hat
    return _report(BoundCheck("subadditivity", joint.k_hat, rhs, slack_bytes(joint.raw_len)))


def check_map_bound(d: TupleDataset, image: TupleDataset, backend=None) -> BoundCheck:
    """K(f(d)) <= K(d) + slack for a fixed computable map f with image ``image``."""
    backend = _resolve(backend)
    full = estimate(d, backend)
    return _report(BoundCheck("map bound", estimate(image, backend).k_hat, full.k_hat, slack_bytes(full.raw_len)))


def within_expansion_bound(est: ComplexityEstimate, backend=None) -> bool:
    """Whether ``est`` respects the backend's worst-case expansion bound."""
    backend = _resolve(backend)
    return 1 <= est.k_hat <= backend.expansion_bound(est.raw_len) and est.raw_len >= HEADER_SIZE
