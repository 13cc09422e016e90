"""Column projections and the empirical check of the decomposition inequalities.

For a dataset ``x`` with ``n`` columns and the ``n`` single-column drops
``pi_1 .. pi_n`` the checked sandwich is::

    (n - 1) K(x) <= sum_i a_i K(pi_i(x)) + slack
    sum_i a_i K(pi_i(x)) <= n (K(x) + M) sup(a) + slack

with slack = c1 * log2(m) + c2 bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .codec import CompressorBackend, TupleDataset, get_backend
from .errors import SpecError
from .estimator import ComplexityEstimate, estimate

DEFAULT_SLACK = (8.0, 64.0)


@dataclass(frozen=True)
class ProjectionSpec:
    """Set of 1-based column indices to drop, kept sorted."""

    dropped_cols: tuple[int, ...]

    def __post_init__(self):
        cols = tuple(int(c) for c in self.dropped_cols)
        if len(set(cols)) != len(cols):
            raise SpecError(f"duplicate column indices in {cols}")
        object.__setattr__(self, "dropped_cols", tuple(sorted(cols)))

    @classmethod
    def drop(cls, *cols: int) -> "ProjectionSpec":
        return cls(cols)

    def validate(self, n_cols: int) -> None:
        for c in self.dropped_cols:
            if not 1 <= c <= n_cols:
                raise SpecError(f"column index {c} out of range 1..{n_cols}")
        if len(self.dropped_cols) >= n_cols:
            raise SpecError(f"cannot drop all {n_cols} columns")

    def kept(self, n_cols: int) -> list[int]:
        """0-based indices of the retained columns."""
        self.validate(n_cols)
        dropped = set(self.dropped_cols)
        return [j for j in range(n_cols) if j + 1 not in dropped]

    def label(self) -> str:
        return "drop{" + ",".join(str(c) for c in self.dropped_cols) + "}"


def project(d: TupleDataset, p: ProjectionSpec) -> TupleDataset:
    """Remove the columns named by ``p`` from every row, keeping row order."""
    return d.select_columns(p.kept(d.n_cols))


def canonical_family(n: int) -> list[ProjectionSpec]:
    """The ``n`` single-column drops ``[drop{1}, ..., drop{n}]``."""
    if n < 2:
        raise SpecError(f"canonical family needs n >= 2, got {n}")
    return [ProjectionSpec((i,)) for i in range(1, n + 1)]


@dataclass(frozen=True)
class DecompositionConfig:
    coefficients: tuple[float, ...] | None = None
    program_bound: float | None = None
    slack: tuple[float, float] = DEFAULT_SLACK

    def __post_init__(self):
        if self.coefficients is not None:
            coeffs = tuple(float(a) for a in self.coefficients)
            if any(a == 0 for a in coeffs):
                raise SpecError("decomposition coefficients must be non-zero")
            if not all(math.isfinite(a) for a in coeffs):
                raise SpecError("decomposition coefficients must be finite")
            object.__setattr__(self, "coefficients", coeffs)
        if self.program_bound is not None and self.program_bound < 0:
            raise SpecError("program bound must be non-negative")
        c1, c2 = self.slack
        object.__setattr__(self, "slack", (float(c1), float(c2)))

    def coefficients_for(self, n: int) -> tuple[float, ...]:
        if self.coefficients is None:
            return (1.0,) * n
        if len(self.coefficients) != n:
            raise SpecError(f"expected {n} coefficients, got {len(self.coefficients)}")
        return self.coefficients

    def slack_for(self, m: int) -> float:
        c1, c2 = self.slack
        return c1 * math.log2(m) + c2 if m >= 1 else c2

    def to_dict(self) -> dict:
        return {
            "coefficients": list(self.coefficients) if self.coefficients is not None else None,
            "program_bound": self.program_bound,
            "slack": list(self.slack),
        }


@dataclass(frozen=True)
class DecompositionReport:
    n: int
    m: int
    k_full: ComplexityEstimate
    per_projection: tuple[tuple[ProjectionSpec, ComplexityEstimate], ...]
    weighted_sum: float
    lhs: float
    ratio: float
    lower_ok: bool
    upper_ok: bool | None  # None when no program bound was supplied
    slack_used: float
    backend_id: str
    coefficients: tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "k_full": self.k_full.to_dict(),
            "per_projection": [
                {"dropped_cols": list(p.dropped_cols), **est.to_dict()} for p, est in self.per_projection
            ],
            "weighted_sum": self.weighted_sum,
            "lhs": self.lhs,
            "ratio": self.ratio,
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
            "slack_used": self.slack_used,
            "backend_id": self.backend_id,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["dropped_cols", "coefficient", "k_hat", "raw_len", "backend_id"])
        for (p, est), a in zip(self.per_projection, self.coefficients or (1.0,) * len(self.per_projection)):
            writer.writerow([" ".join(map(str, p.dropped_cols)), a, est.k_hat, est.raw_len, est.backend_id])
        return buf.getvalue()


def _estimates(datasets: Sequence[TupleDataset], backend: CompressorBackend, workers: int | None):
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(datasets) == 1:
        return [estimate(d, backend) for d in datasets]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda d: estimate(d, backend), datasets))


def verify_decomposition(
    d: TupleDataset,
    cfg: DecompositionConfig | None = None,
    backend: CompressorBackend | str | None = None,
    workers: int | None = None,
) -> DecompositionReport:
    """Estimate K for ``d`` and its canonical projections and check both bounds."""
    cfg = cfg or DecompositionConfig()
    if not isinstance(backend, CompressorBackend):
        backend = get_backend(backend)
    n, m = d.n_cols, d.m_rows
    family = canonical_family(n)
    coeffs = cfg.coefficients_for(n)

    d.tokens  # render once; projections slice the cached text
    ests = _estimates([d] + [project(d, p) for p in family], backend, workers)
    k_full, proj = ests[0], ests[1:]

    weighted_sum = math.fsum(a * e.k_hat for a, e in zip(coeffs, proj))
    lhs = (n - 1) * k_full.k_hat
    slack = cfg.slack_for(m)
    lower_ok = weighted_sum + slack >= lhs
    if cfg.program_bound is None:
        upper_ok = None
    else:
        upper_ok = weighted_sum <= n * (k_full.k_hat + cfg.program_bound) * max(coeffs) + slack
    return DecompositionReport(
        n=n,
        m=m,
        k_full=k_full,
        per_projection=tuple(zip(family, proj)),
        weighted_sum=weighted_sum,
        lhs=float(lhs),
        ratio=weighted_sum / k_full.k_hat,
        lower_ok=lower_ok,
        upper_ok=upper_ok,
        slack_used=slack,
        backend_id=backend.name,
        coefficients=coeffs,
    )


def convergence_probe(
    generator: Callable[[int], TupleDataset],
    n_schedule: Sequence[int],
    cfg: DecompositionConfig | None = None,
    backend: CompressorBackend | str | None = None,
) -> list[tuple[int, float, float]]:
    """Residuals of K(x) against the two normalized projection sums, per n.

    Returns ``(n, |K - sum a_i K_i / (n-1)|, |K - sum a_i K_i / n|)``.  The
    limit these residuals are hoped to approach is not established, so the
    values are for inspection only.
    """
    cfg = cfg or DecompositionConfig()
    schedule = list(n_schedule)
    if any(n < 2 for n in schedule):
        raise SpecError("every n in the schedule must be >= 2")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise SpecError("n schedule must be strictly increasing")
    out = []
    for n in schedule:
        report = verify_decomposition(generator(n), cfg, backend)
        k = report.k_full.k_hat
        s = report.weighted_sum
        out.append((n, abs(k - s / (n - 1)), abs(k - s / n)))
    return out
