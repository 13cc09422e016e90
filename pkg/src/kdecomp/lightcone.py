"""Complexity study of probe clouds split by the light-cone predicate (c = 1).

A probe at (x, y, z, t) is inside the cone when x^2 + y^2 + z^2 - t^2 < 0,
outside when it is > 0, and on the cone within a band of half-width
epsilon.  All classification is done in exact integer arithmetic on the
fixed-point coordinates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal

import numpy as np

from .codec import SCALE, CompressorBackend, TupleDataset, get_backend, quantize
from .decomposition import ProjectionSpec, project
from .errors import EmptyRegionError, SpecError
from .estimator import ComplexityEstimate, estimate

AXES = "xyzt"
SUBSETS = ("xyzt", "xyz", "xyt", "xzt", "yzt", "xy", "xz", "xt", "yz", "yt", "zt")
PLANES = tuple(s for s in SUBSETS if len(s) == 2)
TRIPLES = tuple(s for s in SUBSETS if len(s) == 3)
REGION_TAGS = ("full", "inside", "on", "outside")
DEFAULT_M = 40000


def subset_projection(subset: str) -> ProjectionSpec:
    """Projection that keeps the named coordinates, e.g. ``"xt"`` drops y and z."""
    if not subset or any(c not in AXES for c in subset) or len(set(subset)) != len(subset):
        raise SpecError(f"bad coordinate subset {subset!r}")
    return ProjectionSpec(tuple(i + 1 for i, c in enumerate(AXES) if c not in subset))


@dataclass(frozen=True)
class ProbeCloud:
    points: TupleDataset
    seed: int
    m: int

    def __post_init__(self):
        if self.points.n_cols != 4:
            raise SpecError("probe cloud must have 4 columns (x, y, z, t)")
        if self.points.m_rows != self.m:
            raise SpecError("probe count does not match points")
        if self.m and np.abs(self.points.micros).max() > SCALE:
            raise SpecError("probe coordinates must lie in [-1, 1]")


def generate_cloud(m: int = DEFAULT_M, seed: int = 0) -> ProbeCloud:
    """``m`` probes drawn uniformly from [-1, 1]^4, in generation order."""
    if m < 1:
        raise SpecError(f"probe count must be >= 1, got {m}")
    pts = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(m, 4))
    return ProbeCloud(TupleDataset.from_rows(pts), seed, m)


def _epsilon_units(epsilon) -> int:
    """Band half-width in units of 1e-12, the scale of squared micro-units."""
    if isinstance(epsilon, float):
        epsilon = Decimal(repr(epsilon))
    eps = quantize(epsilon)
    if eps < 0:
        raise SpecError("epsilon must be non-negative")
    return eps * SCALE


@dataclass(frozen=True)
class CausalRegion:
    tag: str
    epsilon: float = 0.0

    def __post_init__(self):
        if self.tag not in REGION_TAGS:
            raise SpecError(f"unknown region {self.tag!r}; expected one of {', '.join(REGION_TAGS)}")
        _epsilon_units(self.epsilon)

    def to_dict(self) -> dict:
        return {"tag": self.tag, "epsilon": self.epsilon}


def _interval(micros: np.ndarray) -> np.ndarray:
    x, y, z, t = (micros[:, i] for i in range(4))
    return x * x + y * y + z * z - t * t


def classify(p, epsilon=0.0) -> str:
    """Region tag of one point ``(x, y, z, t)``."""
    x, y, z, t = (quantize(v) for v in p)
    q = x * x + y * y + z * z - t * t
    eps = _epsilon_units(epsilon)
    if abs(q) <= eps:
        return "on"
    return "inside" if q < 0 else "outside"


def region_mask(cloud: ProbeCloud, region: CausalRegion) -> np.ndarray:
    if region.tag == "full":
        return np.ones(cloud.m, dtype=bool)
    q = _interval(cloud.points.micros)
    eps = _epsilon_units(region.epsilon)
    if region.tag == "on":
        return np.abs(q) <= eps
    if region.tag == "inside":
        return q < -eps
    return q > eps


def region_subset(cloud: ProbeCloud, region: CausalRegion) -> TupleDataset:
    """Points of ``cloud`` in ``region``, in their original order."""
    if region.tag == "full":
        return cloud.points
    return cloud.points.select_rows(region_mask(cloud, region))


@dataclass(frozen=True)
class LightconeReport:
    region: CausalRegion
    m_region: int
    complexity_by_subset: dict[str, ComplexityEstimate]
    backend_id: str
    seed: int

    def k(self, subset: str = "xyzt") -> int:
        return self.complexity_by_subset[subset].k_hat

    def density(self, subset: str = "xyzt") -> float:
        return self.complexity_by_subset[subset].density

    def spread(self, subsets=TRIPLES) -> float:
        """(max - min) / min of k_hat over ``subsets``."""
        ks = [self.k(s) for s in subsets]
        return (max(ks) - min(ks)) / min(ks)

    def to_dict(self) -> dict:
        return {
            "region": self.region.to_dict(),
            "m_region": self.m_region,
            "complexity_by_subset": {s: e.to_dict() for s, e in self.complexity_by_subset.items()},
            "density_by_subset": {s: e.density for s, e in self.complexity_by_subset.items()},
            "backend_id": self.backend_id,
            "seed": self.seed,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def study(cloud: ProbeCloud, region: CausalRegion, backend: CompressorBackend | str | None = None) -> LightconeReport:
    """Estimate complexity of the region and of all its coordinate-subset projections."""
    if not isinstance(backend, CompressorBackend):
        backend = get_backend(backend)
    data = region_subset(cloud, region)
    if data.m_rows == 0:
        raise EmptyRegionError(region.tag)
    by_subset = {s: estimate(project(data, subset_projection(s)), backend) for s in SUBSETS}
    return LightconeReport(region, data.m_rows, by_subset, backend.name, cloud.seed)


@dataclass(frozen=True)
class FilterResult:
    mode: str
    threshold: int
    passed: tuple[str, ...]
    reports: dict[str, LightconeReport] = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "threshold": self.threshold,
            "passed": list(self.passed),
            "reports": {tag: r.to_dict() for tag, r in self.reports.items()},
        }


def _filter(mode, cloud, epsilon, threshold, backend, regions) -> FilterResult:
    if threshold <= 0:
        raise SpecError("filter threshold must be positive")
    if not isinstance(backend, CompressorBackend):
        backend = get_backend(backend)
    reports = {}
    for tag in regions:
        region = CausalRegion(tag, epsilon)
        if not region_mask(cloud, region).any():
            continue
        reports[tag] = study(cloud, region, backend)
    if mode == "low":
        passed = tuple(t for t, r in reports.items() if r.k() < threshold)
    else:
        passed = tuple(t for t, r in reports.items() if r.k() >= threshold)
    return FilterResult(mode, threshold, passed, reports)


def lowpass_filter(cloud, epsilon=0.0, threshold: int = 1, backend=None, regions=REGION_TAGS) -> FilterResult:
    """Regions whose xyzt complexity is strictly below ``threshold`` pass.

    Empty regions are skipped.
    """
    return _filter("low", cloud, epsilon, threshold, backend, regions)


def highpass_filter(cloud, epsilon=0.0, threshold: int = 1, backend=None, regions=REGION_TAGS) -> FilterResult:
    """Regions whose xyzt complexity is at or above ``threshold`` pass."""
    return _filter("high", cloud, epsilon, threshold, backend, regions)
