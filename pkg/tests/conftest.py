import json
from pathlib import Path

import numpy as np
import pytest

from kdecomp.codec import TupleDataset, get_backend

GOLDEN_PATH = Path(__file__).parent / "golden.json"


@pytest.fixture(scope="session")
def golden():
    return json.loads(GOLDEN_PATH.read_text())


@pytest.fixture(scope="session")
def backend():
    return get_backend()


def seeded_random_corpus(n, count=50, seed=2012, max_rows=3000):
    """Seeded-random datasets: uniform values in [-1, 1], row counts in [1, max_rows)."""
    rng = np.random.default_rng(seed)
    return [
        TupleDataset.from_rows(rng.uniform(-1.0, 1.0, size=(int(rng.integers(1, max_rows)), n)))
        for _ in range(count)
    ]


STRUCTURED_KINDS = ("uniform", "ints", "correlated", "constant", "duplicate", "sorted", "gaussian", "bits")


def structured_corpus(n, count=50, seed=2012):
    """Mixed-structure datasets cycling through ``STRUCTURED_KINDS``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        kind = STRUCTURED_KINDS[i % len(STRUCTURED_KINDS)]
        m = int(rng.integers(1, 3000))
        if kind == "uniform":
            a = rng.uniform(-1, 1, (m, n))
        elif kind == "ints":
            a = rng.integers(-50, 50, (m, n)).astype(float)
        elif kind == "correlated":
            a = rng.uniform(-1, 1, (m, 1)) + rng.normal(0, 0.01, (m, n))
        elif kind == "constant":
            a = np.hstack([rng.uniform(-1, 1, (m, 1)), np.full((m, n - 1), 0.5)])
        elif kind == "duplicate":
            a = np.repeat(rng.uniform(-1, 1, (m, 1)), n, axis=1)
        elif kind == "sorted":
            a = np.sort(rng.uniform(-1, 1, (m, n)), axis=0)
        elif kind == "gaussian":
            a = rng.normal(0, 100, (m, n))
        else:
            a = rng.integers(0, 2, (m, n)).astype(float)
        out.append((kind, TupleDataset.from_rows(a)))
    return out
