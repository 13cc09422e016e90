"""Compression-based Kolmogorov complexity estimates, projection
decompositions, and the light-cone complexity study."""

__version__ = "0.1.0"

from .codec import (  # noqa: E402
    BACKENDS,
    DEFAULT_BACKEND,
    CompressorBackend,
    EncodedBlob,
    TupleDataset,
    compress,
    decode,
    encode,
    get_backend,
    read_csv,
    read_json,
)
from .decomposition import (  # noqa: E402
    DecompositionConfig,
    DecompositionReport,
    ProjectionSpec,
    canonical_family,
    convergence_probe,
    project,
    verify_decomposition,
)
from .errors import (  # noqa: E402
    BackendError,
    EmptyRegionError,
    KdecompError,
    ParseError,
    ScalarRangeError,
    SpecError,
)
from .estimator import ComplexityEstimate, estimate, estimate_bytes, estimate_joint  # noqa: E402
from .lightcone import (  # noqa: E402
    CausalRegion,
    LightconeReport,
    ProbeCloud,
    classify,
    generate_cloud,
    highpass_filter,
    lowpass_filter,
    region_subset,
    study,
)
