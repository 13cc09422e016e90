class KdecompError(Exception):
    """Base class for all errors raised by kdecomp."""


class ScalarRangeError(KdecompError, ValueError):
    """A scalar falls outside the representable fixed-point range."""

    def __init__(self, message, row=None, col=None):
        super().__init__(message)
        self.row = row
        self.col = col


class ParseError(KdecompError, ValueError):
    """Malformed dataset text, blob, CSV or JSON input."""


class BackendError(KdecompError, KeyError):
    """Unknown compressor backend or invalid backend parameter."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class SpecError(KdecompError, ValueError):
    """A projection, configuration or generator request violates its contract."""


class EmptyRegionError(KdecompError):
    """A causal region selected no points."""

    def __init__(self, region):
        super().__init__(f"region {region!r} contains no points")
        self.region = region
