"""Exception types shared across the pipeline."""


class StanceError(Exception):
    """Base class for all rumourstance errors."""


class CorpusError(StanceError):
    """Malformed or inconsistent dataset input."""


class ResourceError(StanceError):
    """Missing or malformed resource bundle file."""


class SchemaError(StanceError):
    """Feature schema / dictionary mismatch."""


class ModelError(StanceError):
    """Model fitting, prediction, or serialization failure."""


class EvalError(StanceError):
    """Invalid evaluation protocol input."""


class LeakageError(EvalError):
    """Train/test contamination detected by the fold guard."""


class ConfigError(StanceError):
    """Invalid experiment configuration."""
