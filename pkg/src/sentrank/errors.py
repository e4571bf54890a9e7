"""Exception types shared across the package."""


class SentrankError(Exception):
    """Base class for package errors."""


class EmbeddingLoadError(SentrankError):
    """Vector file is malformed (message names the line)."""


class LookupMissError(SentrankError):
    """A unit key has no embedding."""


class ZeroVectorError(SentrankError):
    """Similarity is undefined for an all-zero vector."""


class DistanceError(SentrankError):
    """Distance requested over an empty sentence bag."""


class DegenerateGraphError(SentrankError):
    """Too few nodes to build a graph."""


class ConfigurationError(SentrankError):
    """Inconsistent pipeline or scoring configuration."""


class DataError(SentrankError):
    """Corpus or judge data violates its schema."""
