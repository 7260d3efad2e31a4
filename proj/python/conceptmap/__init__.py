"""Concept maps from report collections.

Thin wrapper over the C++ core. Structured results are plain dicts with the
same keys as the HTTP API.
"""

from ._conceptmap import (
    ConceptmapError,
    Graph,
    __version__,
    extract,
    normalize_field,
    prune,
    run_pipeline,
)

__all__ = [
    "ConceptmapError",
    "Graph",
    "__version__",
    "extract",
    "normalize_field",
    "prune",
    "run_pipeline",
]
