"""Graph-state construction and verification on interleaved optical sublattices."""

from ._core import (
    canonical_stabilizers,
    fidelity_report,
    graph_edges,
    sequence_text,
    version,
    witness_edges,
)

__all__ = [
    "canonical_stabilizers",
    "fidelity_report",
    "graph_edges",
    "sequence_text",
    "version",
    "witness_edges",
]

__version__ = version()
