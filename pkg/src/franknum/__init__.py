"""Frank number of 3-edge-connected cubic graphs: certificates and searches."""
from .graphio import Graph, parse_graph6, write_graph6, classify
from .orientation import FrankCertificate, Orientation, deletable_edges, is_strong, verify_certificate

__all__ = [
    "Graph", "parse_graph6", "write_graph6", "classify",
    "FrankCertificate", "Orientation", "deletable_edges", "is_strong", "verify_certificate",
]
__version__ = "0.1.0"
