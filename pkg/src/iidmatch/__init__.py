"""Online bipartite matching under known i.i.d. arrivals: algorithms,
graph generators, and a deterministic benchmark harness."""

from .graph import (InstanceStream, Matching, Permutation, TypeGraph,
                    matching_size, sample_instance, validate_type_graph)

__all__ = ["InstanceStream", "Matching", "Permutation", "TypeGraph",
           "matching_size", "sample_instance", "validate_type_graph"]

__version__ = "0.1.0"
