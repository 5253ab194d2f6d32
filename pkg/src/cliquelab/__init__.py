"""Clique factors, tilings, l-independence numbers and absorption checks."""
from .graph import Graph, induced_subgraph, min_degree, parse_graph, serialize_graph

__version__ = "0.1.0"

__all__ = ["Graph", "induced_subgraph", "min_degree", "parse_graph", "serialize_graph",
           "__version__"]
