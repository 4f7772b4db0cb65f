"""Rotor walks, return flows and rotor games on tree-like multigraphs."""
from .counts import INF
from .graph import RotorGraph, build_graph, validate
from .instance import Instance, parse_instance, serialize_instance

__version__ = "0.1.0"

__all__ = ["INF", "RotorGraph", "build_graph", "validate", "Instance", "parse_instance",
           "serialize_instance", "__version__"]
