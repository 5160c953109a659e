"""Canonical divisor representatives on graphs and metric graphs."""

from .divisor import Divisor
from .graph import Edge, WeightedGraph, refine, spanning_trees, validate_graph
from .metric import MetricDivisor, MetricPoint

__all__ = [
    "Divisor",
    "Edge",
    "MetricDivisor",
    "MetricPoint",
    "WeightedGraph",
    "refine",
    "spanning_trees",
    "validate_graph",
]

__version__ = "0.1.0"
