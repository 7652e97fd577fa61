"""Exact boundary spin correlations of the planar Ising model, their
random-current and alternating-flow representations, and the determinant
and Pfaffian identities relating them."""

from .corpus import standard_corpus
from .currents import OmegaPair, double_current_prob, gamma_space, prob_parallel
from .errors import CapacityError, EmbeddingError, GraphFormatError, OrderingError, PlanarIsingError
from .even import correlation, even_polynomial
from .flows import AlternatingFlow, State, enumerate_flows, flow_weight, z_aflow
from .graph import PlanarGraph, build_directed_modification, load_graph, parse_graph
from .linalg import build_K, build_M, build_N, det_exact, pfaffian_exact

__all__ = [
    "AlternatingFlow", "CapacityError", "EmbeddingError", "GraphFormatError", "OmegaPair",
    "OrderingError", "PlanarGraph", "PlanarIsingError", "State", "build_K", "build_M", "build_N",
    "build_directed_modification", "correlation", "det_exact", "double_current_prob",
    "enumerate_flows", "even_polynomial", "flow_weight", "gamma_space", "load_graph",
    "parse_graph", "pfaffian_exact", "prob_parallel", "standard_corpus", "z_aflow",
]
