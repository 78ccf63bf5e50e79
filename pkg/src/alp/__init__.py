"""Landmark lower bounds for A*: the ALT baseline and the dual-landmark ALP bound over a distributed embedding."""

from .embedding import AlpIndex, AltIndex, build_alp_index, build_alt_index, select_landmarks, sssp
from .graph import Graph, SubgraphView, VertexSet, generate, induced_subgraph, parse_dimacs
from .heuristics import AlpHeuristic, AltHeuristic, HeuristicConfig, QuadSides, alp_bounds, alp_h, alt_h
from .partition import Partition, louvain, modularity
from .search import QueryResult, QueryStats, astar_query, dijkstra_query

__all__ = [
    "AlpHeuristic", "AlpIndex", "AltHeuristic", "AltIndex", "Graph", "HeuristicConfig", "Partition",
    "QuadSides", "QueryResult", "QueryStats", "SubgraphView", "VertexSet", "alp_bounds", "alp_h", "alt_h",
    "astar_query", "build_alp_index", "build_alt_index", "dijkstra_query", "generate", "induced_subgraph",
    "louvain", "modularity", "parse_dimacs", "select_landmarks", "sssp",
]
