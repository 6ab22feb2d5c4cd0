from .hypergraph import Hypergraph, HyperEdge
from .tree import (ContractionTree, Leaf, Pair, annotate, tree_signature,
                   tree_to_json)
from .partition import bipartition, PartitionerConfig
from .search import build_tree, search, greedy_baseline

__all__ = [
    "Hypergraph", "HyperEdge", "ContractionTree", "Leaf", "Pair", "annotate",
    "tree_signature", "tree_to_json", "bipartition", "PartitionerConfig",
    "build_tree", "search", "greedy_baseline",
]
