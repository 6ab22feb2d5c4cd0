"""Structure-only view of a tensor network used by the path optimizer.

Vertices are tensor-node ids; a hyperedge is a summation index with any
number of incident vertices.  Edge weight for partitioning purposes is
log2(dimension); the cost model uses the integer dimensions directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class HyperEdge:
    dim: int
    pins: tuple[int, ...]  # incident vertex ids, sorted
    open: bool = False

    @property
    def weight(self) -> float:
        return math.log2(self.dim)


@dataclass
class Hypergraph:
    vertices: tuple[int, ...]                 # sorted node ids
    edges: dict[int, HyperEdge]               # edge id -> edge
    leaf_indices: dict[int, tuple[int, ...]]  # vertex id -> its edge ids, in axis order

    def __post_init__(self) -> None:
        self.vertices = tuple(sorted(self.vertices))

    def dims(self) -> dict[int, int]:
        return {e: edge.dim for e, edge in self.edges.items()}

    def open_edges(self) -> set[int]:
        return {e for e, edge in self.edges.items() if edge.open}

    def incident(self, vertex: int) -> tuple[int, ...]:
        return self.leaf_indices[vertex]

    def vertex_size(self, vertex: int) -> int:
        size = 1
        for e in self.leaf_indices[vertex]:
            size *= self.edges[e].dim
        return size
