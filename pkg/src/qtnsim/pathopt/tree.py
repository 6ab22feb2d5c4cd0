"""Binary contraction trees and their cost annotation.

A tree is built over hypergraph vertices (leaves) and annotated bottom-up:
an internal node's result indices are exactly the indices of its two
children that are still needed outside the combined subtree (or are open),
which makes the annotation hyperedge-aware by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cost import PairCost, pair_cost


@dataclass
class Leaf:
    node_id: int
    indices: tuple[int, ...] = ()
    size: int = 1


@dataclass
class Pair:
    left: "Leaf | Pair"
    right: "Leaf | Pair"
    out_indices: tuple[int, ...] = ()
    cost: PairCost | None = None


TreeNode = Leaf | Pair


def _postorder(root: TreeNode):
    stack: list[tuple[TreeNode, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, Leaf) or expanded:
            yield node
            continue
        stack.append((node, True))
        stack.append((node.right, False))
        stack.append((node.left, False))


@dataclass
class ContractionTree:
    root: TreeNode
    total_flops: int = 0
    total_memory: int = 0
    max_size: int = 1
    width: float = 0.0

    def leaves(self):
        for node in _postorder(self.root):
            if isinstance(node, Leaf):
                yield node

    def internal(self):
        for node in _postorder(self.root):
            if isinstance(node, Pair):
                yield node

    def leaf_ids(self) -> list[int]:
        return [leaf.node_id for leaf in self.leaves()]


def annotate(root: TreeNode, leaf_indices, dims, open_edges,
             exclude=frozenset()) -> ContractionTree:
    """(Re)compute result indices and costs for every node of a tree.

    ``exclude`` removes edges from every leaf first (how slicing re-annotates
    a residual tree without rebuilding it).
    """
    total_count: dict[int, int] = {}
    for node in _postorder(root):
        if isinstance(node, Leaf):
            for e in leaf_indices[node.node_id]:
                if e not in exclude:
                    total_count[e] = total_count.get(e, 0) + 1

    counts: dict[int, dict[int, int]] = {}
    total_flops = 0
    total_memory = 0
    max_size = 1
    for node in _postorder(root):
        if isinstance(node, Leaf):
            idx = tuple(e for e in leaf_indices[node.node_id] if e not in exclude)
            node.indices = idx
            node.size = math.prod(dims[e] for e in idx) if idx else 1
            counts[id(node)] = {e: 1 for e in idx}
            max_size = max(max_size, node.size)
            continue
        cl = counts.pop(id(node.left))
        cr = counts.pop(id(node.right))
        merged = dict(cl)
        for e, c in cr.items():
            merged[e] = merged.get(e, 0) + c
        left_idx = (node.left.indices if isinstance(node.left, Leaf)
                    else node.left.out_indices)
        right_idx = (node.right.indices if isinstance(node.right, Leaf)
                     else node.right.out_indices)
        out = tuple(sorted(e for e in set(left_idx) | set(right_idx)
                           if e in open_edges or merged[e] < total_count[e]))
        cost = pair_cost(left_idx, right_idx, out, dims)
        node.out_indices = out
        node.cost = cost
        counts[id(node)] = merged
        total_flops += cost.flops
        total_memory += cost.memory
        max_size = max(max_size, cost.largest)

    return ContractionTree(root=root, total_flops=total_flops,
                           total_memory=total_memory, max_size=max_size,
                           width=math.log2(max_size) if max_size > 1 else 0.0)


def tree_signature(tree: ContractionTree) -> str:
    """Canonical text form; equal strings = identical tree structure."""
    def sig(node: TreeNode) -> str:
        if isinstance(node, Leaf):
            return str(node.node_id)
        return f"({sig(node.left)},{sig(node.right)})"
    return sig(tree.root)


def tree_to_json(tree: ContractionTree) -> dict:
    """Export for cost reports: post-order node list with per-pair costs."""
    nodes = []
    order: dict[int, int] = {}
    for node in _postorder(tree.root):
        if isinstance(node, Leaf):
            order[id(node)] = len(nodes)
            nodes.append({"leaf": node.node_id})
        else:
            order[id(node)] = len(nodes)
            assert node.cost is not None
            nodes.append({
                "children": [order[id(node.left)], order[id(node.right)]],
                "flops": node.cost.flops,
                "width": math.log2(node.cost.largest) if node.cost.largest > 1 else 0.0,
            })
    return {"nodes": nodes, "total_flops": tree.total_flops,
            "width": tree.width}
