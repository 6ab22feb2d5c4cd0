"""Index slicing: trade one big contraction for 2^k smaller, independent
ones, summed at the end.

The greedy selector repeatedly picks a closed index out of the currently
oversized tensors until every tensor fits the memory target.  Pseudo slicing
runs the exact same selection but only reports the projected cost, which is
what the two-phase path search uses to score candidate trees cheaply.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

from .errors import PathSearchTimeout, Unsliceable
from .pathopt.hypergraph import Hypergraph
from .pathopt.search import _trial_config, build_tree
from .pathopt.tree import ContractionTree, Leaf, annotate, _postorder
from .pathopt.partition import PartitionerConfig
from .pool import run_tasks


@dataclass(frozen=True)
class SlicingConfig:
    target_size: int = 2 ** 28          # max elements per tensor
    repeats: int = 1024                 # real-slicing trials in phase 2
    pseudo_trials: int = 128            # pseudo-slicing trials per candidate tree
    target_num_slices: int | None = None
    contract_parallel: bool = False

    def __post_init__(self) -> None:
        if self.target_size < 1:
            raise ValueError("target_size must be positive")
        if self.repeats < 1 or self.pseudo_trials < 1:
            raise ValueError("trial counts must be positive")
        if self.target_num_slices is not None and self.target_num_slices < 1:
            raise ValueError("target_num_slices must be positive")


@dataclass(frozen=True)
class SlicingPlan:
    sliced_indices: tuple[int, ...]     # in selection order
    tree: ContractionTree               # annotated with sliced edges removed
    n_slices: int
    per_slice_flops: int
    overhead_ratio: float

    @property
    def sliced_flops(self) -> int:
        return self.n_slices * self.per_slice_flops


def _tensor_index_sets(root):
    """(size, index set) of every tensor the tree produces or reads."""
    out = []
    for node in _postorder(root):
        if isinstance(node, Leaf):
            out.append((node.size, node.indices))
        else:
            out.append((node.cost.size_out, node.out_indices))
    return out


def _select(tree: ContractionTree, h: Hypergraph, cfg: SlicingConfig,
            seed: int):
    """Greedy slice selection.  Re-annotates the tree in place after every
    pick; returns (sliced tuple, final annotation, unsliced flops)."""
    rng = random.Random(seed)
    dims = h.dims()
    open_edges = h.open_edges()
    sliced: list[int] = []
    ann = annotate(tree.root, h.leaf_indices, dims, open_edges)
    unsliced_flops = ann.total_flops

    while True:
        if cfg.target_num_slices is not None:
            n_slices = math.prod(dims[e] for e in sliced) if sliced else 1
            if n_slices >= cfg.target_num_slices:
                break
        elif ann.max_size <= cfg.target_size:
            break

        tensors = _tensor_index_sets(tree.root)
        oversized = [(s, idx) for s, idx in tensors if s > cfg.target_size]
        if not oversized:
            # only reachable in slice-count mode: keep carving the largest
            top = max(s for s, _ in tensors)
            oversized = [(s, idx) for s, idx in tensors if s == top]
        largest = max(s for s, _ in oversized)

        in_largest: dict[int, int] = {}
        in_any: dict[int, int] = {}
        for s, idx in oversized:
            for e in idx:
                if dims[e] < 2 or e in open_edges:
                    continue
                in_any[e] = in_any.get(e, 0) + 1
                if s == largest:
                    in_largest[e] = in_largest.get(e, 0) + 1
        if not in_any:
            raise Unsliceable(
                "no closed index left to slice but the target is unmet")
        best_key = min((-in_largest.get(e, 0), -c) for e, c in in_any.items())
        tied = sorted(e for e, c in in_any.items()
                      if (-in_largest.get(e, 0), -c) == best_key)
        sliced.append(rng.choice(tied))
        ann = annotate(tree.root, h.leaf_indices, dims, open_edges,
                       exclude=frozenset(sliced))

    return tuple(sliced), ann, unsliced_flops


def _plan_from_selection(sliced, ann, unsliced_flops, dims) -> SlicingPlan:
    n_slices = math.prod(dims[e] for e in sliced) if sliced else 1
    per_slice = ann.total_flops
    ratio = (n_slices * per_slice / unsliced_flops) if unsliced_flops else 1.0
    return SlicingPlan(sliced_indices=sliced, tree=ann, n_slices=n_slices,
                       per_slice_flops=per_slice, overhead_ratio=ratio)


def greedy_slice(tree: ContractionTree, h: Hypergraph, cfg: SlicingConfig,
                 seed: int = 0) -> SlicingPlan:
    """Slice until every tensor fits cfg.target_size (or, if set, until
    n_slices reaches cfg.target_num_slices).  The tree is re-annotated in
    place with the sliced edges removed."""
    sliced, ann, unsliced = _select(tree, h, cfg, seed)
    return _plan_from_selection(sliced, ann, unsliced, h.dims())


def pseudo_slice_cost(tree: ContractionTree, h: Hypergraph,
                      cfg: SlicingConfig, seed: int = 0) -> int:
    """Projected total flops (n_slices * per-slice flops) of greedy slicing
    with this seed, without keeping the rewrite.  The tree is left fully
    annotated (no exclusions)."""
    sliced, ann, _ = _select(tree, h, cfg, seed)
    dims = h.dims()
    n_slices = math.prod(dims[e] for e in sliced) if sliced else 1
    cost = n_slices * ann.total_flops
    if sliced:
        annotate(tree.root, h.leaf_indices, dims, h.open_edges())
    return cost


def _fits_unsliced(tree: ContractionTree, cfg: SlicingConfig) -> bool:
    return cfg.target_num_slices is None and tree.max_size <= cfg.target_size


def two_phase_search(h: Hypergraph, path_cfg: PartitionerConfig,
                     slice_cfg: SlicingConfig) -> tuple[ContractionTree, SlicingPlan]:
    """Phase 1: score every path trial by its best pseudo-sliced cost and
    keep only the winning tree.  Phase 2: real slicing trials on that tree;
    best plan by (total sliced flops, slice count), earliest seed on ties."""
    start = time.monotonic()
    deadline = start + path_cfg.max_time

    def scored_trial(i: int):
        tree = build_tree(h, _trial_config(path_cfg, i))
        if _fits_unsliced(tree, slice_cfg):
            return tree.total_flops, tree
        cost = min(pseudo_slice_cost(tree, h, slice_cfg, seed=k)
                   for k in range(slice_cfg.pseudo_trials))
        return cost, tree

    best_tree = None
    best_score = None
    if path_cfg.search_parallel > 1:
        results = run_tasks(scored_trial, list(range(path_cfg.max_repeats)),
                            path_cfg.search_parallel, deadline=deadline)
        for res in results:
            if res is None:
                continue
            score, tree = res
            if best_score is None or score < best_score:
                best_score, best_tree = score, tree
    else:
        for i in range(path_cfg.max_repeats):
            if i > 0 and time.monotonic() > deadline:
                break
            score, tree = scored_trial(i)
            if best_score is None or score < best_score:
                best_score, best_tree = score, tree
    if best_tree is None:
        raise PathSearchTimeout("no path-search trial completed in time")

    if _fits_unsliced(best_tree, slice_cfg):
        ann = annotate(best_tree.root, h.leaf_indices, h.dims(), h.open_edges())
        return ann, _plan_from_selection((), ann, ann.total_flops, h.dims())

    best_pick = None
    best_key = None
    for k in range(slice_cfg.repeats):
        if k > 0 and time.monotonic() > deadline:
            break
        sliced, ann, unsliced = _select(best_tree, h, slice_cfg, seed=k)
        dims = h.dims()
        n_slices = math.prod(dims[e] for e in sliced) if sliced else 1
        key = (n_slices * ann.total_flops, n_slices)
        if best_key is None or key < best_key:
            best_key, best_pick = key, (sliced, unsliced)

    sliced, unsliced = best_pick
    ann = annotate(best_tree.root, h.leaf_indices, h.dims(), h.open_edges(),
                   exclude=frozenset(sliced))
    return ann, _plan_from_selection(sliced, ann, unsliced, h.dims())
