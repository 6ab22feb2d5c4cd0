"""Contraction-tree construction and the trial-based search loop.

``build_tree`` recursively bi-partitions the hypergraph top-down; ``search``
runs independently seeded trials and keeps the best tree by (width,
total_flops); ``greedy_baseline`` is the classic cheapest-pair-first
bottom-up pathfinder used for comparison.
"""

from __future__ import annotations

import random
import time
from dataclasses import replace

from ..errors import PathSearchTimeout
from ..pool import run_tasks
from .hypergraph import Hypergraph
from .partition import PartitionerConfig, bipartition
from .cost import pair_cost
from .tree import ContractionTree, Leaf, Pair, annotate, _postorder


def build_tree(h: Hypergraph, cfg: PartitionerConfig) -> ContractionTree:
    rng = random.Random(cfg.seed)
    open_edges = h.open_edges()

    def outer_of(vertices: set) -> set:
        outer = set()
        for eid, edge in h.edges.items():
            inside = any(p in vertices for p in edge.pins)
            if inside and (edge.open or any(p not in vertices for p in edge.pins)):
                outer.add(eid)
        return outer

    def rec(vertices: tuple[int, ...]):
        if len(vertices) == 1:
            return Leaf(vertices[0])
        vset = set(vertices)
        p0, p1 = bipartition(h, vertices, outer_of(vset),
                             eps=cfg.imbalance, lam=cfg.balance_weight, rng=rng)
        return Pair(rec(p0), rec(p1))

    root = rec(h.vertices)
    tree = annotate(root, h.leaf_indices, h.dims(), open_edges)
    return _reassociate(tree, h)


def _idx(node) -> tuple[int, ...]:
    return node.indices if isinstance(node, Leaf) else node.out_indices


def _reassociate(tree: ContractionTree, h: Hypergraph) -> ContractionTree:
    """Rotation-style local search: wherever re-associating three adjacent
    subtrees ((P,Q),R vs (P,R),Q vs (Q,R),P) lowers flops without raising
    the tree's memory peak, rewrite in place.  Cut-driven bisection settles
    chains into balanced shapes; this pass slides them back to the cheaper
    caterpillar orders.

    Moves are local: the rewritten node keeps its output indices, so
    ancestors and sibling subtrees stay valid and only the new inner pair
    needs fresh annotation.  One full re-annotation at the end recomputes
    the totals.
    """
    dims = h.dims()
    cap = tree.max_size
    internal = [n for n in _postorder(tree.root) if isinstance(n, Pair)]
    budget = 4 * len(internal) + 16
    moves = 0
    dropped: set[int] = set()
    for _ in range(32):
        if moves >= budget:
            break
        changed = False
        for node in internal:
            if moves >= budget:
                break
            if id(node) in dropped or node.cost is None:
                continue
            candidates = []
            a, b = node.left, node.right
            if isinstance(b, Pair):
                candidates += [(b.right, a, b.left, b), (b.left, a, b.right, b)]
            if isinstance(a, Pair):
                candidates += [(a.right, b, a.left, a), (a.left, b, a.right, a)]
            if not candidates:
                continue
            out_x = set(node.out_indices)
            best = None
            for r, p, q, old_inner in candidates:
                ip, iq, ir = set(_idx(p)), set(_idx(q)), set(_idx(r))
                out_inner = tuple(sorted((ip | iq) & (ir | out_x)))
                c_in = pair_cost(_idx(p), _idx(q), out_inner, dims)
                c_out = pair_cost(out_inner, _idx(r), node.out_indices, dims)
                gain = node.cost.flops + old_inner.cost.flops \
                    - c_in.flops - c_out.flops
                if gain <= 0 or max(c_in.largest, c_out.largest) > cap:
                    continue
                if best is None or gain > best[0]:
                    best = (gain, r, p, q, old_inner, out_inner, c_in, c_out)
            if best is None:
                continue
            _, r, p, q, old_inner, out_inner, c_in, c_out = best
            inner = Pair(p, q, out_indices=out_inner, cost=c_in)
            node.left, node.right = inner, r
            node.cost = c_out
            dropped.add(id(old_inner))
            internal.append(inner)
            moves += 1
            changed = True
        if not changed:
            break
    if moves == 0:
        return tree
    return annotate(tree.root, h.leaf_indices, dims, h.open_edges())


def _trial_config(cfg: PartitionerConfig, trial: int) -> PartitionerConfig:
    """Trial 0 runs the configured parameters verbatim; later trials jitter
    the imbalance and balance weight for search diversity."""
    if trial == 0:
        return cfg
    rng = random.Random(cfg.seed * 1_000_003 + trial)
    return replace(cfg,
                   seed=cfg.seed + trial,
                   imbalance=rng.choice([0.03, 0.08, 0.15, 0.25, 0.35]),
                   balance_weight=rng.choice([0.5, 1.0, 2.0]))


def search(h: Hypergraph, cfg: PartitionerConfig) -> ContractionTree:
    """Best tree over up to max_repeats seeded trials within max_time.

    Deterministic for a fixed seed and trial count: ties keep the earliest
    trial.  Raises PathSearchTimeout only if no trial completed (defensive;
    trial 0 always runs to completion).
    """
    start = time.monotonic()
    best: ContractionTree | None = None
    best_key = None

    def one(i: int) -> ContractionTree:
        return build_tree(h, _trial_config(cfg, i))

    if cfg.search_parallel > 1:
        trees = run_tasks(one, list(range(cfg.max_repeats)),
                          cfg.search_parallel, deadline=start + cfg.max_time)
        for tree in trees:
            if tree is None:
                continue
            key = (tree.width, tree.total_flops)
            if best_key is None or key < best_key:
                best, best_key = tree, key
    else:
        for i in range(cfg.max_repeats):
            if i > 0 and time.monotonic() - start > cfg.max_time:
                break
            tree = one(i)
            key = (tree.width, tree.total_flops)
            if best_key is None or key < best_key:
                best, best_key = tree, key
    if best is None:
        raise PathSearchTimeout("no path-search trial completed in time")
    return best


def greedy_baseline(h: Hypergraph) -> ContractionTree:
    """Repeatedly contract the cheapest available pair (ties: smaller result,
    then lexicographically smallest ids)."""
    dims = h.dims()
    open_edges = h.open_edges()
    active: dict[int, tuple] = {}      # id -> (tree node, index tuple)
    holders: dict[int, set[int]] = {}  # edge -> active ids
    for v in h.vertices:
        active[v] = (Leaf(v), h.leaf_indices[v])
        for e in h.leaf_indices[v]:
            holders.setdefault(e, set()).add(v)
    next_id = max(h.vertices, default=0) + 1

    def result_indices(u: int, v: int) -> tuple[int, ...]:
        out = []
        for e in sorted(set(active[u][1]) | set(active[v][1])):
            external = holders[e] - {u, v}
            if e in open_edges or external:
                out.append(e)
        return tuple(out)

    def merge(u: int, v: int) -> None:
        nonlocal next_id
        out = result_indices(u, v)
        node = Pair(active[u][0], active[v][0])
        for e in set(active[u][1]) | set(active[v][1]):
            holders[e].discard(u)
            holders[e].discard(v)
            if e in out:
                holders[e].add(next_id)
        active.pop(u)
        active.pop(v)
        active[next_id] = (node, out)
        next_id += 1

    while len(active) > 1:
        best = None
        seen = set()
        for e, hs in holders.items():
            hl = sorted(hs)
            for i, u in enumerate(hl):
                for v in hl[i + 1:]:
                    if (u, v) in seen or u not in active or v not in active:
                        continue
                    seen.add((u, v))
                    out = result_indices(u, v)
                    c = pair_cost(active[u][1], active[v][1], out, dims)
                    key = (c.flops, c.size_out, u, v)
                    if best is None or key < best[0]:
                        best = (key, u, v)
        if best is None:
            # disconnected remainder: outer-product the two smallest pieces
            by_size = sorted(active, key=lambda i: (len(active[i][1]), i))
            u, v = by_size[0], by_size[1]
        else:
            _, u, v = best
        merge(u, v)

    (root, _), = active.values()
    return annotate(root, h.leaf_indices, dims, open_edges)
