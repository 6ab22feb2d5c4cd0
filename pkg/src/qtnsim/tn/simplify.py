"""Structural network simplification: squeeze, (anti-)diagonal reduction,
rank simplification.

All passes are value-preserving rewrites of node recipes plus edge
bookkeeping; they never touch open edges and they iterate to a fixed point.
Zero structure of the named constant gates is taken from the symbolic tables
in :mod:`qtnsim.gates`; any other constant node is probed numerically with a
1e-14 magnitude criterion.  Parameter-dependent intermediates are only ever
reduced symbolically, never probed.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from ..contraction import PairSpec
from ..gates import ANTIDIAGONAL_AXIS_PAIRS, DIAGONAL_AXIS_PAIRS
from .network import (
    RAntiDiag,
    RBind,
    RDiag,
    RFlip,
    RPair,
    RSqueeze,
    TensorNetwork,
    TensorNode,
)

_TOL = 1e-14


def _drop_axis(node: TensorNode, pos: int) -> None:
    node.indices = node.indices[:pos] + node.indices[pos + 1:]
    node.cached = None


def _collapse_duplicates(node: TensorNode) -> None:
    """A node holding one edge on two axes is tied by that edge's summation
    index; extracting the diagonal of those axes is always value-preserving."""
    while True:
        seen: dict[int, int] = {}
        dup = None
        for pos, e in enumerate(node.indices):
            if e in seen:
                dup = (seen[e], pos)
                break
            seen[e] = pos
        if dup is None:
            return
        i, j = dup
        node.recipe = RDiag(node.recipe, i, j)
        _drop_axis(node, j)


def _fuse_edges(net: TensorNetwork, keep: int, drop: int) -> None:
    for nid in list(net.edges[drop].nodes):
        node = net.nodes[nid]
        node.indices = tuple(keep if e == drop else e for e in node.indices)
        node.cached = None
        net.edges[keep].nodes.add(nid)
        _collapse_duplicates(node)
    del net.edges[drop]


def _squeeze_pass(net: TensorNetwork) -> bool:
    changed = False
    for eid in sorted(net.edges):
        edge = net.edges[eid]
        if edge.open or edge.dim != 1:
            continue
        for nid in sorted(edge.nodes):
            node = net.nodes[nid]
            pos = node.indices.index(eid)
            node.recipe = RSqueeze(node.recipe, pos)
            _drop_axis(node, pos)
        del net.edges[eid]
        changed = True
    return changed


def _numeric_structure(value: np.ndarray, i: int, j: int) -> str | None:
    d = value.shape[i]
    if value.shape[j] != d:
        return None
    x = np.moveaxis(value, (i, j), (0, 1)).reshape(d, d, -1)
    mask = ~np.eye(d, dtype=bool)
    if np.abs(x[mask]).max(initial=0.0) < _TOL:
        return "diag"
    anti = ~np.fliplr(np.eye(d, dtype=bool))
    if np.abs(x[anti]).max(initial=0.0) < _TOL:
        return "anti"
    return None


def _apply_diag(net: TensorNetwork, node: TensorNode, i: int, j: int) -> None:
    ei, ej = node.indices[i], node.indices[j]
    node.recipe = RDiag(node.recipe, i, j)
    _drop_axis(node, j)
    if ei != ej:
        net.edges[ej].nodes.discard(node.id)
        _fuse_edges(net, keep=ei, drop=ej)


def _apply_antidiag(net: TensorNetwork, node: TensorNode, i: int, j: int) -> None:
    ei, ej = node.indices[i], node.indices[j]
    # absorb the flip into every other tensor on edge ej, then fuse as a plain
    # diagonal: sum_a N[a, flip(a)] M[flip(a)] = sum_b N'[b, b] M'[b]
    for nid in net.edges[ej].nodes:
        if nid == node.id:
            continue
        other = net.nodes[nid]
        other.recipe = RFlip(other.recipe, other.indices.index(ej))
        other.cached = None
    node.recipe = RAntiDiag(node.recipe, i, j)
    _drop_axis(node, j)
    net.edges[ej].nodes.discard(node.id)
    _fuse_edges(net, keep=ei, drop=ej)


def _fusable(net: TensorNetwork, node: TensorNode, i: int, j: int,
             anti: bool) -> bool:
    ei, ej = node.indices[i], node.indices[j]
    if net.edges[ei].open or net.edges[ej].open:
        return False
    if net.edges[ei].dim != net.edges[ej].dim:
        return False
    if anti and ei == ej:
        # the shared summation index forces equality, which an anti-diagonal
        # structure contradicts; leave it to the duplicate collapse
        return False
    return True


def _symbolic_pairs(node: TensorNode):
    if not isinstance(node.recipe, RBind) or node.recipe.kind is None:
        return None
    kind = node.recipe.kind
    out = []
    for a, b in DIAGONAL_AXIS_PAIRS.get(kind, ()):
        out.append((a, b, False))
    for a, b in ANTIDIAGONAL_AXIS_PAIRS.get(kind, ()):
        out.append((a, b, True))
    return out or None


def _reduce_node_symbolic(net: TensorNetwork, node: TensorNode) -> bool:
    pairs = _symbolic_pairs(node)
    if not pairs:
        return False
    posmap = list(range(node.rank))
    changed = False
    for a, b, anti in pairs:
        i, j = posmap[a], posmap[b]
        if i is None or j is None:
            continue
        i, j = min(i, j), max(i, j)
        if not _fusable(net, node, i, j, anti):
            continue
        if anti:
            _apply_antidiag(net, node, i, j)
        else:
            _apply_diag(net, node, i, j)
        changed = True
        posmap[a], posmap[b] = i, None
        posmap = [p if p is None or p < j else p - 1 for p in posmap]
    return changed


def _reduce_node_numeric(net: TensorNetwork, node: TensorNode) -> bool:
    value = net.node_value(node)
    if value is None:
        return False
    for i, j in combinations(range(node.rank), 2):
        structure = _numeric_structure(value, i, j)
        if structure is None:
            continue
        if not _fusable(net, node, i, j, structure == "anti"):
            continue
        if structure == "anti":
            _apply_antidiag(net, node, i, j)
        else:
            _apply_diag(net, node, i, j)
        return True
    return False


def _diag_pass(net: TensorNetwork) -> bool:
    changed = False
    progressing = True
    while progressing:
        progressing = False
        for nid in sorted(net.nodes):
            node = net.nodes.get(nid)
            if node is None or node.rank < 2:
                continue
            if _reduce_node_symbolic(net, node):
                progressing = changed = True
            elif _reduce_node_numeric(net, node):
                progressing = changed = True
    return changed


def _surviving(net: TensorNetwork, u: TensorNode, v: TensorNode) -> tuple[int, ...]:
    out = []
    for e in sorted(set(u.indices) | set(v.indices)):
        edge = net.edges[e]
        if edge.open or (edge.nodes - {u.id, v.id}):
            out.append(e)
    return tuple(out)


def _contract_nodes(net: TensorNetwork, u: TensorNode, v: TensorNode,
                    out: tuple[int, ...]) -> None:
    spec = PairSpec(u.indices, v.indices, out, u.conj, v.conj)
    recipe = RPair(u.recipe, v.recipe, spec)
    touched = set(u.indices) | set(v.indices)
    for e in touched:
        net.edges[e].nodes.discard(u.id)
        net.edges[e].nodes.discard(v.id)
    del net.nodes[u.id]
    del net.nodes[v.id]
    node = net.add_node(out, recipe, provenance="intermediate")
    for e in touched:
        if e not in out and not net.edges[e].nodes:
            del net.edges[e]
    net.node_value(node)  # cache when constant


def _rank_pass(net: TensorNetwork) -> bool:
    dims = None
    changed = False
    while True:
        dims = net.dims()
        best = None
        seen = set()
        for eid in sorted(net.edges):
            pins = sorted(net.edges[eid].nodes)
            for uid, vid in combinations(pins, 2):
                if (uid, vid) in seen:
                    continue
                seen.add((uid, vid))
                u, v = net.nodes[uid], net.nodes[vid]
                out = _surviving(net, u, v)
                if len(out) > max(u.rank, v.rank):
                    continue
                size_out = math.prod(dims[e] for e in out) if out else 1
                size_in = math.prod(dims[e] for e in u.indices + v.indices) \
                    if u.indices + v.indices else 1
                key = (size_out, size_in, uid, vid)
                if best is None or key < best[0]:
                    best = (key, uid, vid, out)
        if best is None:
            return changed
        _, uid, vid, out = best
        _contract_nodes(net, net.nodes[uid], net.nodes[vid], out)
        changed = True


def simplify(tn: TensorNetwork, enabled: bool = True) -> TensorNetwork:
    """Fixed point of squeeze, (anti-)diagonal reduction, and rank
    simplification; the input network is left untouched."""
    net = tn.copy()
    if not enabled:
        return net
    while True:
        changed = _squeeze_pass(net)
        changed = _diag_pass(net) or changed
        changed = _rank_pass(net) or changed
        if not changed:
            return net
