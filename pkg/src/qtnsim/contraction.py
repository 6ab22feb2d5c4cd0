"""Numeric execution of contraction trees.

One pairwise contraction is realized as a batched matrix multiply:
permute each operand so that [batch | kept | contracted] axes are grouped,
reshape to 3-d, multiply, reshape back, and restore the requested output
axis order.  Indices shared by both operands that survive to the output
(open hyperedges, probability batch wires) ride along as batch dimensions.

Conjugation is a flag applied lazily here, so conjugated network nodes can
share storage with their originals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfMemoryBudget, ShapeMismatch
from .pathopt.tree import ContractionTree, Leaf, Pair, _postorder
from .pool import run_tasks


@dataclass(frozen=True)
class PairSpec:
    """Index lists (edge labels, one per axis) for one pairwise contraction."""

    lhs: tuple[int, ...]
    rhs: tuple[int, ...]
    out: tuple[int, ...]
    lconj: bool = False
    rconj: bool = False


def _group(labels, batch, kept, contracted, x):
    """Sum out dangling labels, then reshape to (batch, kept, contracted)."""
    labels = list(labels)
    wanted = set(batch) | set(kept) | set(contracted)
    free = [l for l in labels if l not in wanted]
    if free:
        x = x.sum(axis=tuple(labels.index(l) for l in free))
        labels = [l for l in labels if l not in free]
    perm = [labels.index(l) for l in (*batch, *kept, *contracted)]
    x = x.transpose(perm)
    nb, nk = len(batch), len(kept)
    shape = x.shape
    b = math.prod(shape[:nb])
    k = math.prod(shape[nb:nb + nk])
    q = math.prod(shape[nb + nk:])
    return x.reshape(b, k, q)


def contract_pair(a: np.ndarray, b: np.ndarray, spec: PairSpec) -> np.ndarray:
    lhs, rhs, out = spec.lhs, spec.rhs, spec.out
    if a.ndim != len(lhs) or b.ndim != len(rhs):
        raise ShapeMismatch(
            f"operand ranks {a.ndim}/{b.ndim} do not match spec {len(lhs)}/{len(rhs)}")
    if len(set(lhs)) != len(lhs) or len(set(rhs)) != len(rhs) \
            or len(set(out)) != len(out):
        raise ShapeMismatch("repeated index within one operand or the output")
    dims: dict[int, int] = {}
    for lab, d in zip(lhs, a.shape):
        dims[lab] = d
    for lab, d in zip(rhs, b.shape):
        if dims.setdefault(lab, d) != d:
            raise ShapeMismatch(f"index {lab} has dimension {dims[lab]} vs {d}")
    for lab in out:
        if lab not in dims:
            raise ShapeMismatch(f"output index {lab} is on neither operand")

    lset, rset, oset = set(lhs), set(rhs), set(out)
    contracted = tuple(sorted((lset & rset) - oset))
    batch = tuple(e for e in out if e in lset and e in rset)
    kept_l = tuple(e for e in out if e in lset and e not in rset)
    kept_r = tuple(e for e in out if e in rset and e not in lset)

    if spec.lconj:
        a = np.conj(a)
    if spec.rconj:
        b = np.conj(b)
    a3 = _group(lhs, batch, kept_l, contracted, a)
    b3 = _group(rhs, batch, contracted, kept_r, b)
    # b3 currently groups as (batch, contracted-as-kept, kept_r-as-contracted):
    # _group puts its 2nd arg group in the middle, so pass contracted there.
    r3 = a3 @ b3
    grouped = (*batch, *kept_l, *kept_r)
    r = r3.reshape(tuple(dims[e] for e in grouped))
    if grouped != out:
        r = r.transpose([grouped.index(e) for e in out])
    return r


def backward_pair(adjoint: np.ndarray, a: np.ndarray, b: np.ndarray,
                  spec: PairSpec) -> tuple[np.ndarray, np.ndarray]:
    """Adjoints of both operands of contract_pair.

    Returned arrays are d<T>/d(operand as fed in), i.e. with respect to the
    conjugated value whenever the spec's flag was set.
    """
    grad_a = contract_pair(adjoint, b, PairSpec(spec.out, spec.rhs, spec.lhs,
                                                False, spec.rconj))
    grad_b = contract_pair(adjoint, a, PairSpec(spec.out, spec.lhs, spec.rhs,
                                                False, spec.lconj))
    return grad_a, grad_b


def pairwise_sum(items: list):
    """Tree-shaped summation: deterministic and numerically stable."""
    items = list(items)
    if not items:
        raise ValueError("nothing to sum")
    while len(items) > 1:
        nxt = []
        for i in range(0, len(items) - 1, 2):
            nxt.append(items[i] + items[i + 1])
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def slice_assignments(sliced: tuple[int, ...], dims):
    yield from itertools.product(*(range(dims[e]) for e in sliced))


def _slice_leaf(array: np.ndarray, full_indices, assignment: dict):
    if not assignment:
        return array
    idx = tuple(assignment.get(e, slice(None)) for e in full_indices)
    return array[idx]


def _forward(tree: ContractionTree, leaf_arrays, want_tape: bool):
    """One contraction of the (already sliced) tree.  leaf_arrays maps node
    id -> (array, conj flag) with axes matching the annotated leaf indices."""
    vals: dict[int, tuple] = {}
    tape = [] if want_tape else None
    result = None
    for node in _postorder(tree.root):
        if isinstance(node, Leaf):
            arr, conj = leaf_arrays[node.node_id]
            vals[id(node)] = (arr, node.indices, conj)
            result = vals[id(node)]
            continue
        la, lidx, lc = vals.pop(id(node.left))
        ra, ridx, rc = vals.pop(id(node.right))
        spec = PairSpec(tuple(lidx), tuple(ridx), tuple(node.out_indices), lc, rc)
        r = contract_pair(la, ra, spec)
        if tape is not None:
            tape.append((node, spec, la, ra))
        vals[id(node)] = (r, node.out_indices, False)
        result = vals[id(node)]
    arr, idx, conj = result
    if conj:  # single-leaf tree with a conjugated leaf
        arr = np.conj(arr)
    return arr, idx, tape


def _check_memory(tree: ContractionTree, cap_elements: int | None) -> None:
    if cap_elements is None:
        return
    for node in tree.internal():
        assert node.cost is not None
        if node.cost.memory > cap_elements:
            raise OutOfMemoryBudget(
                f"pair contraction needs {node.cost.memory} elements, "
                f"cap is {cap_elements}")


def execute_tree(tree: ContractionTree, full_leaf_indices, leaf_tensors,
                 sliced: tuple[int, ...], dims, memory_cap: int | None = None,
                 parallel: int = 1):
    """Contract all slice assignments and sum them.

    ``tree`` must be annotated with the sliced edges excluded;
    ``leaf_tensors`` maps node id -> (full array, conj flag) with axes in
    ``full_leaf_indices`` order.  Returns (result, stats).
    """
    _check_memory(tree, memory_cap)

    def one(assignment_values) -> np.ndarray:
        assignment = dict(zip(sliced, assignment_values))
        leaf_arrays = {
            leaf.node_id: (_slice_leaf(leaf_tensors[leaf.node_id][0],
                                       full_leaf_indices[leaf.node_id],
                                       assignment),
                           leaf_tensors[leaf.node_id][1])
            for leaf in tree.leaves()
        }
        arr, _, _ = _forward(tree, leaf_arrays, want_tape=False)
        return arr

    assignments = list(slice_assignments(sliced, dims))
    if parallel > 1 and len(assignments) > 1:
        parts = run_tasks(one, assignments, parallel)
    else:
        parts = [one(a) for a in assignments]
    result = pairwise_sum(parts)
    stats = {
        "n_slices": len(assignments),
        "flops": tree.total_flops * len(assignments),
        "peak_elements": tree.max_size,
    }
    return result, stats


def execute_with_adjoints(tree: ContractionTree, full_leaf_indices,
                          leaf_tensors, sliced: tuple[int, ...], dims,
                          root_adjoint: np.ndarray):
    """Forward value plus d<root>/d(leaf operand) for every leaf.

    Leaf adjoints are with respect to the operand as fed into the tree (the
    conjugated value when the leaf carries a conjugation flag) and have the
    full, unsliced leaf shape; slice contributions are scattered back.
    """
    leaf_adjoints = {
        lid: np.zeros(arr.shape, dtype=complex)
        for lid, (arr, _) in leaf_tensors.items()
    }
    values = []
    for assignment_values in slice_assignments(sliced, dims):
        assignment = dict(zip(sliced, assignment_values))
        leaf_arrays = {
            leaf.node_id: (_slice_leaf(leaf_tensors[leaf.node_id][0],
                                       full_leaf_indices[leaf.node_id],
                                       assignment),
                           leaf_tensors[leaf.node_id][1])
            for leaf in tree.leaves()
        }
        arr, _, tape = _forward(tree, leaf_arrays, want_tape=True)
        values.append(arr)

        adj: dict[int, np.ndarray] = {id(tree.root): np.asarray(root_adjoint)}
        for node, spec, la, ra in reversed(tape or []):
            a_out = adj.pop(id(node))
            grad_a, grad_b = backward_pair(a_out, la, ra, spec)
            for child, grad in ((node.left, grad_a), (node.right, grad_b)):
                if isinstance(child, Leaf):
                    full = full_leaf_indices[child.node_id]
                    idx = tuple(assignment.get(e, slice(None)) for e in full)
                    leaf_adjoints[child.node_id][idx] += grad
                else:
                    prev = adj.get(id(child))
                    adj[id(child)] = grad if prev is None else prev + grad
        if isinstance(tree.root, Leaf):  # degenerate single-leaf network
            full = full_leaf_indices[tree.root.node_id]
            idx = tuple(assignment.get(e, slice(None)) for e in full)
            leaf_adjoints[tree.root.node_id][idx] += np.asarray(root_adjoint)

    return pairwise_sum(values), leaf_adjoints
