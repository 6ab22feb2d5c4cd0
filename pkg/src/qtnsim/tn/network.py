"""Tensor networks for circuit evaluation.

For an expectation measurement the network is the doubled construction
<initial| U-dagger O U |initial>: kets for each qubit, one node per gate, a
node per non-identity observable factor, the conjugated gates, and the bra
kets, all wired so that full index summation yields the measurement value.
Probability measurements use the same doubling but keep the measured qubits'
final wires as open edges shared by both halves, so the contraction returns
the 2^k diagonal of the reduced density matrix.

Node payloads are *recipes*: small expression trees over gate matrices and
constants.  Structural simplification rewrites recipes rather than arrays,
so it can run once at compile time even though rotation angles are only
bound at evaluation time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..circuit import Circuit, GateInstance, Measurement, UnitaryGate, gate_matrix
from ..contraction import PairSpec, contract_pair, backward_pair
from ..errors import UnsupportedMeasurementForMode
from ..gates import GateKind, pauli_matrix
from ..pathopt.hypergraph import HyperEdge, Hypergraph

_KET0 = np.array([1.0, 0.0], dtype=complex)
_KET0.setflags(write=False)


# --- recipes ---

class Recipe:
    def leaf_keys(self) -> frozenset:
        raise NotImplementedError

    def evaluate(self, bind: dict) -> np.ndarray:
        raise NotImplementedError

    def backward(self, adjoint: np.ndarray, conj_path: bool, bind: dict,
                 accum: dict) -> None:
        """Accumulate d<T>/d(bind tensor) into accum[(key, conj_used)]."""
        raise NotImplementedError


@dataclass(frozen=True)
class RConst(Recipe):
    value: np.ndarray

    def leaf_keys(self):
        return frozenset()

    def evaluate(self, bind):
        return self.value

    def backward(self, adjoint, conj_path, bind, accum):
        pass


@dataclass(frozen=True)
class RBind(Recipe):
    """Leaf looked up in the bind context: ("gate", i) or ("init",)."""

    key: tuple
    kind: GateKind | None = None  # set for palette gates; None for init/unitary

    def leaf_keys(self):
        return frozenset([self.key])

    def evaluate(self, bind):
        return bind[self.key]

    def backward(self, adjoint, conj_path, bind, accum):
        slot = (self.key, conj_path)
        prev = accum.get(slot)
        accum[slot] = adjoint if prev is None else prev + adjoint


@dataclass(frozen=True)
class RDiag(Recipe):
    """Tie axes i < j together; the fused axis stays at position i."""

    child: Recipe
    i: int
    j: int

    def leaf_keys(self):
        return self.child.leaf_keys()

    def evaluate(self, bind):
        x = self.child.evaluate(bind)
        return np.moveaxis(np.diagonal(x, axis1=self.i, axis2=self.j), -1, self.i)

    def backward(self, adjoint, conj_path, bind, accum):
        x_shape = self.child.evaluate(bind).shape
        out = np.zeros(x_shape, dtype=complex)
        d = x_shape[self.i]
        for a in range(d):
            src = [slice(None)] * adjoint.ndim
            src[self.i] = a
            dst = [slice(None)] * len(x_shape)
            dst[self.i] = a
            dst[self.j] = a
            out[tuple(dst)] = adjoint[tuple(src)]
        self.child.backward(out, conj_path, bind, accum)


@dataclass(frozen=True)
class RAntiDiag(Recipe):
    """Tie axis i to the flip of axis j (anti-diagonal extraction)."""

    child: Recipe
    i: int
    j: int

    def leaf_keys(self):
        return self.child.leaf_keys()

    def evaluate(self, bind):
        x = np.flip(self.child.evaluate(bind), axis=self.j)
        return np.moveaxis(np.diagonal(x, axis1=self.i, axis2=self.j), -1, self.i)

    def backward(self, adjoint, conj_path, bind, accum):
        x_shape = self.child.evaluate(bind).shape
        out = np.zeros(x_shape, dtype=complex)
        d = x_shape[self.i]
        for a in range(d):
            src = [slice(None)] * adjoint.ndim
            src[self.i] = a
            dst = [slice(None)] * len(x_shape)
            dst[self.i] = a
            dst[self.j] = a
            out[tuple(dst)] = adjoint[tuple(src)]
        self.child.backward(np.flip(out, axis=self.j), conj_path, bind, accum)


@dataclass(frozen=True)
class RFlip(Recipe):
    child: Recipe
    axis: int

    def leaf_keys(self):
        return self.child.leaf_keys()

    def evaluate(self, bind):
        return np.flip(self.child.evaluate(bind), axis=self.axis)

    def backward(self, adjoint, conj_path, bind, accum):
        self.child.backward(np.flip(adjoint, axis=self.axis), conj_path, bind, accum)


@dataclass(frozen=True)
class RSqueeze(Recipe):
    child: Recipe
    axis: int

    def leaf_keys(self):
        return self.child.leaf_keys()

    def evaluate(self, bind):
        return np.squeeze(self.child.evaluate(bind), axis=self.axis)

    def backward(self, adjoint, conj_path, bind, accum):
        self.child.backward(np.expand_dims(adjoint, self.axis), conj_path, bind, accum)


@dataclass(frozen=True)
class RPair(Recipe):
    """Pre-contraction of two nodes decided at simplify time."""

    left: Recipe
    right: Recipe
    spec: PairSpec  # carries the children's conjugation flags

    def leaf_keys(self):
        return self.left.leaf_keys() | self.right.leaf_keys()

    def evaluate(self, bind):
        return contract_pair(self.left.evaluate(bind), self.right.evaluate(bind),
                             self.spec)

    def backward(self, adjoint, conj_path, bind, accum):
        la = self.left.evaluate(bind)
        ra = self.right.evaluate(bind)
        spec = self.spec
        if conj_path:
            # conj(P(x, y)) = P(conj x, conj y): flip both conjugation flags
            spec = replace(spec, lconj=not spec.lconj, rconj=not spec.rconj)
        grad_l, grad_r = backward_pair(adjoint, la, ra, spec)
        self.left.backward(grad_l, spec.lconj, bind, accum)
        self.right.backward(grad_r, spec.rconj, bind, accum)


# --- network ---

@dataclass
class TensorNode:
    id: int
    indices: tuple[int, ...]
    recipe: Recipe
    conj: bool = False
    provenance: str = "gate"  # state | gate | observable | conjugate | intermediate
    cached: np.ndarray | None = None

    @property
    def rank(self) -> int:
        return len(self.indices)


@dataclass
class EdgeInfo:
    dim: int
    nodes: set[int] = field(default_factory=set)
    open: bool = False


class TensorNetwork:
    def __init__(self) -> None:
        self.nodes: dict[int, TensorNode] = {}
        self.edges: dict[int, EdgeInfo] = {}
        self.open_edges: list[int] = []
        self.const_bind: dict = {}
        self._next_node = 0
        self._next_edge = 0

    def new_edge(self, dim: int = 2, open: bool = False) -> int:
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = EdgeInfo(dim=dim, open=open)
        if open:
            self.open_edges.append(eid)
        return eid

    def add_node(self, indices, recipe: Recipe, conj: bool = False,
                 provenance: str = "gate") -> TensorNode:
        nid = self._next_node
        self._next_node += 1
        node = TensorNode(nid, tuple(indices), recipe, conj, provenance)
        self.nodes[nid] = node
        for e in node.indices:
            self.edges[e].nodes.add(nid)
        return node

    def copy(self) -> "TensorNetwork":
        out = TensorNetwork()
        out.nodes = {nid: TensorNode(n.id, n.indices, n.recipe, n.conj,
                                     n.provenance, n.cached)
                     for nid, n in self.nodes.items()}
        out.edges = {eid: EdgeInfo(e.dim, set(e.nodes), e.open)
                     for eid, e in self.edges.items()}
        out.open_edges = list(self.open_edges)
        out.const_bind = self.const_bind
        out._next_node = self._next_node
        out._next_edge = self._next_edge
        return out

    def dims(self) -> dict[int, int]:
        return {eid: e.dim for eid, e in self.edges.items()}

    def is_constant(self, node: TensorNode) -> bool:
        return all(key in self.const_bind for key in node.recipe.leaf_keys())

    def node_value(self, node: TensorNode) -> np.ndarray | None:
        """Value of a constant node (cached); None if parameter-dependent."""
        if node.cached is not None:
            return node.cached
        if not self.is_constant(node):
            return None
        node.cached = node.recipe.evaluate(self.const_bind)
        return node.cached

    def materialize(self, param_bind: dict) -> dict[int, tuple[np.ndarray, bool]]:
        bind = {**self.const_bind, **param_bind}
        out = {}
        for nid, node in self.nodes.items():
            arr = node.cached if node.cached is not None \
                else node.recipe.evaluate(bind)
            out[nid] = (arr, node.conj)
        return out

    def to_hypergraph(self) -> Hypergraph:
        edges = {eid: HyperEdge(e.dim, tuple(sorted(e.nodes)), e.open)
                 for eid, e in self.edges.items() if e.nodes}
        leaf_indices = {nid: node.indices for nid, node in self.nodes.items()}
        return Hypergraph(tuple(sorted(self.nodes)), edges, leaf_indices)

    def to_dot(self) -> str:
        lines = ["graph tensornetwork {"]
        for nid, node in sorted(self.nodes.items()):
            lines.append(f'  n{nid} [label="{node.provenance}"];')
        for eid, e in sorted(self.edges.items()):
            pins = sorted(e.nodes)
            style = ' style=dashed' if e.open else ""
            if len(pins) <= 2:
                a = f"n{pins[0]}"
                b = f"n{pins[1]}" if len(pins) == 2 else f"open{eid}"
                if len(pins) == 1:
                    lines.append(f'  open{eid} [shape=none label=""];')
                lines.append(f'  {a} -- {b} [label="e{eid}"{style}];')
            else:
                lines.append(f'  e{eid} [shape=point];')
                for p in pins:
                    lines.append(f'  n{p} -- e{eid} [label="e{eid}"{style}];')
        lines.append("}")
        return "\n".join(lines)


def make_bind(circuit: Circuit, params=None, constant_only: bool = False) -> dict:
    """Bind context: gate tensors (axes [outs..., ins...]) plus the optional
    initial-state tensor, keyed for recipe lookup."""
    bind: dict = {}
    for i, g in enumerate(circuit.gates):
        if g.is_parameterized and (constant_only or params is None):
            continue
        u = gate_matrix(g, params)
        k = len(g.qubits)
        bind[("gate", i)] = np.asarray(u, dtype=complex).reshape((2,) * (2 * k))
    if circuit.init_state is not None:
        bind[("init",)] = circuit.init_state.reshape((2,) * circuit.n_qubits)
    return bind


def _fuse_wires(net: TensorNetwork, keep: int, drop: int) -> None:
    """Redirect every incidence of edge ``drop`` onto ``keep``."""
    for nid in list(net.edges[drop].nodes):
        node = net.nodes[nid]
        node.indices = tuple(keep if e == drop else e for e in node.indices)
        node.cached = None
        net.edges[keep].nodes.add(nid)
    del net.edges[drop]


def circuit_to_network(circuit: Circuit, measurement: Measurement) -> TensorNetwork:
    if measurement.kind == "state":
        raise UnsupportedMeasurementForMode(
            "full-state output is not available in tensor-network mode; "
            "use the state-vector engine")

    net = TensorNetwork()
    net.const_bind = make_bind(circuit, constant_only=True)
    n = circuit.n_qubits

    def build_half(conj: bool) -> dict[int, int]:
        wire: dict[int, int] = {}
        prov = "conjugate" if conj else "state"
        if circuit.init_state is None:
            for q in range(n):
                e = net.new_edge()
                net.add_node((e,), RConst(_KET0), conj, prov)
                wire[q] = e
        else:
            es = [net.new_edge() for _ in range(n)]
            net.add_node(tuple(es), RBind(("init",)), conj, prov)
            wire = dict(enumerate(es))
        gate_prov = "conjugate" if conj else "gate"
        for gi, gate in enumerate(circuit.gates):
            kind = gate.kind if isinstance(gate, GateInstance) else None
            outs = [net.new_edge() for _ in gate.qubits]
            ins = [wire[q] for q in gate.qubits]
            net.add_node((*outs, *ins), RBind(("gate", gi), kind), conj, gate_prov)
            for q, e in zip(gate.qubits, outs):
                wire[q] = e
        return wire

    ket_wire = build_half(conj=False)
    if measurement.kind == "expval":
        assert measurement.pauli is not None
        for q, ch in measurement.pauli.non_identity():
            e_out = net.new_edge()
            net.add_node((e_out, ket_wire[q]), RConst(pauli_matrix(ch)),
                         False, "observable")
            ket_wire[q] = e_out
    bra_wire = build_half(conj=True)

    for q in range(n):
        _fuse_wires(net, keep=ket_wire[q], drop=bra_wire[q])
    if measurement.kind == "probs":
        assert measurement.qubits is not None
        for q in measurement.qubits:
            net.edges[ket_wire[q]].open = True
            net.open_edges.append(ket_wire[q])
    return net
