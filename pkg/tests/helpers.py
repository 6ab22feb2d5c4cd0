"""Shared generators for the test suite: random circuits with known dense
references, random hypergraphs for the path optimizer, and common fixtures."""

from __future__ import annotations

import random

import numpy as np

from qtnsim.circuit import GateInstance, Measurement, ParamRef, build_circuit
from qtnsim.gates import GateKind
from qtnsim.pathopt.hypergraph import Hypergraph, HyperEdge

PARAMLESS_1Q = [GateKind.I, GateKind.X, GateKind.Y, GateKind.Z, GateKind.H,
                GateKind.S, GateKind.T]
ROTATIONS = [GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.PHASESHIFT]
TWO_QUBIT = [GateKind.CNOT, GateKind.CZ, GateKind.SWAP]
CONTROLLED_ROT = [GateKind.CRX, GateKind.CRY, GateKind.CRZ]


def random_circuit(rng: random.Random, n: int, depth: int,
                   measurement: Measurement | None = None,
                   with_controlled_rot: bool = True):
    """Random mixed-gate circuit.  Every rotation gets its own parameter slot
    (so shift rules and literal-slot derivatives agree); returns the circuit
    and a matching random parameter vector.  ``with_controlled_rot=False``
    keeps the pool shift-rule compatible."""
    gates = []
    slots = 0
    for _ in range(depth):
        pick = rng.random()
        if pick < 0.35 or n == 1:
            kind = rng.choice(PARAMLESS_1Q)
            gates.append(GateInstance(kind, (rng.randrange(n),), ()))
        elif pick < 0.65:
            kind = rng.choice(ROTATIONS)
            gates.append(GateInstance(kind, (rng.randrange(n),),
                                      (ParamRef(slots),)))
            slots += 1
        elif pick < 0.9 or not with_controlled_rot:
            kind = rng.choice(TWO_QUBIT)
            q = tuple(rng.sample(range(n), 2))
            gates.append(GateInstance(kind, q, ()))
        else:
            kind = rng.choice(CONTROLLED_ROT)
            q = tuple(rng.sample(range(n), 2))
            gates.append(GateInstance(kind, q, (ParamRef(slots),)))
            slots += 1
    if measurement is None:
        letters = "".join(rng.choice("IXYZ") for _ in range(n))
        if set(letters) == {"I"}:
            letters = "Z" + letters[1:]
        measurement = Measurement.expval(letters)
    circuit = build_circuit(gates, [measurement], n, param_shape=slots)
    params = np.array([rng.uniform(-np.pi, np.pi) for _ in range(slots)])
    return circuit, params


def random_hypergraph(rng: random.Random, max_nodes: int = 8,
                      dims=(2, 2, 3, 4), with_open: bool = True) -> Hypergraph:
    """Connected random hypergraph: spanning tree edges, extra two-pin and
    hyper edges, optional open (output) edges."""
    nv = rng.randint(2, max_nodes)
    eid = 0
    edges: dict[int, HyperEdge] = {}
    leaf_indices: dict[int, list[int]] = {v: [] for v in range(nv)}

    def add(dim, pins, is_open=False):
        nonlocal eid
        edges[eid] = HyperEdge(dim, tuple(sorted(pins)), open=is_open)
        for p in pins:
            leaf_indices[p].append(eid)
        eid += 1

    for v in range(1, nv):
        add(rng.choice(dims), (rng.randrange(v), v))
    for _ in range(rng.randint(0, nv)):
        k = rng.randint(2, min(3, nv))
        add(rng.choice(dims[:2]), rng.sample(range(nv), k))
    if with_open:
        for _ in range(rng.randint(0, 2)):
            add(2, (rng.randrange(nv),), is_open=True)
    return Hypergraph(tuple(range(nv)), edges,
                      {v: tuple(ix) for v, ix in leaf_indices.items()})


def hypergraph_as_edge_dict(h: Hypergraph):
    """The (dim, pins, open) dict form the oracles consume."""
    return {e: (ed.dim, ed.pins, ed.open) for e, ed in h.edges.items()}


def chain_hypergraph(n_matrices: int = 6, dim: int = 2) -> Hypergraph:
    """Boundary vector, n 2x2 matrices, boundary vector: a closed chain."""
    n = n_matrices + 2
    edges = {i: HyperEdge(dim, (i, i + 1)) for i in range(n - 1)}
    leaf_indices = {0: (0,), n - 1: (n - 2,)}
    for m in range(1, n - 1):
        leaf_indices[m] = (m - 1, m)
    return Hypergraph(tuple(range(n)), edges, leaf_indices)


def five_node_example_network() -> Hypergraph:
    """Five tensors on six binary edges: edge 2 is a 3-pin hyperedge and
    edges 3, 4 are the open outputs.

    vertex 0: (0, 2)   vertex 1: (0, 1, 5)   vertex 2: (1, 2, 4)
    vertex 3: (2, 3)   vertex 4: (4, 5)
    """
    edges = {
        0: HyperEdge(2, (0, 1)),
        1: HyperEdge(2, (1, 2)),
        2: HyperEdge(2, (0, 2, 3)),
        3: HyperEdge(2, (3,), open=True),
        4: HyperEdge(2, (2, 4), open=True),
        5: HyperEdge(2, (1, 4)),
    }
    leaf_indices = {0: (0, 2), 1: (0, 1, 5), 2: (1, 2, 4),
                    3: (2, 3), 4: (4, 5)}
    return Hypergraph((0, 1, 2, 3, 4), edges, leaf_indices)


def random_leaf_tensors(rng: random.Random, h: Hypergraph):
    """Random complex tensor per vertex, axes per leaf_indices order."""
    out = {}
    dims = h.dims()
    for v in h.vertices:
        shape = tuple(dims[e] for e in h.leaf_indices[v])
        arr = np.array([complex(rng.gauss(0, 1), rng.gauss(0, 1))
                        for _ in range(int(np.prod(shape)) if shape else 1)])
        out[v] = arr.reshape(shape) if shape else arr.reshape(())
    return out


def worked_example_circuit():
    """X on q0, RY(slot 0) on q1, CNOT(0,1), <Z> on q1: evaluates to
    sin^2(t/2) - cos^2(t/2) = -cos(t)."""
    gates = [GateInstance(GateKind.X, (0,), ()),
             GateInstance(GateKind.RY, (1,), (ParamRef(0),)),
             GateInstance(GateKind.CNOT, (0, 1), ())]
    return build_circuit(gates, [Measurement.expval("IZ")], 2, param_shape=1)


def bell_circuit(measurement=None):
    gates = [GateInstance(GateKind.H, (0,), ()),
             GateInstance(GateKind.CNOT, (0, 1), ())]
    if measurement is None:
        measurement = Measurement.probs((0, 1))
    return build_circuit(gates, [measurement], 2)


def hwe_circuit(n: int, depth: int):
    from qtnsim.vqa.templates import (TemplateKind, TemplateSpec,
                                      expand_template, template_param_count)
    spec = TemplateSpec(TemplateKind.HARDWARE_EFFICIENT, n, depth)
    return build_circuit(expand_template(spec),
                         [Measurement.expval("Z" + "I" * (n - 1))], n,
                         param_shape=template_param_count(spec))
