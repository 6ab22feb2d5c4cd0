"""Compile circuits for repeated evaluation.

State-vector mode pre-computes the constant gate matrices.  Tensor-network
mode eagerly builds one doubled network per measurement, simplifies it,
searches a contraction path once, picks a slicing plan, and caches all of it;
later evaluations only re-bind parameters and contract.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .circuit import Circuit, Measurement, gate_matrix
from .errors import ParamLengthMismatch
from .pathopt import PartitionerConfig
from .pathopt.hypergraph import Hypergraph
from .pathopt.tree import ContractionTree, Leaf
from .slicing import SlicingConfig, SlicingPlan, two_phase_search
from .contraction import execute_tree
from .tn import TensorNetwork, circuit_to_network, make_bind, simplify
from . import statevector as sv


class Mode(Enum):
    STATEVECTOR = "statevector"
    TENSOR_NETWORK = "tensor-network"


class GradMethod(Enum):
    ADJOINT = "adjoint"
    PARAM_SHIFT = "param-shift"
    FINITE_DIFF = "finite-diff"
    NONE = "none"


@dataclass(frozen=True)
class TnOptions:
    """Tensor-network execution knobs, keyed like the user-facing config."""

    target_size: int = 2 ** 28
    repeats: int = 1024
    target_num_slices: int | None = None
    contract_parallel: bool = False
    max_time: float = 120.0
    max_repeats: int = 128
    search_parallel: int = 1
    tn_simplify: bool = False
    seed: int = 0

    def slicing_config(self) -> SlicingConfig:
        return SlicingConfig(target_size=self.target_size,
                             repeats=self.repeats,
                             target_num_slices=self.target_num_slices,
                             contract_parallel=self.contract_parallel)

    def partitioner_config(self) -> PartitionerConfig:
        return PartitionerConfig(max_repeats=self.max_repeats,
                                 max_time=self.max_time,
                                 search_parallel=self.search_parallel,
                                 seed=self.seed)


class Counter:
    """Thread-safe monotone counter."""

    def __init__(self) -> None:
        self._n = 0
        self._lock = threading.Lock()

    def increment(self) -> None:
        with self._lock:
            self._n += 1

    @property
    def value(self) -> int:
        return self._n


@dataclass
class TnProgram:
    """Everything cached for one measurement in tensor-network mode."""

    measurement: Measurement
    net: TensorNetwork
    hypergraph: Hypergraph
    tree: ContractionTree
    plan: SlicingPlan

    def root_axes(self) -> tuple[int, ...]:
        root = self.tree.root
        return tuple(root.indices if isinstance(root, Leaf) else root.out_indices)


@dataclass
class CompiledCircuit:
    circuit: Circuit
    mode: Mode
    grad_method: GradMethod
    tn_options: TnOptions | None
    programs: tuple[TnProgram, ...] = ()
    sv_matrix_cache: dict[int, np.ndarray] = field(default_factory=dict)
    eval_count: Counter = field(default_factory=Counter)
    path_search_count: Counter = field(default_factory=Counter)

    @property
    def n_params(self) -> int:
        return self.circuit.param_count


def compile(circuit: Circuit, mode: Mode = Mode.STATEVECTOR,
            grad_method: GradMethod = GradMethod.NONE,
            tn_options: TnOptions | None = None) -> CompiledCircuit:
    mode = Mode(mode)
    grad_method = GradMethod(grad_method)
    if mode is Mode.TENSOR_NETWORK:
        opts = tn_options if tn_options is not None else TnOptions()
        programs = []
        for m in circuit.measurements:
            net = circuit_to_network(circuit, m)
            net = simplify(net, enabled=opts.tn_simplify)
            h = net.to_hypergraph()
            tree, plan = two_phase_search(h, opts.partitioner_config(),
                                          opts.slicing_config())
            programs.append(TnProgram(m, net, h, tree, plan))
        cc = CompiledCircuit(circuit, mode, grad_method, opts,
                             programs=tuple(programs))
        cc.path_search_count.increment()
        return cc

    cache = {i: gate_matrix(g) for i, g in enumerate(circuit.gates)
             if not getattr(g, "is_parameterized", False)}
    return CompiledCircuit(circuit, mode, grad_method, None,
                           sv_matrix_cache=cache)


def _check_params(cc: CompiledCircuit, params) -> np.ndarray:
    params = np.atleast_1d(np.asarray(params, dtype=float)) \
        if params is not None else np.zeros(0)
    if params.shape != (cc.circuit.param_count,):
        raise ParamLengthMismatch(
            f"expected {cc.circuit.param_count} parameters, "
            f"got {params.shape}")
    return params


def run_program(program: TnProgram, net: TensorNetwork, bind: dict,
                opts: TnOptions, with_stats: bool = False):
    """Contract one measurement's cached plan under a parameter binding.

    ``net`` is passed explicitly so gradient code can substitute a copy; the
    raw root tensor is returned without measurement postprocessing.
    """
    leaves = net.materialize(bind)
    full_idx = {nid: net.nodes[nid].indices for nid in net.nodes}
    workers = 4 if opts.contract_parallel else 1
    value, stats = execute_tree(program.tree, full_idx, leaves,
                                program.plan.sliced_indices, program.hypergraph.dims(),
                                memory_cap=3 * opts.target_size,
                                parallel=workers)
    return (value, stats) if with_stats else value


def postprocess(program: TnProgram, raw) -> object:
    m = program.measurement
    if m.kind == "expval":
        value = complex(raw)
        assert abs(value.imag) < 1e-10, "expectation has non-real residue"
        return value.real * m.pauli.coefficient
    # probs: root axes are sorted edge ids; reorder to the requested qubits
    arr = np.asarray(raw)
    axes = program.root_axes()
    perm = [axes.index(e) for e in program.net.open_edges]
    return np.transpose(arr, perm).reshape(-1).real


def evaluate(cc: CompiledCircuit, params=None) -> list:
    """One forward pass; returns one result per measurement."""
    params = _check_params(cc, params)
    if cc.mode is Mode.STATEVECTOR:
        results, _ = sv.run(cc.circuit, params,
                            matrix_cache=cc.sv_matrix_cache)
        cc.eval_count.increment()
        return results

    bind = make_bind(cc.circuit, params)
    out = []
    for program in cc.programs:
        raw = run_program(program, program.net, bind, cc.tn_options)
        out.append(postprocess(program, raw))
    cc.eval_count.increment()
    return out


def evaluate_with_stats(cc: CompiledCircuit, params=None):
    """Like evaluate, but also returns contraction statistics per measurement
    (tensor-network mode only; empty list otherwise)."""
    params = _check_params(cc, params)
    if cc.mode is Mode.STATEVECTOR:
        results, _ = sv.run(cc.circuit, params,
                            matrix_cache=cc.sv_matrix_cache)
        cc.eval_count.increment()
        return results, []
    bind = make_bind(cc.circuit, params)
    out, all_stats = [], []
    for program in cc.programs:
        raw, stats = run_program(program, program.net, bind, cc.tn_options,
                                 with_stats=True)
        out.append(postprocess(program, raw))
        all_stats.append(stats)
    cc.eval_count.increment()
    return out, all_stats
