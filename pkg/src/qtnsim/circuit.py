"""Circuit intermediate representation: gates, measurements, parameter slots.

A circuit is a validated, immutable value.  Parameters are not stored in the
circuit; gates refer to slots of a flat real vector through :class:`ParamRef`
and the vector itself is supplied at evaluation time, so one circuit can be
evaluated and differentiated many times without rebuilding anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gates as G
from .errors import (
    BadInitStateLength,
    EmptyMeasurement,
    InvalidCircuit,
    NonUnitNorm,
    QubitOutOfRange,
)


@dataclass(frozen=True)
class ParamRef:
    """Reference to one entry of the input parameter vector.

    The gate angle is ``scale * params[slot]``; ``scale`` lets several gates
    share a slot with fixed relative signs (e.g. a Z(t)..Z(-t) sandwich)
    while the chain rule stays inside the engine.
    """

    slot: int
    trainable: bool = True
    scale: float = 1.0


@dataclass(frozen=True)
class GateInstance:
    kind: G.GateKind
    qubits: tuple[int, ...]
    params: tuple[ParamRef | float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def is_parameterized(self) -> bool:
        return any(isinstance(p, ParamRef) for p in self.params)


@dataclass(frozen=True, eq=False)
class UnitaryGate:
    """A fixed n-qubit unitary applied as a single gate.

    Not part of the exchange format or the palette; used internally for
    injecting dense evolution operators (e.g. exp(-iHt) blocks).
    """

    qubits: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(self.qubits))
        m = np.asarray(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def is_parameterized(self) -> bool:
        return False


Gate = GateInstance | UnitaryGate


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, e.g. ``"IZZI"``, with a real
    scale factor."""

    ops: str
    coefficient: float = 1.0

    def __post_init__(self) -> None:
        bad = set(self.ops) - set("IXYZ")
        if bad:
            raise InvalidCircuit(f"Pauli string may contain only IXYZ, got {bad}")

    def non_identity(self) -> list[tuple[int, str]]:
        return [(q, ch) for q, ch in enumerate(self.ops) if ch != "I"]


@dataclass(frozen=True)
class Measurement:
    """One requested output: expectation value, marginal probabilities, or
    the full state vector."""

    kind: str  # "expval" | "probs" | "state"
    pauli: PauliString | None = None
    qubits: tuple[int, ...] | None = None

    @staticmethod
    def expval(pauli: str | PauliString, coefficient: float = 1.0) -> "Measurement":
        if isinstance(pauli, str):
            pauli = PauliString(pauli, coefficient)
        return Measurement("expval", pauli=pauli)

    @staticmethod
    def probs(qubits) -> "Measurement":
        return Measurement("probs", qubits=tuple(qubits))

    @staticmethod
    def state() -> "Measurement":
        return Measurement("state")


@dataclass(frozen=True, eq=False)
class Circuit:
    """Validated immutable gate program.  Build through :func:`build_circuit`."""

    n_qubits: int
    gates: tuple[Gate, ...]
    measurements: tuple[Measurement, ...]
    param_count: int
    init_state: np.ndarray | None = None


def _validate_gate(gate: Gate, n_qubits: int, param_count: int) -> None:
    if len(set(gate.qubits)) != len(gate.qubits):
        raise QubitOutOfRange(f"gate qubits must be distinct, got {gate.qubits}")
    for q in gate.qubits:
        if not (0 <= q < n_qubits):
            raise QubitOutOfRange(f"qubit {q} outside 0..{n_qubits - 1}")
    if isinstance(gate, UnitaryGate):
        k = len(gate.qubits)
        dim = 2 ** k
        if gate.matrix.shape != (dim, dim):
            raise InvalidCircuit(
                f"unitary on {k} qubit(s) must be {dim}x{dim}, got {gate.matrix.shape}")
        err = np.abs(gate.matrix @ gate.matrix.conj().T - np.eye(dim)).max()
        if err > 1e-10:
            raise InvalidCircuit(f"matrix is not unitary (defect {err:.2e})")
        return
    if len(gate.qubits) != G.arity(gate.kind):
        raise QubitOutOfRange(
            f"{gate.kind.value} acts on {G.arity(gate.kind)} qubit(s), "
            f"got {len(gate.qubits)}")
    want = G.param_count(gate.kind)
    if len(gate.params) != want:
        raise InvalidCircuit(
            f"{gate.kind.value} takes {want} parameter(s), got {len(gate.params)}")
    for p in gate.params:
        if isinstance(p, ParamRef):
            if not (0 <= p.slot < param_count):
                raise InvalidCircuit(
                    f"parameter slot {p.slot} outside declared range 0..{param_count - 1}")
        elif not isinstance(p, (int, float)):
            raise InvalidCircuit(f"gate parameter must be ParamRef or number, got {p!r}")


def _validate_measurement(m: Measurement, n_qubits: int) -> None:
    if m.kind == "expval":
        if m.pauli is None:
            raise InvalidCircuit("expval measurement needs a Pauli string")
        if len(m.pauli.ops) != n_qubits:
            raise InvalidCircuit(
                f"Pauli string length {len(m.pauli.ops)} != {n_qubits} qubits")
    elif m.kind == "probs":
        if m.qubits is None or len(m.qubits) == 0:
            raise InvalidCircuit("probs measurement needs at least one qubit")
        if len(set(m.qubits)) != len(m.qubits):
            raise QubitOutOfRange(f"probs qubits must be distinct, got {m.qubits}")
        for q in m.qubits:
            if not (0 <= q < n_qubits):
                raise QubitOutOfRange(f"qubit {q} outside 0..{n_qubits - 1}")
    elif m.kind != "state":
        raise InvalidCircuit(f"unknown measurement kind {m.kind!r}")


def _param_count_of(shape) -> int:
    if shape is None:
        return 0
    if isinstance(shape, int):
        return shape
    return int(math.prod(shape))


def build_circuit(gates, measurements, n_qubits, param_shape=0,
                  init_state=None) -> Circuit:
    """Validate and freeze a circuit.

    ``param_shape`` is an int or a shape tuple; only its product (the flat
    parameter count P) matters to the engine.  ``init_state`` replaces the
    default all-zeros state and must be a unit-norm vector of length 2^n.
    """
    if n_qubits < 1:
        raise InvalidCircuit(f"n_qubits must be >= 1, got {n_qubits}")
    p_count = _param_count_of(param_shape)
    gates = tuple(gates)
    measurements = tuple(measurements)
    if not measurements:
        raise EmptyMeasurement("circuit declares no measurements")
    for g in gates:
        _validate_gate(g, n_qubits, p_count)
    for m in measurements:
        _validate_measurement(m, n_qubits)
    state = None
    if init_state is not None:
        state = np.asarray(init_state, dtype=complex).ravel()
        if state.shape[0] != 2 ** n_qubits:
            raise BadInitStateLength(
                f"init_state length {state.shape[0]} != 2^{n_qubits}")
        norm = float(np.linalg.norm(state))
        if abs(norm - 1.0) > 1e-12:
            raise NonUnitNorm(f"init_state norm {norm!r} != 1")
        state = state.copy()
        state.setflags(write=False)
    return Circuit(n_qubits=n_qubits, gates=gates, measurements=measurements,
                   param_count=p_count, init_state=state)


def bound_angles(gate: GateInstance, params: np.ndarray) -> tuple[float, ...]:
    """Resolve a gate's ParamRef/literal mix against a parameter vector."""
    out = []
    for p in gate.params:
        if isinstance(p, ParamRef):
            out.append(p.scale * float(params[p.slot]))
        else:
            out.append(float(p))
    return tuple(out)


def gate_matrix(gate: Gate, params: np.ndarray | None = None) -> np.ndarray:
    """Unitary matrix of a gate instance, binding ParamRefs from ``params``."""
    if isinstance(gate, UnitaryGate):
        return np.asarray(gate.matrix)
    if gate.params and params is None and gate.is_parameterized:
        raise InvalidCircuit("parameterized gate needs a parameter vector")
    angles = bound_angles(gate, params if params is not None else np.empty(0))
    return G.matrix(gate.kind, angles)
