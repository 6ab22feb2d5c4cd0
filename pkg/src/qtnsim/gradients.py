"""Jacobians of compiled circuits: parameter shift, central finite
differences, and reverse-mode adjoint sweeps.

All methods produce a (#measurements x P) real matrix and require every
measurement to be an expectation value.  Parameter shift additionally
requires every trainable gate generator to have exactly two eigenvalues;
controlled rotations must use adjoint or finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import GateInstance, ParamRef, bound_angles, gate_matrix
from .compiler import CompiledCircuit, Mode, evaluate
from .contraction import execute_with_adjoints
from .errors import FourTermGateUnsupported, NonExpectationMeasurement
from .gates import generator_eigenvalue_count, matrix_grads
from .tn import make_bind
from . import statevector as sv


@dataclass(frozen=True)
class GradientConfig:
    shift: float = math.pi / 2       # s in k[f(u+s) - f(u-s)]
    shift_constant: float = 0.5      # k
    fd_step: float = 1e-5            # central-difference half step

    def __post_init__(self) -> None:
        if self.shift <= 0 or self.fd_step <= 0:
            raise ValueError("shift and fd_step must be positive")
        if not math.isfinite(self.shift_constant):
            raise ValueError("shift constant must be finite")


def _require_expectations(cc: CompiledCircuit) -> None:
    for m in cc.circuit.measurements:
        if m.kind != "expval":
            raise NonExpectationMeasurement(
                f"gradients need expectation measurements, got {m.kind!r}")


def _trainable_refs(cc: CompiledCircuit):
    """(gate position, param position, ref) for every trainable reference."""
    out = []
    for gi, gate in enumerate(cc.circuit.gates):
        if not isinstance(gate, GateInstance):
            continue
        for pi, p in enumerate(gate.params):
            if isinstance(p, ParamRef) and p.trainable:
                out.append((gi, pi, p))
    return out


def _shifted_jacobian(cc: CompiledCircuit, params, step: float,
                      scale: float) -> np.ndarray:
    params = np.asarray(params, dtype=float)
    n_meas = len(cc.circuit.measurements)
    jac = np.zeros((n_meas, cc.n_params))
    for j in range(cc.n_params):
        e = np.zeros_like(params)
        e[j] = step
        plus = evaluate(cc, params + e)
        minus = evaluate(cc, params - e)
        for m in range(n_meas):
            jac[m, j] = scale * (plus[m] - minus[m])
    return jac


def grad_param_shift(cc: CompiledCircuit, params,
                     config: GradientConfig | None = None) -> np.ndarray:
    """Two-point shift rule; exact for two-eigenvalue generators."""
    config = config or GradientConfig()
    _require_expectations(cc)
    for gi, _, _ in _trainable_refs(cc):
        kind = cc.circuit.gates[gi].kind
        if generator_eigenvalue_count(kind) != 2:
            raise FourTermGateUnsupported(
                f"{kind.value} has a four-eigenvalue generator; "
                "use adjoint or finite differences")
    return _shifted_jacobian(cc, params, config.shift, config.shift_constant)


def grad_finite_diff(cc: CompiledCircuit, params,
                     config: GradientConfig | None = None) -> np.ndarray:
    """Central differences with half step fd_step."""
    config = config or GradientConfig()
    _require_expectations(cc)
    return _shifted_jacobian(cc, params, config.fd_step,
                             1.0 / (2.0 * config.fd_step))


def _adjoint_statevector(cc: CompiledCircuit, params: np.ndarray) -> np.ndarray:
    circuit = cc.circuit
    _, tape = sv.run(circuit, params, want_tape=True,
                     matrix_cache=cc.sv_matrix_cache)
    psi_final = tape[-1] if tape else sv.initial_state(circuit)
    lams = [sv.apply_pauli_string(psi_final, m.pauli)
            for m in circuit.measurements]
    coeffs = [m.pauli.coefficient for m in circuit.measurements]

    jac = np.zeros((len(lams), cc.n_params))
    refs_by_gate: dict[int, list[tuple[int, ParamRef]]] = {}
    for gi, pi, ref in _trainable_refs(cc):
        refs_by_gate.setdefault(gi, []).append((pi, ref))

    for gi in range(len(circuit.gates) - 1, -1, -1):
        gate = circuit.gates[gi]
        ket_before = tape[gi - 1] if gi > 0 else sv.initial_state(circuit)
        for pi, ref in refs_by_gate.get(gi, ()):
            angles = bound_angles(gate, params)
            du = matrix_grads(gate.kind, angles)[pi]
            dpsi = sv.apply_matrix(ket_before, du, gate.qubits,
                                   check_norm=False)
            for m, lam in enumerate(lams):
                term = 2.0 * np.vdot(lam, dpsi).real
                jac[m, ref.slot] += coeffs[m] * ref.scale * term
        u = gate_matrix(gate, params)
        for m in range(len(lams)):
            lams[m] = sv.apply_matrix(lams[m], u.conj().T, gate.qubits,
                                      check_norm=False)
    return jac


def _adjoint_tensor_network(cc: CompiledCircuit, params: np.ndarray) -> np.ndarray:
    circuit = cc.circuit
    bind = make_bind(circuit, params)
    jac = np.zeros((len(cc.programs), cc.n_params))
    refs_by_gate: dict[int, list[tuple[int, ParamRef]]] = {}
    for gi, pi, ref in _trainable_refs(cc):
        refs_by_gate.setdefault(gi, []).append((pi, ref))

    for m, program in enumerate(cc.programs):
        net = program.net
        full_bind = {**net.const_bind, **bind}
        leaves = net.materialize(bind)
        full_idx = {nid: net.nodes[nid].indices for nid in net.nodes}
        _, leaf_adjoints = execute_with_adjoints(
            program.tree, full_idx, leaves, program.plan.sliced_indices,
            program.hypergraph.dims(),
            root_adjoint=np.ones((), dtype=complex))

        accum: dict = {}
        for nid, node in net.nodes.items():
            node.recipe.backward(leaf_adjoints[nid], node.conj, full_bind,
                                 accum)

        coeff = program.measurement.pauli.coefficient
        for gi, prefs in refs_by_gate.items():
            gate = circuit.gates[gi]
            plain = accum.get((("gate", gi), False))
            conjed = accum.get((("gate", gi), True))
            if plain is None and conjed is None:
                continue
            angles = bound_angles(gate, params)
            grads = matrix_grads(gate.kind, angles)
            shape = (2,) * (2 * len(gate.qubits))
            for pi, ref in prefs:
                du = grads[pi].reshape(shape)
                total = 0.0
                if plain is not None:
                    total += np.sum(plain * du)
                if conjed is not None:
                    total += np.sum(conjed * np.conj(du))
                jac[m, ref.slot] += coeff * ref.scale * float(np.real(total))
    return jac


def grad_adjoint(cc: CompiledCircuit, params,
                 config: GradientConfig | None = None) -> np.ndarray:
    """All partials from one forward plus one reverse sweep."""
    _require_expectations(cc)
    params = np.asarray(params, dtype=float)
    if cc.mode is Mode.STATEVECTOR:
        return _adjoint_statevector(cc, params)
    return _adjoint_tensor_network(cc, params)


_METHODS = {
    "adjoint": grad_adjoint,
    "param-shift": grad_param_shift,
    "finite-diff": grad_finite_diff,
}


def jacobian(cc: CompiledCircuit, params,
             config: GradientConfig | None = None) -> np.ndarray:
    """Dispatch on the compiled circuit's gradient method."""
    method = cc.grad_method.value
    if method not in _METHODS:
        raise ValueError("circuit was compiled without a gradient method")
    return _METHODS[method](cc, params, config)
