"""Dense state-vector engine.

States live as complex arrays of shape (2,)*n with qubit 0 on the leftmost
axis (most significant bit of the flattened basis index).  Gates are applied
as strided tensor contractions on the target axes; the full 2^n x 2^n
operator is never materialized.
"""

from __future__ import annotations

import numpy as np

from .circuit import Circuit, Gate, Measurement, PauliString, gate_matrix
from .errors import ParamLengthMismatch, TooManyQubits
from .gates import pauli_matrix

# 2^26 amplitudes = 1 GiB of complex128; past that this mode thrashes and the
# tensor-network mode is the right tool.
MAX_QUBITS = 26


def check_qubit_budget(n_qubits: int) -> None:
    if n_qubits > MAX_QUBITS:
        raise TooManyQubits(
            f"{n_qubits} qubits exceed the state-vector limit of {MAX_QUBITS} "
            f"(2^{MAX_QUBITS} amplitudes); compile with the tensor-network "
            f"mode instead")


def initial_state(circuit: Circuit) -> np.ndarray:
    n = circuit.n_qubits
    if circuit.init_state is not None:
        return circuit.init_state.reshape((2,) * n).astype(complex)
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1.0
    return psi


def apply_matrix(psi: np.ndarray, u: np.ndarray, qubits: tuple[int, ...],
                 check_norm: bool = True) -> np.ndarray:
    """Apply a 2^k x 2^k matrix to the given qubit axes of a state array.

    check_norm is disabled when applying non-unitary operators (observables,
    gate derivatives) during gradient sweeps.
    """
    k = len(qubits)
    u_t = np.asarray(u).reshape((2,) * (2 * k))
    out = np.tensordot(u_t, psi, axes=(tuple(range(k, 2 * k)), qubits))
    out = np.moveaxis(out, tuple(range(k)), qubits)
    if check_norm:
        assert abs(np.linalg.norm(out) - 1.0) < 1e-9
    return out


def apply_gate(psi: np.ndarray, gate: Gate, params: np.ndarray) -> np.ndarray:
    return apply_matrix(psi, gate_matrix(gate, params), gate.qubits)


def apply_pauli_string(psi: np.ndarray, pauli: PauliString) -> np.ndarray:
    """P|psi> for a Pauli product (the coefficient is NOT applied here)."""
    phi = psi
    for q, ch in pauli.non_identity():
        phi = np.tensordot(pauli_matrix(ch), phi, axes=([1], [q]))
        phi = np.moveaxis(phi, 0, q)
    return phi


def expectation(psi: np.ndarray, pauli: PauliString) -> float:
    phi = apply_pauli_string(psi, pauli)
    val = complex(np.vdot(psi, phi)) * pauli.coefficient
    assert abs(val.imag) < 1e-10
    return float(val.real)


def probabilities(psi: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    """Marginal |amplitude|^2 over the listed qubits, in that qubit order."""
    n = psi.ndim
    p = np.abs(psi) ** 2
    rest = [q for q in range(n) if q not in qubits]
    p = np.transpose(p, tuple(qubits) + tuple(rest))
    return p.reshape((2 ** len(qubits), -1)).sum(axis=1)


def measure(psi: np.ndarray, spec: Measurement):
    if spec.kind == "expval":
        assert spec.pauli is not None
        return expectation(psi, spec.pauli)
    if spec.kind == "probs":
        assert spec.qubits is not None
        return probabilities(psi, spec.qubits)
    return psi.ravel().copy()


def run(circuit: Circuit, params, want_tape: bool = False,
        matrix_cache: dict | None = None):
    """Propagate the state through all gates, then evaluate measurements.

    Returns (results, tape) where tape is the ordered list of post-gate
    states (None unless requested; gradient methods replay it backwards).
    ``matrix_cache`` maps gate position to a precomputed constant matrix.
    """
    check_qubit_budget(circuit.n_qubits)
    params = np.asarray(params, dtype=float).ravel()
    if params.shape[0] != circuit.param_count:
        raise ParamLengthMismatch(
            f"expected {circuit.param_count} parameter(s), got {params.shape[0]}")
    psi = initial_state(circuit)
    tape: list[np.ndarray] | None = [] if want_tape else None
    for i, gate in enumerate(circuit.gates):
        if matrix_cache is not None and i in matrix_cache:
            psi = apply_matrix(psi, matrix_cache[i], gate.qubits)
        else:
            psi = apply_gate(psi, gate, params)
        if tape is not None:
            tape.append(psi)
    results = [measure(psi, m) for m in circuit.measurements]
    return results, tape
