"""Many-body-localization classification task: exact disorder evolution for
dataset generation plus the digital-analog classifier circuit.

The chain Hamiltonian (hbar = 1) is

    H_d = sum_i d_i Z_i + sum_i g (X_i X_{i+1} + Y_i Y_{i+1}) / 2

with nearest-neighbor coupling g.  Samples evolve the Neel state |0101...>
under exp(-i H_d t) with d_i drawn from a weak-disorder (ergodic) or a
strong-disorder (localized) range; the classifier alternates trainable
R(theta, phi) = Z(theta) X(phi) Z(-theta) layers with fixed exp(-i H_0 t)
coupling blocks (H_0 is the disorder-free part of H_d).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce

import numpy as np

from ..circuit import GateInstance, ParamRef, UnitaryGate
from ..errors import TooManyQubitsForExactEvolution
from ..gates import GateKind, pauli_matrix

MAX_EXACT_QUBITS = 12


@dataclass(frozen=True)
class MBLTaskConfig:
    n_qubits: int
    g: float = 1.0                                  # coupling strength
    t_evolve: float = 3.0                           # disorder evolution time
    ergodic_range: tuple[float, float] = (0.0, 0.5)      # units of g
    localized_range: tuple[float, float] = (5.0, 10.0)   # units of g
    qnn_layers: int | None = None                   # default n_qubits + 1
    t_qnn: float = 1.0                              # coupling-block time

    def __post_init__(self) -> None:
        if self.n_qubits < 2:
            raise ValueError("the chain needs at least two qubits")
        lo_e, hi_e = self.ergodic_range
        lo_l, hi_l = self.localized_range
        if not (hi_e <= lo_l or hi_l <= lo_e):
            raise ValueError("class disorder ranges must be disjoint")

    @property
    def layers(self) -> int:
        return self.qnn_layers if self.qnn_layers is not None \
            else self.n_qubits + 1


def _op_on(n: int, q: int, p: str) -> np.ndarray:
    mats = [pauli_matrix(p) if i == q else pauli_matrix("I") for i in range(n)]
    return reduce(np.kron, mats)


def chain_hamiltonian(cfg: MBLTaskConfig, disorder) -> np.ndarray:
    n = cfg.n_qubits
    disorder = np.asarray(disorder, dtype=float)
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i in range(n):
        h += disorder[i] * _op_on(n, i, "Z")
    for i in range(n - 1):
        xx = _op_on(n, i, "X") @ _op_on(n, i + 1, "X")
        yy = _op_on(n, i, "Y") @ _op_on(n, i + 1, "Y")
        h += cfg.g * (xx + yy) / 2.0
    return h


def evolution_unitary(h: np.ndarray, t: float) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def neel_gates(n: int) -> tuple[GateInstance, ...]:
    return tuple(GateInstance(GateKind.X, (q,), ()) for q in range(1, n, 2))


@dataclass(frozen=True)
class MBLSample:
    gates: tuple            # Neel preparation + evolution block
    label: int              # 0 = ergodic (weak disorder), 1 = localized
    disorder: tuple[float, ...]


def generate_mbl_dataset(cfg: MBLTaskConfig, n_samples: int,
                         seed: int = 0) -> list[MBLSample]:
    """Half weak-disorder, half strong-disorder samples in shuffled order."""
    if cfg.n_qubits > MAX_EXACT_QUBITS:
        raise TooManyQubitsForExactEvolution(
            f"exact evolution is limited to {MAX_EXACT_QUBITS} qubits")
    rng = random.Random(seed)
    prep = neel_gates(cfg.n_qubits)
    samples = []
    for k in range(n_samples):
        label = k % 2
        lo, hi = cfg.localized_range if label else cfg.ergodic_range
        d = tuple(rng.uniform(lo * cfg.g, hi * cfg.g)
                  for _ in range(cfg.n_qubits))
        u = evolution_unitary(chain_hamiltonian(cfg, d), cfg.t_evolve)
        block = UnitaryGate(tuple(range(cfg.n_qubits)), u)
        samples.append(MBLSample(prep + (block,), label, d))
    rng.shuffle(samples)
    return samples


def classifier_gates(cfg: MBLTaskConfig) -> tuple[tuple, int]:
    """Trainable classifier: per layer one R(theta, phi) per qubit, coupling
    blocks in between.  Returns (gates, parameter count); layout is
    layer-major with (theta, phi) per qubit."""
    n = cfg.n_qubits
    u0 = evolution_unitary(chain_hamiltonian(cfg, np.zeros(n)), cfg.t_qnn)
    block = UnitaryGate(tuple(range(n)), u0)
    gates = []
    slot = 0
    for layer in range(cfg.layers):
        for q in range(n):
            theta, phi = slot, slot + 1
            slot += 2
            # Z(theta) X(phi) Z(-theta) applied right-to-left
            gates.append(GateInstance(GateKind.RZ, (q,),
                                      (ParamRef(theta, scale=-1.0),)))
            gates.append(GateInstance(GateKind.RX, (q,), (ParamRef(phi),)))
            gates.append(GateInstance(GateKind.RZ, (q,), (ParamRef(theta),)))
        if layer < cfg.layers - 1:
            gates.append(block)
    return tuple(gates), slot


def imbalance(z_expectations) -> float:
    """Staggered magnetization sum_i (-1)^i <Z_i>; high after evolution means
    the initial Neel pattern survived (localization)."""
    return float(sum((-1) ** i * z for i, z in enumerate(z_expectations)))
