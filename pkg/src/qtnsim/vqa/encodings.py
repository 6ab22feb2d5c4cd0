"""Classical-data encodings: turn a feature vector into a circuit prefix
(gates and/or an initial state)."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..circuit import GateInstance
from ..errors import FeatureLengthMismatch, ZeroVector
from ..gates import GateKind


class EncodingKind(Enum):
    BASIS = "basis"
    AMPLITUDE = "amplitude"
    ANGLE = "angle"


@dataclass(frozen=True)
class EncodingSpec:
    kind: EncodingKind
    n_qubits: int


@dataclass(frozen=True)
class EncodedPrefix:
    gates: tuple[GateInstance, ...]
    init_state: np.ndarray | None = None


def _bits(features, n: int) -> list[int]:
    if isinstance(features, (int, np.integer)):
        if not 0 <= int(features) < 2 ** n:
            raise FeatureLengthMismatch(
                f"basis value {features} does not fit in {n} qubits")
        return [int(features) >> (n - 1 - q) & 1 for q in range(n)]
    bits = list(features)
    if len(bits) != n:
        raise FeatureLengthMismatch(
            f"expected {n} bits, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise FeatureLengthMismatch("basis features must be 0/1 bits")
    return [int(b) for b in bits]


def encode(spec: EncodingSpec, features) -> EncodedPrefix:
    n = spec.n_qubits

    if spec.kind is EncodingKind.BASIS:
        gates = tuple(GateInstance(GateKind.X, (q,), ())
                      for q, b in enumerate(_bits(features, n)) if b)
        return EncodedPrefix(gates)

    if spec.kind is EncodingKind.AMPLITUDE:
        x = np.asarray(features, dtype=complex).ravel()
        if x.size > 2 ** n or x.size == 0:
            raise FeatureLengthMismatch(
                f"amplitude vector of length {x.size} does not fit "
                f"{n} qubit(s)")
        norm = np.linalg.norm(x)
        if norm == 0:
            raise ZeroVector("cannot amplitude-encode the zero vector")
        state = np.zeros(2 ** n, dtype=complex)
        state[: x.size] = x / norm
        return EncodedPrefix((), init_state=state)

    x = np.asarray(features, dtype=float).ravel()
    if x.size != n:
        raise FeatureLengthMismatch(
            f"angle encoding needs one feature per qubit ({n}), got {x.size}")
    gates = []
    for q in range(n):
        gates.append(GateInstance(GateKind.H, (q,), ()))
        gates.append(GateInstance(GateKind.RX, (q,), (float(x[q]),)))
    return EncodedPrefix(tuple(gates))
