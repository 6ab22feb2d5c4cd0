"""Gate definitions: kinds, unitary matrices, and analytic parameter derivatives.

Conventions (fixed across the whole package):

* qubit 0 is the most-significant bit of a basis index, so the basis index of
  ``|q0 q1 ... q_{n-1}>`` is ``sum(q_i * 2**(n-1-i))``;
* rotation gates use the half-angle convention ``RX(t) = exp(-i t X / 2)``
  (likewise RY/RZ), which makes the two-term shift rule exact with
  ``s = pi/2`` and ``k = 1/2``;
* ``Rot(phi, theta, omega) = RZ(omega) @ RY(theta) @ RZ(phi)``.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache

import numpy as np


class GateKind(enum.Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"
    H = "H"
    S = "S"
    T = "T"
    RX = "RX"
    RY = "RY"
    RZ = "RZ"
    ROT = "Rot"
    PHASESHIFT = "PhaseShift"
    CNOT = "CNOT"
    CZ = "CZ"
    SWAP = "SWAP"
    CRX = "CRX"
    CRY = "CRY"
    CRZ = "CRZ"

    def __repr__(self) -> str:
        return self.value


_ONE_QUBIT = {
    GateKind.I, GateKind.X, GateKind.Y, GateKind.Z, GateKind.H, GateKind.S,
    GateKind.T, GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.ROT,
    GateKind.PHASESHIFT,
}

PARAM_COUNT = {
    GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1, GateKind.PHASESHIFT: 1,
    GateKind.CRX: 1, GateKind.CRY: 1, GateKind.CRZ: 1, GateKind.ROT: 3,
}

# Number of distinct eigenvalues of the gate generator: 0 for constant gates,
# 2 for plain rotations (two-term shift rule applies), 4 for controlled
# rotations (four-term rule, not implemented here).
GENERATOR_EIGENVALUE_COUNT = {
    GateKind.RX: 2, GateKind.RY: 2, GateKind.RZ: 2, GateKind.PHASESHIFT: 2,
    GateKind.ROT: 2,
    GateKind.CRX: 4, GateKind.CRY: 4, GateKind.CRZ: 4,
}


def arity(kind: GateKind) -> int:
    return 1 if kind in _ONE_QUBIT else 2


def param_count(kind: GateKind) -> int:
    return PARAM_COUNT.get(kind, 0)


def generator_eigenvalue_count(kind: GateKind) -> int:
    return GENERATOR_EIGENVALUE_COUNT.get(kind, 0)


_SQ2 = 1.0 / math.sqrt(2.0)

_CONST = {
    GateKind.I: np.eye(2, dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.T: np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


def _rx(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _ry(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(t: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]], dtype=complex)


def _phaseshift(t: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * t)]], dtype=complex)


def _controlled(block: np.ndarray) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    u[2:, 2:] = block
    return u


def matrix(kind: GateKind, params: tuple[float, ...] = ()) -> np.ndarray:
    """Unitary matrix of a gate; ``params`` length must match ``param_count``."""
    n = param_count(kind)
    if len(params) != n:
        raise ValueError(f"{kind.value} takes {n} parameter(s), got {len(params)}")
    if kind in _CONST:
        return _CONST[kind].copy()
    if kind is GateKind.RX:
        return _rx(params[0])
    if kind is GateKind.RY:
        return _ry(params[0])
    if kind is GateKind.RZ:
        return _rz(params[0])
    if kind is GateKind.PHASESHIFT:
        return _phaseshift(params[0])
    if kind is GateKind.ROT:
        phi, theta, omega = params
        return _rz(omega) @ _ry(theta) @ _rz(phi)
    if kind is GateKind.CRX:
        return _controlled(_rx(params[0]))
    if kind is GateKind.CRY:
        return _controlled(_ry(params[0]))
    if kind is GateKind.CRZ:
        return _controlled(_rz(params[0]))
    raise ValueError(f"unknown gate kind {kind!r}")


def _drx(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return 0.5 * np.array([[-s, -1j * c], [-1j * c, -s]], dtype=complex)


def _dry(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return 0.5 * np.array([[-s, -c], [c, -s]], dtype=complex)


def _drz(t: float) -> np.ndarray:
    return np.array(
        [[-0.5j * np.exp(-0.5j * t), 0], [0, 0.5j * np.exp(0.5j * t)]], dtype=complex)


def _dphaseshift(t: float) -> np.ndarray:
    return np.array([[0, 0], [0, 1j * np.exp(1j * t)]], dtype=complex)


def _controlled_block_grad(dblock: np.ndarray) -> np.ndarray:
    d = np.zeros((4, 4), dtype=complex)
    d[2:, 2:] = dblock
    return d


def matrix_grads(kind: GateKind, params: tuple[float, ...]) -> list[np.ndarray]:
    """Analytic ``dU/dtheta_j`` for each gate parameter, in parameter order."""
    if kind is GateKind.RX:
        return [_drx(params[0])]
    if kind is GateKind.RY:
        return [_dry(params[0])]
    if kind is GateKind.RZ:
        return [_drz(params[0])]
    if kind is GateKind.PHASESHIFT:
        return [_dphaseshift(params[0])]
    if kind is GateKind.ROT:
        phi, theta, omega = params
        return [
            _rz(omega) @ _ry(theta) @ _drz(phi),
            _rz(omega) @ _dry(theta) @ _rz(phi),
            _drz(omega) @ _ry(theta) @ _rz(phi),
        ]
    if kind is GateKind.CRX:
        return [_controlled_block_grad(_drx(params[0]))]
    if kind is GateKind.CRY:
        return [_controlled_block_grad(_dry(params[0]))]
    if kind is GateKind.CRZ:
        return [_controlled_block_grad(_drz(params[0]))]
    return []


# Structural zero patterns, independent of parameter values.  Axis pairs refer
# to the gate *tensor* with axes [out_0..out_{k-1}, in_0..in_{k-1}]: a pair
# (a, b) means the tensor vanishes unless index a equals index b (diagonal) or
# equals its flip (anti-diagonal).  Used by the network simplifier, which must
# not probe parameterized matrices numerically.
DIAGONAL_AXIS_PAIRS = {
    GateKind.I: ((0, 1),),
    GateKind.Z: ((0, 1),),
    GateKind.S: ((0, 1),),
    GateKind.T: ((0, 1),),
    GateKind.RZ: ((0, 1),),
    GateKind.PHASESHIFT: ((0, 1),),
    GateKind.CNOT: ((0, 2),),
    GateKind.CZ: ((0, 2), (1, 3)),
    GateKind.SWAP: ((0, 3), (1, 2)),
    GateKind.CRX: ((0, 2),),
    GateKind.CRY: ((0, 2),),
    GateKind.CRZ: ((0, 2), (1, 3)),
}

ANTIDIAGONAL_AXIS_PAIRS = {
    GateKind.X: ((0, 1),),
    GateKind.Y: ((0, 1),),
}


@lru_cache(maxsize=None)
def pauli_matrix(ch: str) -> np.ndarray:
    m = {"I": GateKind.I, "X": GateKind.X, "Y": GateKind.Y, "Z": GateKind.Z}
    if ch not in m:
        raise ValueError(f"not a Pauli label: {ch!r}")
    out = matrix(m[ch])
    out.setflags(write=False)
    return out
