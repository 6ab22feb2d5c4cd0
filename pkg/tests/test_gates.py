import math
import random

import numpy as np
import pytest

from qtnsim import gates as G
from qtnsim.gates import GateKind

RNG = random.Random(11)


def _angles(kind):
    return tuple(RNG.uniform(-2 * math.pi, 2 * math.pi)
                 for _ in range(G.param_count(kind)))


@pytest.mark.parametrize("kind", list(GateKind))
def test_every_gate_is_unitary(kind):
    u = G.matrix(kind, _angles(kind))
    d = 2 ** G.arity(kind)
    assert u.shape == (d, d)
    assert np.allclose(u @ u.conj().T, np.eye(d), atol=1e-12)


def test_constant_gate_literals():
    s2 = 1 / math.sqrt(2)
    assert np.array_equal(G.matrix(GateKind.X), [[0, 1], [1, 0]])
    assert np.array_equal(G.matrix(GateKind.Y), [[0, -1j], [1j, 0]])
    assert np.array_equal(G.matrix(GateKind.Z), [[1, 0], [0, -1]])
    assert np.allclose(G.matrix(GateKind.H), [[s2, s2], [s2, -s2]])
    assert np.array_equal(G.matrix(GateKind.CNOT),
                          [[1, 0, 0, 0], [0, 1, 0, 0],
                           [0, 0, 0, 1], [0, 0, 1, 0]])
    assert np.array_equal(G.matrix(GateKind.CZ), np.diag([1, 1, 1, -1]))
    assert np.array_equal(G.matrix(GateKind.SWAP),
                          [[1, 0, 0, 0], [0, 0, 1, 0],
                           [0, 1, 0, 0], [0, 0, 0, 1]])


def test_phase_gate_relations():
    s, t = G.matrix(GateKind.S), G.matrix(GateKind.T)
    assert np.allclose(t @ t, s)
    assert np.allclose(s @ s, G.matrix(GateKind.Z))


def test_rotation_conventions():
    th = 0.937
    c, s = math.cos(th / 2), math.sin(th / 2)
    assert np.allclose(G.matrix(GateKind.RX, (th,)),
                       [[c, -1j * s], [-1j * s, c]])
    assert np.allclose(G.matrix(GateKind.RY, (th,)), [[c, -s], [s, c]])
    assert np.allclose(G.matrix(GateKind.RZ, (th,)),
                       np.diag([np.exp(-0.5j * th), np.exp(0.5j * th)]))
    assert np.allclose(G.matrix(GateKind.PHASESHIFT, (th,)),
                       np.diag([1, np.exp(1j * th)]))
    assert np.allclose(G.matrix(GateKind.RX, (math.pi,)),
                       -1j * G.matrix(GateKind.X))


def test_rot_is_zyz_sandwich():
    phi, th, om = 0.4, 1.1, -0.8
    want = (G.matrix(GateKind.RZ, (om,)) @ G.matrix(GateKind.RY, (th,))
            @ G.matrix(GateKind.RZ, (phi,)))
    assert np.allclose(G.matrix(GateKind.ROT, (phi, th, om)), want)


@pytest.mark.parametrize("kind,block", [(GateKind.CRX, GateKind.RX),
                                        (GateKind.CRY, GateKind.RY),
                                        (GateKind.CRZ, GateKind.RZ)])
def test_controlled_rotations_block_structure(kind, block):
    th = 0.61
    u = G.matrix(kind, (th,))
    assert np.allclose(u[:2, :2], np.eye(2))
    assert np.allclose(u[:2, 2:], 0) and np.allclose(u[2:, :2], 0)
    assert np.allclose(u[2:, 2:], G.matrix(block, (th,)))


@pytest.mark.parametrize("kind", [k for k in GateKind if G.param_count(k)])
def test_matrix_grads_match_finite_difference(kind):
    params = _angles(kind)
    grads = G.matrix_grads(kind, params)
    assert len(grads) == G.param_count(kind)
    eps = 1e-6
    for j, g in enumerate(grads):
        up = list(params)
        dn = list(params)
        up[j] += eps
        dn[j] -= eps
        fd = (G.matrix(kind, tuple(up)) - G.matrix(kind, tuple(dn))) / (2 * eps)
        assert np.allclose(g, fd, atol=1e-8)


def _tensor(kind, params):
    k = G.arity(kind)
    return G.matrix(kind, params).reshape((2,) * (2 * k))


@pytest.mark.parametrize("kind,pairs", sorted(G.DIAGONAL_AXIS_PAIRS.items(),
                                              key=lambda kv: kv[0].value))
def test_declared_diagonal_structure_is_real(kind, pairs):
    t = _tensor(kind, _angles(kind))
    for a, b in pairs:
        for idx in np.ndindex(*t.shape):
            if idx[a] != idx[b]:
                assert t[idx] == 0


@pytest.mark.parametrize("kind,pairs", sorted(G.ANTIDIAGONAL_AXIS_PAIRS.items(),
                                              key=lambda kv: kv[0].value))
def test_declared_antidiagonal_structure_is_real(kind, pairs):
    t = _tensor(kind, _angles(kind))
    for a, b in pairs:
        for idx in np.ndindex(*t.shape):
            if idx[a] == idx[b]:
                assert t[idx] == 0


def test_param_count_enforced():
    with pytest.raises(ValueError):
        G.matrix(GateKind.RX, ())
    with pytest.raises(ValueError):
        G.matrix(GateKind.H, (0.3,))


def test_shift_rule_classification():
    assert G.generator_eigenvalue_count(GateKind.RX) == 2
    assert G.generator_eigenvalue_count(GateKind.CRZ) == 4
    assert G.generator_eigenvalue_count(GateKind.H) == 0
