"""Ansatz templates, feature encodings, optimizers, Pauli-sum Hamiltonians,
and the MBL dataset generator."""

import numpy as np
import pytest

from qtnsim.circuit import Measurement, ParamRef, build_circuit
from qtnsim.compiler import compile, evaluate
from qtnsim.errors import (FeatureLengthMismatch, HamiltonianParseError,
                           ParamCountMismatch, TooManyQubitsForExactEvolution,
                           ZeroVector)
from qtnsim.gates import GateKind
from qtnsim.vqa import (Adam, EncodingKind, EncodingSpec, GradientDescent,
                        MBLTaskConfig, TemplateKind, TemplateSpec,
                        chain_hamiltonian, dense_matrix, encode,
                        evolution_unitary, expand_template,
                        generate_mbl_dataset, ground_energy, imbalance,
                        parse_pauli_sum, template_param_count,
                        to_measurements)

HWE = TemplateKind.HARDWARE_EFFICIENT
FC = TemplateKind.FULLY_CONNECTED
RL = TemplateKind.RANDOM_LAYER


def slots_used(gates):
    refs = [p for g in gates for p in g.params if isinstance(p, ParamRef)]
    return len(refs), len({p.slot for p in refs})


# -- templates ---------------------------------------------------------------

def test_hardware_efficient_eight_by_twelve():
    assert template_param_count(TemplateSpec(HWE, 8, 12)) == 208


def test_param_count_formulas_match_emitted_slots():
    for n in (1, 2, 3, 5, 8, 16):
        for depth in (0, 1, 2, 5, 16):
            for kind in (HWE, FC, RL):
                for ring in ((False, True) if kind is FC else (False,)):
                    spec = TemplateSpec(kind, n, depth, seed=3, ring=ring)
                    gates = expand_template(spec)
                    total, unique = slots_used(gates)
                    assert total >= unique  # shared slots never appear here
                    assert unique == total == template_param_count(spec)
                    if kind is HWE:
                        assert total == 2 * n * (depth + 1)
                    if kind is FC and ring and n > 1:
                        assert total == 2 * n * depth


def test_depth_zero_hardware_efficient_is_one_rotation_row():
    gates = expand_template(TemplateSpec(HWE, 5, 0))
    assert len(gates) == 10
    assert [g.kind for g in gates] == [GateKind.RY] * 5 + [GateKind.RZ] * 5
    assert all(g.kind is not GateKind.CNOT for g in gates)


def test_random_layer_is_seed_deterministic():
    a = expand_template(TemplateSpec(RL, 4, 3, seed=11))
    b = expand_template(TemplateSpec(RL, 4, 3, seed=11))
    assert a == b
    c = expand_template(TemplateSpec(RL, 4, 3, seed=12))
    assert c != a


def test_ring_coupling_touches_neighbors_only():
    gates = expand_template(TemplateSpec(FC, 5, 2, ring=True))
    cnots = [g for g in gates if g.kind is GateKind.CNOT]
    assert len(cnots) == 10
    assert all((g.qubits[0] + 1) % 5 == g.qubits[1] for g in cnots)


def test_explicit_params_fold_to_literals():
    spec = TemplateSpec(HWE, 2, 1)
    vals = np.linspace(0.1, 0.8, template_param_count(spec))
    gates = expand_template(spec, vals)
    lits = [p for g in gates for p in g.params]
    assert all(isinstance(p, float) for p in lits)
    assert lits == [pytest.approx(v) for v in vals]
    with pytest.raises(ParamCountMismatch):
        expand_template(spec, vals[:-1])


def test_template_spec_validation():
    with pytest.raises(ValueError):
        TemplateSpec(HWE, 0, 1)
    with pytest.raises(ValueError):
        TemplateSpec(HWE, 2, -1)


# -- encodings ---------------------------------------------------------------

def test_basis_encoding_five_on_three_qubits():
    prefix = encode(EncodingSpec(EncodingKind.BASIS, 3), 5)
    assert [g.qubits for g in prefix.gates] == [(0,), (2,)]
    assert all(g.kind is GateKind.X for g in prefix.gates)
    assert prefix.init_state is None
    bits = encode(EncodingSpec(EncodingKind.BASIS, 3), [1, 0, 1])
    assert bits.gates == prefix.gates
    with pytest.raises(FeatureLengthMismatch):
        encode(EncodingSpec(EncodingKind.BASIS, 3), 8)
    with pytest.raises(FeatureLengthMismatch):
        encode(EncodingSpec(EncodingKind.BASIS, 3), [1, 0])
    with pytest.raises(FeatureLengthMismatch):
        encode(EncodingSpec(EncodingKind.BASIS, 3), [1, 2, 0])


def test_amplitude_encoding_normalizes_and_pads():
    prefix = encode(EncodingSpec(EncodingKind.AMPLITUDE, 1), (1.0, 1.0))
    assert prefix.gates == ()
    assert np.allclose(prefix.init_state, [0.7071067811865475] * 2,
                       atol=1e-12)
    padded = encode(EncodingSpec(EncodingKind.AMPLITUDE, 2), (3.0, 4.0))
    assert np.allclose(padded.init_state, [0.6, 0.8, 0.0, 0.0], atol=1e-12)
    assert np.linalg.norm(padded.init_state) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ZeroVector):
        encode(EncodingSpec(EncodingKind.AMPLITUDE, 2), (0.0, 0.0))
    with pytest.raises(FeatureLengthMismatch):
        encode(EncodingSpec(EncodingKind.AMPLITUDE, 1), (1.0, 1.0, 1.0))


def test_angle_encoding_matches_dense_reference():
    prefix = encode(EncodingSpec(EncodingKind.ANGLE, 1), (0.4,))
    assert [g.kind for g in prefix.gates] == [GateKind.H, GateKind.RX]
    assert prefix.gates[1].params == (0.4,)
    c = build_circuit(prefix.gates, [Measurement.state()], 1, param_shape=0)
    state = evaluate(compile(c))[0]
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    rx = np.array([[np.cos(0.2), -1j * np.sin(0.2)],
                   [-1j * np.sin(0.2), np.cos(0.2)]])
    assert np.allclose(state, rx @ h @ np.array([1, 0]), atol=1e-12)
    with pytest.raises(FeatureLengthMismatch):
        encode(EncodingSpec(EncodingKind.ANGLE, 2), (0.4,))


# -- optimizers --------------------------------------------------------------

def test_gradient_descent_contracts_a_quadratic():
    opt = GradientDescent(lr=0.3)
    x = np.array([4.0, -2.0])
    for _ in range(40):
        x = opt.step(x, x)  # f = |x|^2 / 2, grad = x
    assert np.linalg.norm(x) < 6 * 0.7 ** 40 + 1e-12
    assert opt.steps == 40
    with pytest.raises(ValueError):
        GradientDescent(lr=0.0)


def test_adam_bias_correction_and_convergence():
    opt = Adam(lr=0.05)
    x0 = np.array([100.0, -100.0])
    x1 = opt.step(x0, x0)
    # first step is lr * sign(grad) up to eps, whatever the gradient scale
    assert np.allclose(x0 - x1, [0.05, -0.05], atol=1e-6)
    # constant-rate Adam orbits the minimum; a geometric cooldown settles it
    opt = Adam(lr=0.05)
    x = np.array([1.0, -1.0])
    for i in range(600):
        x = opt.step(x, x)
        if i >= 200:
            opt.lr *= 0.97
    assert np.linalg.norm(x) < 1e-5
    assert (opt.beta1, opt.beta2, opt.eps) == (0.9, 0.999, 1e-8)


# -- Pauli-sum Hamiltonians --------------------------------------------------

def test_parse_pauli_sum():
    text = "# comment\n\n-0.5 ZZ\n 1.25 XI \n2 IY\n"
    terms = parse_pauli_sum(text)
    assert [(t.coefficient, t.ops) for t in terms] == \
        [(-0.5, "ZZ"), (1.25, "XI"), (2.0, "IY")]


@pytest.mark.parametrize("bad", [
    "", "# only comments\n", "0.5", "0.5 ZZ extra", "abc ZZ", "0.5 ZA",
    "0.5 Z\n0.5 ZZ", "1.0 ",
])
def test_parse_pauli_sum_rejects(bad):
    with pytest.raises(HamiltonianParseError):
        parse_pauli_sum(bad)


def test_ground_energy_analytic_cases():
    assert ground_energy(parse_pauli_sum("1.0 Z")) == pytest.approx(-1.0)
    assert ground_energy(parse_pauli_sum("2.5 X")) == pytest.approx(-2.5)
    # ZZ + XX has eigenvalues {2, 0, 0, -2} on the Bell basis
    assert ground_energy(parse_pauli_sum("1.0 ZZ\n1.0 XX")) \
        == pytest.approx(-2.0)


def test_dense_matrix_agrees_with_measurement_pipeline():
    text = "0.7 ZI\n-0.3 XZ\n0.25 YY\n1.1 II"
    terms = parse_pauli_sum(text)
    gates = expand_template(TemplateSpec(HWE, 2, 1),
                            np.linspace(-0.9, 1.2, 8))
    state_c = build_circuit(tuple(gates), [Measurement.state()], 2,
                            param_shape=0)
    psi = evaluate(compile(state_c))[0]
    dense = psi.conj() @ dense_matrix(terms) @ psi
    meas_c = build_circuit(tuple(gates), to_measurements(terms), 2,
                           param_shape=0)
    total = sum(evaluate(compile(meas_c)))
    assert total == pytest.approx(dense.real, abs=1e-10)
    assert abs(dense.imag) < 1e-10


def test_ground_energy_is_the_spectral_minimum():
    rng = np.random.default_rng(17)
    letters = "IXYZ"
    lines = ["%.6f %s" % (rng.uniform(-1, 1),
                          "".join(rng.choice(list(letters), 3)))
             for _ in range(6)]
    terms = parse_pauli_sum("\n".join(lines))
    h = dense_matrix(terms)
    assert np.allclose(h, h.conj().T, atol=1e-12)
    evals = np.linalg.eigvalsh(h)
    assert ground_energy(terms) == pytest.approx(evals[0], abs=1e-12)
    assert all(ground_energy(terms) <= e + 1e-12 for e in evals)


# -- MBL task ----------------------------------------------------------------

def test_mbl_zero_disorder_zero_time_keeps_neel():
    cfg = MBLTaskConfig(2, ergodic_range=(0.0, 0.0), t_evolve=0.0)
    sample = next(s for s in generate_mbl_dataset(cfg, 4, seed=1)
                  if s.label == 0)
    assert sample.disorder == (0.0, 0.0)
    c = build_circuit(sample.gates, [Measurement.state()], 2, param_shape=0)
    state = evaluate(compile(c))[0]
    neel = np.zeros(4)
    neel[0b01] = 1.0
    assert np.allclose(state, neel, atol=1e-12)


def test_evolution_unitarity():
    rng = np.random.default_rng(4)
    for _ in range(100):
        n = int(rng.integers(2, 5))
        cfg = MBLTaskConfig(n, g=float(rng.uniform(0.2, 2.0)))
        d = rng.uniform(-5, 5, size=n)
        u = evolution_unitary(chain_hamiltonian(cfg, d),
                              float(rng.uniform(0.0, 4.0)))
        assert np.allclose(u.conj().T @ u, np.eye(2 ** n), atol=1e-10)


def test_imbalance_definition():
    assert imbalance([1.0, -1.0, 1.0, -1.0]) == pytest.approx(4.0)
    assert imbalance([0.0, 0.0]) == 0.0


def test_imbalance_separates_the_classes():
    cfg = MBLTaskConfig(6)
    data = generate_mbl_dataset(cfg, 50, seed=0)
    meas = tuple(Measurement.expval("I" * q + "Z" + "I" * (5 - q))
                 for q in range(6))
    by_label = {0: [], 1: []}
    for s in data:
        c = build_circuit(s.gates, meas, 6, param_shape=0)
        by_label[s.label].append(imbalance(evaluate(compile(c))))
    erg = np.array(by_label[0])
    loc = np.array(by_label[1])
    assert len(erg) == len(loc) == 25
    pooled = np.sqrt((erg.std(ddof=1) ** 2 + loc.std(ddof=1) ** 2) / 2)
    assert loc.mean() - erg.mean() > 3 * pooled
    assert loc.mean() > erg.mean() + 2.0  # absolute gap, not just relative


def test_mbl_dataset_is_balanced_and_seeded():
    cfg = MBLTaskConfig(3)
    a = generate_mbl_dataset(cfg, 10, seed=7)
    b = generate_mbl_dataset(cfg, 10, seed=7)
    assert [s.label for s in a] == [s.label for s in b]
    assert [s.disorder for s in a] == [s.disorder for s in b]
    assert sum(s.label for s in a) == 5
    lo, hi = cfg.localized_range
    for s in a:
        if s.label:
            assert all(lo * cfg.g <= d <= hi * cfg.g for d in s.disorder)


def test_mbl_qubit_cap():
    with pytest.raises(TooManyQubitsForExactEvolution):
        generate_mbl_dataset(MBLTaskConfig(13), 2)


def test_mbl_config_validation():
    with pytest.raises(ValueError):
        MBLTaskConfig(1)
    with pytest.raises(ValueError):
        MBLTaskConfig(4, ergodic_range=(0.0, 6.0))  # overlaps localized
