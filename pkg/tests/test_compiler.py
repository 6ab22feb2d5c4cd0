"""Compilation, caching, and mode dispatch for repeated evaluation."""

import random

import numpy as np
import pytest

import qtnsim.compiler as compiler_mod
from helpers import hwe_circuit, random_circuit
from qtnsim.circuit import (GateInstance, Measurement, ParamRef,
                            build_circuit)
from qtnsim.compiler import (CompiledCircuit, GradMethod, Mode, TnOptions,
                             compile, evaluate, evaluate_with_stats)
from qtnsim.errors import ParamLengthMismatch, UnsupportedMeasurementForMode
from qtnsim.gates import GateKind

FAST = TnOptions(max_repeats=4)


def bell_probs_circuit():
    gates = [GateInstance(GateKind.H, (0,), ()),
             GateInstance(GateKind.CNOT, (0, 1), ())]
    return build_circuit(gates, [Measurement.probs((0, 1))], 2, param_shape=0)


def ry_expval(coefficient=1.0):
    gates = [GateInstance(GateKind.RY, (0,), (ParamRef(0),))]
    m = Measurement.expval("Z", coefficient=coefficient)
    return build_circuit(gates, [m], 1, param_shape=1)


def test_modes_accept_their_string_names():
    c = bell_probs_circuit()
    cc = compile(c, mode="statevector")
    assert cc.mode is Mode.STATEVECTOR
    cc = compile(c, mode="tensor-network", grad_method="adjoint",
                 tn_options=FAST)
    assert cc.mode is Mode.TENSOR_NETWORK
    assert cc.grad_method is GradMethod.ADJOINT
    with pytest.raises(ValueError):
        compile(c, mode="dense")
    with pytest.raises(ValueError):
        compile(c, grad_method="autograd")


def test_sv_cache_holds_constant_gates_only():
    gates = [GateInstance(GateKind.H, (0,), ()),
             GateInstance(GateKind.RX, (0,), (ParamRef(0),)),
             GateInstance(GateKind.CNOT, (0, 1), ())]
    c = build_circuit(gates, [Measurement.expval("ZI")], 2, param_shape=1)
    cc = compile(c)
    assert set(cc.sv_matrix_cache) == {0, 2}
    assert cc.sv_matrix_cache[0].shape == (2, 2)
    assert cc.sv_matrix_cache[2].shape == (4, 4)


def test_tn_mode_has_no_sv_cache_and_one_program_per_measurement():
    gates = [GateInstance(GateKind.H, (0,), ()),
             GateInstance(GateKind.CNOT, (0, 1), ())]
    ms = [Measurement.expval("ZI"), Measurement.expval("IZ"),
          Measurement.probs((1,))]
    c = build_circuit(gates, ms, 2, param_shape=0)
    cc = compile(c, mode=Mode.TENSOR_NETWORK, tn_options=FAST)
    assert cc.sv_matrix_cache == {}
    assert len(cc.programs) == 3
    assert cc.programs[0].root_axes() == ()
    assert len(cc.programs[2].root_axes()) == 1


def test_path_search_runs_once_across_evaluations():
    c = hwe_circuit(4, 2)
    cc = compile(c, mode=Mode.TENSOR_NETWORK, tn_options=FAST)
    assert cc.path_search_count.value == 1
    rng = np.random.default_rng(11)
    theta = rng.uniform(-np.pi, np.pi, size=cc.n_params)
    first = evaluate(cc, theta)
    for _ in range(24):
        again = evaluate(cc, theta)
        assert again == first  # cached plan, bit-identical replay
    assert cc.path_search_count.value == 1
    assert cc.eval_count.value == 25


def test_state_measurement_rejected_at_tn_compile():
    gates = [GateInstance(GateKind.H, (0,), ())]
    c = build_circuit(gates, [Measurement.state()], 1, param_shape=0)
    with pytest.raises(UnsupportedMeasurementForMode):
        compile(c, mode=Mode.TENSOR_NETWORK)
    out = evaluate(compile(c))[0]  # fine in state-vector mode
    assert np.allclose(out, np.array([1, 1]) / np.sqrt(2), atol=1e-12)


def test_probs_match_between_modes():
    rng = random.Random(202)
    for _ in range(5):
        n = rng.randint(2, 6)
        m = Measurement.probs(tuple(sorted(rng.sample(range(n),
                                                      rng.randint(1, 2)))))
        c, params = random_circuit(rng, n, 12, measurement=m)
        p_sv = evaluate(compile(c), params)[0]
        p_tn = evaluate(compile(c, mode=Mode.TENSOR_NETWORK,
                                tn_options=FAST), params)[0]
        assert p_sv.shape == p_tn.shape
        assert np.allclose(p_tn, p_sv, atol=1e-10)
        assert p_tn.sum() == pytest.approx(1.0, abs=1e-10)


def test_expval_coefficient_applied_in_both_modes():
    theta = 0.81
    for mode in (Mode.STATEVECTOR, Mode.TENSOR_NETWORK):
        plain = evaluate(compile(ry_expval(), mode=mode,
                                 tn_options=FAST), [theta])[0]
        scaled = evaluate(compile(ry_expval(-2.5), mode=mode,
                                  tn_options=FAST), [theta])[0]
        assert plain == pytest.approx(np.cos(theta), abs=1e-12)
        assert scaled == pytest.approx(-2.5 * np.cos(theta), abs=1e-12)


def test_param_length_checked():
    cc = compile(ry_expval())
    with pytest.raises(ParamLengthMismatch):
        evaluate(cc, [0.1, 0.2])
    with pytest.raises(ParamLengthMismatch):
        evaluate(cc)  # one slot, no values
    with pytest.raises(ParamLengthMismatch):
        evaluate(cc, np.zeros((1, 1)))


def test_evaluate_with_stats():
    c = hwe_circuit(3, 1)
    theta = np.linspace(0.1, 0.9, c.param_count)
    vals_sv, stats_sv = evaluate_with_stats(compile(c), theta)
    assert stats_sv == []
    cc = compile(c, mode=Mode.TENSOR_NETWORK, tn_options=FAST)
    vals_tn, stats_tn = evaluate_with_stats(cc, theta)
    assert len(stats_tn) == len(c.measurements)
    for s in stats_tn:
        assert set(s) == {"n_slices", "flops", "peak_elements"}
        assert s["n_slices"] >= 1 and s["flops"] > 0
    assert np.allclose(vals_tn, vals_sv, atol=1e-10)


def test_memory_cap_is_three_targets(monkeypatch):
    captured = []
    real = compiler_mod.execute_tree

    def spy(*args, **kwargs):
        captured.append(kwargs.get("memory_cap"))
        return real(*args, **kwargs)

    monkeypatch.setattr(compiler_mod, "execute_tree", spy)
    opts = TnOptions(target_size=2 ** 10, max_repeats=4)
    cc = compile(hwe_circuit(3, 1), mode=Mode.TENSOR_NETWORK, tn_options=opts)
    evaluate(cc, np.zeros(cc.n_params))
    assert captured and all(cap == 3 * 2 ** 10 for cap in captured)


def test_simplify_option_shrinks_network_but_not_values():
    c = hwe_circuit(4, 2)
    theta = np.linspace(-1.0, 1.0, c.param_count)
    plain = compile(c, mode=Mode.TENSOR_NETWORK, tn_options=FAST)
    slim = compile(c, mode=Mode.TENSOR_NETWORK,
                   tn_options=TnOptions(tn_simplify=True, max_repeats=4))
    assert len(slim.programs[0].net.nodes) < len(plain.programs[0].net.nodes)
    a = evaluate(plain, theta)
    b = evaluate(slim, theta)
    assert np.allclose(a, b, atol=1e-10)


def test_tn_options_fan_out_to_search_and_slicing():
    opts = TnOptions(target_size=64, repeats=9, target_num_slices=2,
                     max_repeats=7, max_time=3.5, search_parallel=2, seed=5)
    sc = opts.slicing_config()
    assert (sc.target_size, sc.repeats, sc.target_num_slices) == (64, 9, 2)
    pc = opts.partitioner_config()
    assert (pc.max_repeats, pc.max_time, pc.search_parallel, pc.seed) \
        == (7, 3.5, 2, 5)


def test_n_params_property():
    c, params = random_circuit(random.Random(7), 5, 20)
    cc = compile(c)
    assert cc.n_params == len(params) == c.param_count
