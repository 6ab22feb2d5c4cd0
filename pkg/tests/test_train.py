"""The three benchmark training loops and their traces."""

from pathlib import Path

import numpy as np
import pytest

from qtnsim.compiler import Mode, TnOptions
from qtnsim.errors import UnknownTask
from qtnsim.vqa import (GradientDescent, MBLTaskConfig, ground_energy,
                        parse_pauli_sum, train)

H2_FILE = "examples_data/h2_4q.txt"
H2_GROUND = -1.851045678444864


def test_mqr_drives_all_spins_down():
    trace = train("mqr", seed=0)
    assert trace.task == "mqr"
    assert len(trace.rows) == 500
    assert trace.extras["final_loss"] < -3.96
    assert trace.extras["n_qubits"] == 4 and trace.extras["depth"] == 1


def test_mqr_descent_is_monotone_at_small_rate():
    trace = train("mqr", optimizer=GradientDescent(lr=0.05), epochs=120,
                  seed=0)
    losses = trace.losses
    drops = sum(losses[i + 1] <= losses[i] + 1e-12
                for i in range(len(losses) - 1))
    assert drops / (len(losses) - 1) >= 0.90


def test_vqe_single_qubit_reaches_minus_one():
    trace = train("vqe", hamiltonian=parse_pauli_sum("1.0 Z"), depth=0,
                  epochs=300, seed=0)
    assert trace.extras["reference_energy"] == pytest.approx(-1.0)
    assert trace.extras["final_energy"] == pytest.approx(-1.0, abs=1e-6)


def test_vqe_h2_matches_exact_diagonalization():
    terms = parse_pauli_sum(Path(H2_FILE).read_text())
    assert ground_energy(terms) == pytest.approx(H2_GROUND, abs=1e-12)
    trace = train("vqe", hamiltonian=H2_FILE, seed=0)
    assert trace.extras["reference_energy"] == pytest.approx(H2_GROUND,
                                                             abs=1e-12)
    assert abs(trace.extras["final_energy"] - H2_GROUND) < 1e-6


def test_trace_csv_format():
    trace = train("mqr", epochs=3, seed=1)
    lines = trace.to_csv().strip().splitlines()
    assert lines[0] == "iteration,loss,grad_norm,wall_ms"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[0] == "1"
    assert float(first[1]) == pytest.approx(trace.losses[0], rel=1e-9)
    assert float(first[3]) >= 0.0
    # wall clock column is cumulative
    times = [float(l.split(",")[3]) for l in lines[1:]]
    assert times == sorted(times)


def test_callback_sees_every_iteration_and_can_cancel():
    seen = []

    def watcher(it, loss):
        seen.append((it, loss))
        return it < 5

    trace = train("mqr", epochs=50, seed=0, callback=watcher)
    assert [it for it, _ in seen] == [1, 2, 3, 4, 5]
    assert len(trace.rows) == 5
    assert trace.extras["canceled"] is True
    assert [l for _, l in seen] == trace.losses


def test_losses_are_engine_agnostic():
    sv = train("mqr", n_qubits=3, epochs=12, seed=2)
    tn = train("mqr", n_qubits=3, epochs=12, seed=2,
               mode=Mode.TENSOR_NETWORK, tn_options=TnOptions(max_repeats=4))
    assert len(sv.losses) == len(tn.losses) == 12
    for a, b in zip(sv.losses, tn.losses):
        assert a == pytest.approx(b, abs=1e-7)
    assert np.allclose(sv.final_params, tn.final_params, atol=1e-7)


def test_mbl_smoke_run_records_accuracies():
    cfg = MBLTaskConfig(2, qnn_layers=1)
    trace = train("mbl", mbl_config=cfg, epochs=4, seed=3, n_train=6,
                  n_test=4)
    assert trace.task == "mbl"
    assert len(trace.rows) == 4
    assert 0.0 <= trace.extras["train_accuracy"] <= 1.0
    assert 0.0 <= trace.extras["test_accuracy"] <= 1.0
    assert trace.extras["layers"] == 1


def test_unknown_task_and_missing_hamiltonian():
    with pytest.raises(UnknownTask):
        train("qaoa")
    with pytest.raises(UnknownTask):
        train("vqe")
