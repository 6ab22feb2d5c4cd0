"""Acceptance gate: one test per release criterion, tolerances pinned.

Run with ``pytest -v tests/test_acceptance.py`` to get one pass/fail line
per criterion; each test also prints a one-line summary with its measured
numbers (visible with ``-s`` or in the captured output).
"""

import random
import time

import numpy as np
import pytest

from helpers import (hwe_circuit, hypergraph_as_edge_dict, random_circuit,
                     random_hypergraph, random_leaf_tensors)
from oracles import audit_tree_flops, optimal_tree_flops
from qtnsim.circuit import (GateInstance, Measurement, ParamRef,
                            build_circuit)
from qtnsim.compiler import (GradMethod, Mode, TnOptions, compile, evaluate,
                             evaluate_with_stats)
from qtnsim.contraction import execute_tree
from qtnsim.errors import TooManyQubits, Unsliceable
from qtnsim.gates import GateKind
from qtnsim.gradients import jacobian
from qtnsim.pathopt import PartitionerConfig, build_tree, search
from qtnsim.slicing import SlicingConfig, greedy_slice
from qtnsim.vqa import (TemplateKind, TemplateSpec, expand_template,
                        ground_energy, load_pauli_sum, template_param_count,
                        train)

FAST_TN = TnOptions(max_repeats=4)


def report(name: str, detail: str) -> None:
    print(f"[criterion] {name}: PASS ({detail})")


def test_01_worked_example_exactness():
    gates = [GateInstance(GateKind.X, (0,), ()),
             GateInstance(GateKind.RY, (1,), (ParamRef(0),)),
             GateInstance(GateKind.CNOT, (0, 1), ())]
    circuit = build_circuit(gates, [Measurement.expval("IZ")], 2,
                            param_shape=1)
    start = time.perf_counter()
    worst = 0.0
    for mode in (Mode.STATEVECTOR, Mode.TENSOR_NETWORK):
        cc = compile(circuit, mode=mode)
        for theta in np.linspace(-np.pi, np.pi, 50):
            got = evaluate(cc, [theta])[0]
            want = np.sin(theta / 2) ** 2 - np.cos(theta / 2) ** 2
            worst = max(worst, abs(got - want))
    elapsed = time.perf_counter() - start
    assert worst < 1e-12
    assert elapsed < 1.0
    report("worked-example exactness",
           f"max |delta| {worst:.2e} over 50 angles x 2 engines, "
           f"{elapsed:.2f} s")


def test_02_cross_engine_agreement():
    rng = random.Random(20260814)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(300):
        n = rng.randint(2, 12)
        depth = rng.randint(1, 20)
        circuit, params = random_circuit(rng, n, depth)
        sv = evaluate(compile(circuit), params)
        tn = evaluate(compile(circuit, mode=Mode.TENSOR_NETWORK,
                              tn_options=FAST_TN), params)
        worst = max(worst, max(abs(a - b) for a, b in zip(sv, tn)))
    elapsed = time.perf_counter() - start
    assert worst < 1e-8
    assert elapsed < 300.0
    report("cross-engine agreement",
           f"300 circuits (n<=12, depth<=20), max |delta| {worst:.2e}, "
           f"{elapsed:.0f} s")


def test_03_gradient_triangle():
    rng = random.Random(7)
    start = time.perf_counter()
    worst_adjoint = worst_fd = 0.0
    done = 0
    while done < 200:
        n = rng.randint(1, 8)
        depth = rng.randint(2, 16)
        circuit, params = random_circuit(rng, n, depth,
                                         with_controlled_rot=False)
        if circuit.param_count == 0:
            continue
        done += 1
        adj = jacobian(compile(circuit, grad_method=GradMethod.ADJOINT),
                       params)
        shift = jacobian(compile(circuit,
                                 grad_method=GradMethod.PARAM_SHIFT), params)
        fd = jacobian(compile(circuit, grad_method=GradMethod.FINITE_DIFF),
                      params)
        worst_adjoint = max(worst_adjoint, float(np.max(np.abs(adj - shift))))
        worst_fd = max(worst_fd, float(np.max(np.abs(fd - shift))))
    elapsed = time.perf_counter() - start
    assert worst_adjoint < 1e-10
    assert worst_fd < 1e-5
    assert elapsed < 300.0
    report("gradient triangle",
           f"200 circuits, adjoint-vs-shift {worst_adjoint:.2e}, "
           f"fd-vs-shift {worst_fd:.2e}, {elapsed:.0f} s")


def test_04_slicing_sum_identity():
    rng = random.Random(999)
    checked = attempts = 0
    worst = 0.0
    while checked < 100:
        attempts += 1
        assert attempts < 1000, "corpus generation stalled"
        h = random_hypergraph(rng, max_nodes=12)
        tree = build_tree(h, PartitionerConfig(seed=attempts))
        if tree.max_size < 4:
            continue
        target = max(1, tree.max_size >> rng.randint(1, 4))
        try:
            plan = greedy_slice(tree, h, SlicingConfig(target_size=target),
                                seed=attempts)
        except Unsliceable:
            continue
        if not 1 <= len(plan.sliced_indices) <= 4:
            continue
        tensors = {v: (a / np.linalg.norm(a), False)
                   for v, a in random_leaf_tensors(rng, h).items()}
        full_tree = build_tree(h, PartitionerConfig(seed=attempts))
        full, _ = execute_tree(full_tree, h.leaf_indices, tensors, (),
                               h.dims())
        sliced, _ = execute_tree(plan.tree, h.leaf_indices, tensors,
                                 plan.sliced_indices, h.dims())
        worst = max(worst, float(np.max(np.abs(sliced - full))))
        # residual width never exceeds the slicing target
        assert plan.tree.max_size <= target
        checked += 1
    assert worst < 1e-10
    report("slicing sum identity",
           f"100 networks (<=12 nodes, 1-4 sliced indices), "
           f"max |delta| {worst:.2e}")


def test_05_path_quality_and_flops_audit():
    rng = random.Random(5150)
    within = total = 0
    for k in range(60):
        h = random_hypergraph(rng, max_nodes=8)
        tree = search(h, PartitionerConfig(max_repeats=128, seed=k))
        best = optimal_tree_flops(h.vertices, hypergraph_as_edge_dict(h),
                                  h.leaf_indices)
        total += 1
        if tree.total_flops <= 1.10 * best + 1e-9:
            within += 1
        # the audit recomputes p(2q-1) per pair from raw index sets
        assert audit_tree_flops(tree, h.dims()) == tree.total_flops
    assert within / total >= 0.95
    report("path quality",
           f"{within}/{total} searches within 1.10x of the exhaustive "
           f"optimum; flops audit exact on every pair")


def test_06_fifty_qubits_tensor_network_only():
    spec = TemplateSpec(TemplateKind.HARDWARE_EFFICIENT, 50, 2)
    p = template_param_count(spec)
    circuit = build_circuit(tuple(expand_template(spec)),
                            [Measurement.expval("Z" + "I" * 49)], 50,
                            param_shape=p)
    theta = np.random.default_rng(0).uniform(-np.pi, np.pi, p)
    start = time.perf_counter()
    cc = compile(circuit, mode=Mode.TENSOR_NETWORK,
                 tn_options=TnOptions(tn_simplify=True, max_repeats=4))
    values, stats = evaluate_with_stats(cc, theta)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    assert -1.0 <= values[0] <= 1.0
    assert all(s["peak_elements"] <= 2 ** 28 for s in stats)
    with pytest.raises(TooManyQubits):
        evaluate(compile(circuit, mode=Mode.STATEVECTOR), theta)
    report("50-qubit tensor network",
           f"<Z0> = {values[0]:+.6f} in {elapsed:.1f} s, peak "
           f"{max(s['peak_elements'] for s in stats)} elements; "
           f"state-vector mode refused")


def test_07_mqr_convergence():
    start = time.perf_counter()
    finals = [train("mqr", seed=s).extras["final_loss"] for s in range(5)]
    elapsed = time.perf_counter() - start
    converged = sum(f < -3.96 for f in finals)
    assert converged >= 4
    assert elapsed < 30.0
    report("MQR convergence",
           f"{converged}/5 seeds below -3.96 "
           f"(best {min(finals):.4f}), {elapsed:.1f} s")


def test_08_vqe_against_exact_diagonalization():
    terms = load_pauli_sum("examples_data/h2_4q.txt")
    reference = ground_energy(terms)
    start = time.perf_counter()
    gaps = []
    for s in range(5):
        trace = train("vqe", hamiltonian=terms, seed=s)
        gaps.append(abs(trace.extras["final_energy"] - reference))
    elapsed = time.perf_counter() - start
    converged = sum(g < 1e-6 for g in gaps)
    assert converged >= 4
    assert elapsed < 60.0
    report("VQE correctness",
           f"{converged}/5 seeds within 1e-6 of {reference:.12f} "
           f"(worst gap {max(gaps):.1e}), {elapsed:.0f} s")


def test_09_mbl_classification():
    start = time.perf_counter()
    accuracies = [train("mbl", seed=s).extras["test_accuracy"]
                  for s in range(5)]
    elapsed = time.perf_counter() - start
    passed = sum(a >= 0.80 for a in accuracies)
    assert passed >= 4
    assert elapsed < 600.0
    report("MBL classification",
           f"{passed}/5 seeds reach 80% held-out accuracy "
           f"(accuracies {accuracies}), {elapsed:.0f} s")


def test_10_compile_once_evaluate_many():
    circuit = hwe_circuit(20, 2)
    theta = np.random.default_rng(1).uniform(-np.pi, np.pi,
                                             circuit.param_count)
    start = time.perf_counter()
    cc = compile(circuit, mode=Mode.TENSOR_NETWORK,
                 tn_options=TnOptions(max_repeats=16))
    first = evaluate(cc, theta)
    t_first = time.perf_counter() - start
    t1 = time.perf_counter()
    for _ in range(999):
        again = evaluate(cc, theta)
    t_later = (time.perf_counter() - t1) / 999
    assert again == first
    assert cc.path_search_count.value == 1
    assert cc.eval_count.value == 1000
    assert t_later < 0.10 * t_first
    report("compile-once reuse",
           f"1000 evaluations, 1 path search; per-eval {t_later*1e3:.1f} ms "
           f"vs first (incl. search) {t_first*1e3:.0f} ms "
           f"({100*t_later/t_first:.1f}%)")
