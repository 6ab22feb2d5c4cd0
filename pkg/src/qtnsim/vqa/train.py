"""Benchmark training runs: multi-qubit rotation (MQR), Pauli-sum VQE, and
the MBL phase classifier.  Each task builds its circuits once, then loops
gradient evaluation and optimizer steps, recording a :class:`TrainingTrace`.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field

import numpy as np

from ..circuit import Measurement, build_circuit
from ..compiler import GradMethod, Mode, compile, evaluate
from ..errors import UnknownTask
from ..gradients import jacobian
from .hamiltonian import (ground_energy, load_pauli_sum, n_qubits_of,
                          to_measurements)
from .mbl import MBLTaskConfig, classifier_gates, generate_mbl_dataset
from .optimizers import Adam, GradientDescent
from .templates import TemplateKind, TemplateSpec, expand_template, \
    template_param_count

TASKS = ("mqr", "vqe", "mbl")


@dataclass
class TrainingTrace:
    task: str
    rows: list[tuple[int, float, float, float]]   # iter, loss, |grad|, ms
    final_params: np.ndarray
    extras: dict = field(default_factory=dict)

    @property
    def losses(self) -> list[float]:
        return [r[1] for r in self.rows]

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("iteration,loss,grad_norm,wall_ms\n")
        for it, loss, gnorm, ms in self.rows:
            out.write(f"{it},{loss:.12g},{gnorm:.12g},{ms:.3f}\n")
        return out.getvalue()


def _z_on(q: int, n: int) -> str:
    return "I" * q + "Z" + "I" * (n - 1 - q)


def _loop(task, params, loss_and_grad, optimizer, epochs, lr_decay,
          decay_after, callback) -> tuple[list, np.ndarray, bool]:
    """Shared descent loop.  ``loss_and_grad(params) -> (loss, grad)``;
    rows carry cumulative wall time.  ``lr_decay`` shrinks the learning rate
    geometrically once the iteration count passes ``decay_after`` (a cooldown
    needed to settle below oscillation floors).  The callback can cancel by
    returning False."""
    rows = []
    start = time.perf_counter()
    canceled = False
    for it in range(1, epochs + 1):
        loss, grad = loss_and_grad(params)
        params = optimizer.step(params, grad)
        if lr_decay is not None and it > decay_after:
            optimizer.lr *= lr_decay
        ms = (time.perf_counter() - start) * 1e3
        rows.append((it, float(loss), float(np.linalg.norm(grad)), ms))
        if callback is not None and callback(it, float(loss)) is False:
            canceled = True
            break
    return rows, params, canceled


def _train_mqr(n_qubits, depth, optimizer, grad_method, epochs, seed, mode,
               tn_options, callback) -> TrainingTrace:
    n = 4 if n_qubits is None else n_qubits
    depth = 1 if depth is None else depth
    spec = TemplateSpec(TemplateKind.HARDWARE_EFFICIENT, n, depth)
    p = template_param_count(spec)
    meas = [Measurement.expval(_z_on(q, n)) for q in range(n)]
    circuit = build_circuit(tuple(expand_template(spec)), tuple(meas), n,
                            param_shape=p)
    cc = compile(circuit, mode=mode, grad_method=grad_method,
                 tn_options=tn_options)

    def loss_and_grad(params):
        vals = evaluate(cc, params)
        jac = jacobian(cc, params)
        return sum(vals), jac.sum(axis=0)

    optimizer = optimizer or GradientDescent(lr=0.1)
    rng = np.random.default_rng(seed)
    params = rng.normal(0.0, 0.1, size=p)
    rows, params, canceled = _loop("mqr", params, loss_and_grad, optimizer,
                                   epochs or 500, None, 0, callback)
    extras = {"n_qubits": n, "depth": depth,
              "final_loss": float(sum(evaluate(cc, params))),
              "canceled": canceled}
    return TrainingTrace("mqr", rows, params, extras)


def _train_vqe(hamiltonian, depth, optimizer, grad_method, epochs, seed,
               mode, tn_options, lr_decay, decay_after,
               callback) -> TrainingTrace:
    terms = load_pauli_sum(hamiltonian) if isinstance(hamiltonian, str) \
        else list(hamiltonian)
    n = n_qubits_of(terms)
    depth = 3 if depth is None else depth
    spec = TemplateSpec(TemplateKind.HARDWARE_EFFICIENT, n, depth)
    p = template_param_count(spec)
    circuit = build_circuit(tuple(expand_template(spec)),
                            tuple(to_measurements(terms)), n, param_shape=p)
    cc = compile(circuit, mode=mode, grad_method=grad_method,
                 tn_options=tn_options)

    def loss_and_grad(params):
        vals = evaluate(cc, params)          # already coefficient-weighted
        jac = jacobian(cc, params)
        return sum(vals), jac.sum(axis=0)

    # full 0.2-rate travel phase, then a geometric cooldown to settle under
    # the Adam oscillation floor (tuned against exact diagonalization)
    optimizer = optimizer or Adam(lr=0.2)
    epochs = 700 if epochs is None else epochs
    if lr_decay is None:
        lr_decay = 0.95
    if decay_after is None:
        decay_after = (epochs * 5) // 7
    rng = np.random.default_rng(seed)
    params = rng.normal(0.0, 0.1, size=p)
    rows, params, canceled = _loop("vqe", params, loss_and_grad, optimizer,
                                   epochs, lr_decay, decay_after, callback)
    extras = {"n_qubits": n, "depth": depth,
              "reference_energy": ground_energy(terms),
              "final_energy": float(sum(evaluate(cc, params))),
              "canceled": canceled}
    return TrainingTrace("vqe", rows, params, extras)


def _train_mbl(mbl_config, n_qubits, optimizer, grad_method, epochs, seed,
               mode, tn_options, n_train, n_test, callback) -> TrainingTrace:
    cfg = mbl_config or MBLTaskConfig(6 if n_qubits is None else n_qubits)
    data = generate_mbl_dataset(cfg, n_train + n_test, seed=seed)
    train_set, test_set = data[:n_train], data[n_train:]
    cls_gates, p = classifier_gates(cfg)
    meas = (Measurement.expval(_z_on(0, cfg.n_qubits)),)

    def compiled(sample):
        circuit = build_circuit(sample.gates + cls_gates, meas, cfg.n_qubits,
                                param_shape=p)
        return compile(circuit, mode=mode, grad_method=grad_method,
                       tn_options=tn_options), sample.label

    train_cc = [compiled(s) for s in train_set]
    test_cc = [compiled(s) for s in test_set]
    eps = 1e-9

    def prob_one(cc, params):
        return (evaluate(cc, params)[0] + 1.0) / 2.0

    def loss_and_grad(params):
        total, grad = 0.0, np.zeros(p)
        for cc, label in train_cc:
            prob = np.clip(prob_one(cc, params), eps, 1.0 - eps)
            total -= np.log(prob) if label else np.log(1.0 - prob)
            # d(bce)/dz = (prob - label) / (prob (1 - prob)) * dprob/dz
            factor = (prob - label) / (prob * (1.0 - prob)) / 2.0
            grad += factor * jacobian(cc, params)[0]
        m = len(train_cc)
        return total / m, grad / m

    def accuracy(pairs, params):
        hits = sum((prob_one(cc, params) >= 0.5) == bool(label)
                   for cc, label in pairs)
        return hits / len(pairs)

    optimizer = optimizer or Adam(lr=0.1)
    rng = np.random.default_rng(seed)
    params = rng.normal(0.0, 0.1, size=p)
    rows, params, canceled = _loop("mbl", params, loss_and_grad, optimizer,
                                   epochs or 50, None, 0, callback)
    extras = {"n_qubits": cfg.n_qubits, "layers": cfg.layers,
              "train_accuracy": accuracy(train_cc, params),
              "test_accuracy": accuracy(test_cc, params),
              "canceled": canceled}
    return TrainingTrace("mbl", rows, params, extras)


def train(task: str, *, n_qubits: int | None = None, depth: int | None = None,
          optimizer=None, grad_method=GradMethod.ADJOINT, epochs=None,
          seed: int = 0, mode=Mode.STATEVECTOR, tn_options=None,
          hamiltonian=None, mbl_config: MBLTaskConfig | None = None,
          n_train: int = 40, n_test: int = 20, lr_decay: float | None = None,
          decay_after: int | None = None, callback=None) -> TrainingTrace:
    """Run one benchmark task to completion.

    ``callback(iteration, loss)`` fires once per iteration; returning False
    stops early (used by the HTTP training stream).  ``hamiltonian`` is a
    Pauli-sum file path or an iterable of PauliTerm (VQE only).
    """
    name = str(task).lower()
    if name == "mqr":
        return _train_mqr(n_qubits, depth, optimizer, grad_method, epochs,
                          seed, mode, tn_options, callback)
    if name == "vqe":
        if hamiltonian is None:
            raise UnknownTask("vqe requires a Pauli-sum hamiltonian")
        return _train_vqe(hamiltonian, depth, optimizer, grad_method, epochs,
                          seed, mode, tn_options, lr_decay, decay_after,
                          callback)
    if name == "mbl":
        return _train_mbl(mbl_config, n_qubits, optimizer, grad_method,
                          epochs, seed, mode, tn_options, n_train, n_test,
                          callback)
    raise UnknownTask(f"unknown task {task!r}; expected one of {TASKS}")
