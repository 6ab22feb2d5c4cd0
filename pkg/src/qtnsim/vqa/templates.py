"""Ansatz templates: expand a compact spec into a concrete gate list.

Parameter layout is layer-major and documented per template so flat vectors
reshape predictably.  Expansion emits ParamRef placeholders by default;
passing explicit values folds them in as literal angles.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from ..circuit import GateInstance, ParamRef
from ..errors import ParamCountMismatch
from ..gates import GateKind


class TemplateKind(Enum):
    RANDOM_LAYER = "random-layer"
    FULLY_CONNECTED = "fully-connected"
    HARDWARE_EFFICIENT = "hardware-efficient"


@dataclass(frozen=True)
class TemplateSpec:
    kind: TemplateKind
    n_qubits: int
    depth: int
    seed: int = 0          # RandomLayer draws
    ring: bool = False     # FullyConnected: neighbors only instead of all pairs

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")


def _random_draws(spec: TemplateSpec):
    """Deterministic gate draws for RandomLayer: n draws per layer over
    {RX, RY, RZ, CNOT} on random wires."""
    rng = random.Random(spec.seed)
    rotations = [GateKind.RX, GateKind.RY, GateKind.RZ]
    draws = []
    for _ in range(spec.depth * spec.n_qubits):
        pool = rotations + ([GateKind.CNOT] if spec.n_qubits >= 2 else [])
        kind = rng.choice(pool)
        if kind is GateKind.CNOT:
            draws.append((kind, tuple(rng.sample(range(spec.n_qubits), 2))))
        else:
            draws.append((kind, (rng.randrange(spec.n_qubits),)))
    return draws


def template_param_count(spec: TemplateSpec) -> int:
    n, d = spec.n_qubits, spec.depth
    if spec.kind is TemplateKind.HARDWARE_EFFICIENT:
        return 2 * n * (d + 1)
    if spec.kind is TemplateKind.FULLY_CONNECTED:
        pairs = n if spec.ring else n * (n - 1)
        return 2 * pairs * d if n > 1 else 0
    return sum(1 for kind, _ in _random_draws(spec) if kind is not GateKind.CNOT)


def expand_template(spec: TemplateSpec, params=None) -> list[GateInstance]:
    """Gate list for the template.  params=None emits ParamRef slots
    0..P-1 in layout order; an explicit vector folds literal angles."""
    expected = template_param_count(spec)
    if params is not None and len(params) != expected:
        raise ParamCountMismatch(
            f"{spec.kind.value} with n={spec.n_qubits}, depth={spec.depth} "
            f"takes {expected} parameters, got {len(params)}")

    slot = 0

    def angle():
        nonlocal slot
        p = ParamRef(slot) if params is None else float(params[slot])
        slot += 1
        return p

    n = spec.n_qubits
    gates: list[GateInstance] = []

    if spec.kind is TemplateKind.HARDWARE_EFFICIENT:
        # per layer: RY row then RZ row (matching a ((depth+1)*2, n) reshape),
        # then a ring of CNOTs between rotation layers
        for layer in range(spec.depth + 1):
            for q in range(n):
                gates.append(GateInstance(GateKind.RY, (q,), (angle(),)))
            for q in range(n):
                gates.append(GateInstance(GateKind.RZ, (q,), (angle(),)))
            if layer < spec.depth and n > 1:
                for i in range(n if n > 2 else 1):
                    gates.append(GateInstance(GateKind.CNOT, (i, (i + 1) % n), ()))
        return gates

    if spec.kind is TemplateKind.FULLY_CONNECTED:
        for _ in range(spec.depth):
            for i in range(n):
                offsets = (1,) if spec.ring else range(1, n)
                for k in offsets:
                    if n == 1:
                        continue
                    j = (i + k) % n
                    gates.append(GateInstance(GateKind.CNOT, (i, j), ()))
                    gates.append(GateInstance(GateKind.RY, (j,), (angle(),)))
                    gates.append(GateInstance(GateKind.RZ, (j,), (angle(),)))
        return gates

    for kind, qubits in _random_draws(spec):
        if kind is GateKind.CNOT:
            gates.append(GateInstance(kind, qubits, ()))
        else:
            gates.append(GateInstance(kind, qubits, (angle(),)))
    return gates
