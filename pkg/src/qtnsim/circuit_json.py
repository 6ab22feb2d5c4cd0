"""Circuit exchange format (JSON schema v1) and its parser/serializer.

The document layout is the wire contract shared with the CLI, the HTTP
service, and the browser composer:

    {"version": 1,
     "n_qubits": 2,
     "init_state": [[re, im], ...],              # optional
     "gates": [{"kind": "RY", "qubits": [1], "params": [{"slot": 0}]}],
     "measurements": [{"kind": "expval", "pauli": "IZ"},
                      {"kind": "probs", "qubits": [0, 1]},
                      {"kind": "state"}]}

All schema problems surface as :class:`SchemaViolation` carrying a JSON
pointer to the offending location.
"""

from __future__ import annotations

import json
import math

import jsonschema
import numpy as np

from . import gates as G
from .circuit import (
    Circuit,
    GateInstance,
    Measurement,
    ParamRef,
    PauliString,
    UnitaryGate,
    build_circuit,
)
from .errors import QtnError, SchemaViolation

_GATE_KINDS = [k.value for k in G.GateKind]

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "n_qubits", "gates", "measurements"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": 1},
        "n_qubits": {"type": "integer", "minimum": 1},
        "init_state": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "number"},
                "minItems": 2,
                "maxItems": 2,
            },
        },
        "gates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "qubits"],
                "additionalProperties": False,
                "properties": {
                    "kind": {"enum": _GATE_KINDS},
                    "qubits": {
                        "type": "array",
                        "items": {"type": "integer", "minimum": 0},
                        "minItems": 1,
                    },
                    "params": {
                        "type": "array",
                        "items": {
                            "oneOf": [
                                {"type": "number"},
                                {
                                    "type": "object",
                                    "required": ["slot"],
                                    "additionalProperties": False,
                                    "properties": {
                                        "slot": {"type": "integer", "minimum": 0}
                                    },
                                },
                            ]
                        },
                    },
                },
            },
        },
        "measurements": {
            "type": "array",
            "minItems": 1,
            "items": {
                "oneOf": [
                    {
                        "type": "object",
                        "required": ["kind", "pauli"],
                        "additionalProperties": False,
                        "properties": {
                            "kind": {"const": "expval"},
                            "pauli": {"type": "string", "pattern": "^[IXYZ]+$"},
                        },
                    },
                    {
                        "type": "object",
                        "required": ["kind", "qubits"],
                        "additionalProperties": False,
                        "properties": {
                            "kind": {"const": "probs"},
                            "qubits": {
                                "type": "array",
                                "items": {"type": "integer", "minimum": 0},
                                "minItems": 1,
                            },
                        },
                    },
                    {
                        "type": "object",
                        "required": ["kind"],
                        "additionalProperties": False,
                        "properties": {"kind": {"const": "state"}},
                    },
                ]
            },
        },
    },
}

_validator = jsonschema.Draft202012Validator(SCHEMA)


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else ""


def _check_structure(doc) -> None:
    errors = sorted(_validator.iter_errors(doc),
                    key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise SchemaViolation(_pointer(list(err.absolute_path)), err.message)


def _check_semantics(doc) -> None:
    n = doc["n_qubits"]
    for i, g in enumerate(doc["gates"]):
        kind = G.GateKind(g["kind"])
        qubits = g["qubits"]
        if len(set(qubits)) != len(qubits):
            raise SchemaViolation(f"/gates/{i}/qubits",
                                  f"qubits must be distinct, got {qubits}")
        if len(qubits) != G.arity(kind):
            raise SchemaViolation(
                f"/gates/{i}/qubits",
                f"{kind.value} acts on {G.arity(kind)} qubit(s), got {len(qubits)}")
        for q in qubits:
            if q >= n:
                raise SchemaViolation(f"/gates/{i}/qubits",
                                      f"qubit {q} outside 0..{n - 1}")
        params = g.get("params", [])
        if len(params) != G.param_count(kind):
            raise SchemaViolation(
                f"/gates/{i}/params",
                f"{kind.value} takes {G.param_count(kind)} parameter(s), "
                f"got {len(params)}")
    for i, m in enumerate(doc["measurements"]):
        if m["kind"] == "expval" and len(m["pauli"]) != n:
            raise SchemaViolation(f"/measurements/{i}/pauli",
                                  f"Pauli string length {len(m['pauli'])} != {n}")
        if m["kind"] == "probs":
            qs = m["qubits"]
            if len(set(qs)) != len(qs):
                raise SchemaViolation(f"/measurements/{i}/qubits",
                                      f"qubits must be distinct, got {qs}")
            for q in qs:
                if q >= n:
                    raise SchemaViolation(f"/measurements/{i}/qubits",
                                          f"qubit {q} outside 0..{n - 1}")
    state = doc.get("init_state")
    if state is not None:
        if len(state) != 2 ** n:
            raise SchemaViolation("/init_state",
                                  f"length {len(state)} != 2^{n}")
        norm = math.sqrt(sum(re * re + im * im for re, im in state))
        if abs(norm - 1.0) > 1e-12:
            raise SchemaViolation("/init_state", f"norm {norm!r} != 1")


def parse(doc) -> Circuit:
    """Build a validated Circuit from a parsed JSON document or a JSON string."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise SchemaViolation("", f"invalid JSON: {e}") from e
    _check_structure(doc)
    _check_semantics(doc)

    gates = []
    max_slot = -1
    for g in doc["gates"]:
        params: list[ParamRef | float] = []
        for p in g.get("params", []):
            if isinstance(p, dict):
                params.append(ParamRef(p["slot"]))
                max_slot = max(max_slot, p["slot"])
            else:
                params.append(float(p))
        gates.append(GateInstance(G.GateKind(g["kind"]), tuple(g["qubits"]),
                                  tuple(params)))
    measurements = []
    for m in doc["measurements"]:
        if m["kind"] == "expval":
            measurements.append(Measurement.expval(m["pauli"]))
        elif m["kind"] == "probs":
            measurements.append(Measurement.probs(m["qubits"]))
        else:
            measurements.append(Measurement.state())
    init_state = None
    if doc.get("init_state") is not None:
        init_state = np.array([complex(re, im) for re, im in doc["init_state"]])
    try:
        return build_circuit(gates, measurements, doc["n_qubits"],
                             param_shape=max_slot + 1, init_state=init_state)
    except QtnError as e:  # anything the pointer checks above did not cover
        raise SchemaViolation("", str(e)) from e


def serialize(circuit: Circuit) -> dict:
    """Emit the schema-v1 document for a circuit.

    Raises :class:`SchemaViolation` for circuits using features outside the
    exchange format (fixed-unitary gates, scaled or non-trainable parameter
    references, observable coefficients != 1).
    """
    gates = []
    for i, g in enumerate(circuit.gates):
        if isinstance(g, UnitaryGate):
            raise SchemaViolation(f"/gates/{i}",
                                  "fixed-unitary gates are not representable")
        entry: dict = {"kind": g.kind.value, "qubits": list(g.qubits)}
        params: list = []
        for p in g.params:
            if isinstance(p, ParamRef):
                if p.scale != 1.0 or not p.trainable:
                    raise SchemaViolation(
                        f"/gates/{i}/params",
                        "scaled or frozen parameter references are not representable")
                params.append({"slot": p.slot})
            else:
                params.append(float(p))
        if params:
            entry["params"] = params
        gates.append(entry)
    measurements = []
    for i, m in enumerate(circuit.measurements):
        if m.kind == "expval":
            assert m.pauli is not None
            if m.pauli.coefficient != 1.0:
                raise SchemaViolation(f"/measurements/{i}",
                                      "observable coefficients are not representable")
            measurements.append({"kind": "expval", "pauli": m.pauli.ops})
        elif m.kind == "probs":
            measurements.append({"kind": "probs", "qubits": list(m.qubits or ())})
        else:
            measurements.append({"kind": "state"})
    doc = {"version": 1, "n_qubits": circuit.n_qubits, "gates": gates,
           "measurements": measurements}
    if circuit.init_state is not None:
        doc["init_state"] = [[float(a.real), float(a.imag)]
                             for a in circuit.init_state]
    return doc


def result_payload(measurement: Measurement, value) -> dict:
    """JSON-safe form of one measurement result (shared by CLI and HTTP)."""
    if measurement.kind == "expval":
        return {"kind": "expval", "value": float(value)}
    if measurement.kind == "probs":
        return {"kind": "probs", "value": np.asarray(value).tolist()}
    arr = np.asarray(value)
    return {"kind": "state", "value": {"real": arr.real.tolist(),
                                       "imag": arr.imag.tolist()}}


def circuits_equal(a: Circuit, b: Circuit) -> bool:
    """Structural equality (used for round-trip checks)."""
    if (a.n_qubits, a.param_count, len(a.gates), len(a.measurements)) != \
       (b.n_qubits, b.param_count, len(b.gates), len(b.measurements)):
        return False
    if (a.init_state is None) != (b.init_state is None):
        return False
    if a.init_state is not None and not np.array_equal(a.init_state, b.init_state):
        return False
    for ga, gb in zip(a.gates, b.gates):
        if isinstance(ga, UnitaryGate) or isinstance(gb, UnitaryGate):
            if not (isinstance(ga, UnitaryGate) and isinstance(gb, UnitaryGate)):
                return False
            if ga.qubits != gb.qubits or not np.array_equal(ga.matrix, gb.matrix):
                return False
        elif ga != gb:
            return False
    return a.measurements == b.measurements
