// Shared test fixtures: a canned copy of the service gate palette for
// offline model/UI tests (integration tests fetch the live one), a tiny
// deterministic PRNG, and a couple of ready-made circuit documents.

import type { CircuitJson, GateInfo } from "../src/document.js";

export const PALETTE: GateInfo[] = [
  { kind: "I", arity: 1, param_count: 0 },
  { kind: "X", arity: 1, param_count: 0 },
  { kind: "Y", arity: 1, param_count: 0 },
  { kind: "Z", arity: 1, param_count: 0 },
  { kind: "H", arity: 1, param_count: 0 },
  { kind: "S", arity: 1, param_count: 0 },
  { kind: "T", arity: 1, param_count: 0 },
  { kind: "RX", arity: 1, param_count: 1 },
  { kind: "RY", arity: 1, param_count: 1 },
  { kind: "RZ", arity: 1, param_count: 1 },
  { kind: "Rot", arity: 1, param_count: 3 },
  { kind: "PhaseShift", arity: 1, param_count: 1 },
  { kind: "CNOT", arity: 2, param_count: 0 },
  { kind: "CZ", arity: 2, param_count: 0 },
  { kind: "SWAP", arity: 2, param_count: 0 },
  { kind: "CRX", arity: 2, param_count: 1 },
  { kind: "CRY", arity: 2, param_count: 1 },
  { kind: "CRZ", arity: 2, param_count: 1 },
];

/** mulberry32: small seeded PRNG so property tests are reproducible. */
export function prng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export const BELL_JSON: CircuitJson = {
  version: 1,
  n_qubits: 2,
  gates: [
    { kind: "H", qubits: [0] },
    { kind: "CNOT", qubits: [0, 1] },
  ],
  measurements: [{ kind: "probs", qubits: [0, 1] }],
};

/** X, a slotted RY, then CNOT, measured as a single Z expectation. */
export const ROTATION_JSON: CircuitJson = {
  version: 1,
  n_qubits: 2,
  gates: [
    { kind: "X", qubits: [0] },
    { kind: "RY", qubits: [1], params: [{ slot: 0 }] },
    { kind: "CNOT", qubits: [0, 1] },
  ],
  measurements: [{ kind: "expval", pauli: "IZ" }],
};

/** Entangler plus a three-angle rotation, read out as the full state. */
export const STATE_READOUT_JSON: CircuitJson = {
  version: 1,
  n_qubits: 2,
  gates: [
    { kind: "H", qubits: [0] },
    { kind: "CNOT", qubits: [0, 1] },
    { kind: "Rot", qubits: [1], params: [0.4, 0.5, 0.6] },
  ],
  measurements: [{ kind: "state" }],
};
