// Composer document model: a column grid of placed gates plus the
// measurement list. Pure data + pure update functions; every UI
// interaction goes through these so invalid edits are impossible to
// express. Serializes to circuit JSON v1 (the wire format shared with
// the CLI and the HTTP service) without loss.

export type GateInfo = { kind: string; arity: number; param_count: number };

export type ParamValue =
  | { kind: "literal"; value: number }
  | { kind: "slot"; slot: number };

export type PlacedGate = {
  id: string;
  kind: string;
  column: number;
  /** Qubits in role order (e.g. control first for CNOT/CR*). */
  qubits: number[];
  params: ParamValue[];
};

export type Measurement =
  | { kind: "expval"; pauli: string }
  | { kind: "probs"; qubits: number[] }
  | { kind: "state" };

export type ComposerDocument = {
  nQubits: number;
  nColumns: number;
  gates: PlacedGate[];
  measurements: Measurement[];
  /** Optional amplitudes carried through import/export untouched. */
  initState?: [number, number][];
  selectedId: string | null;
};

export class ImportError extends Error {
  pointer: string;
  constructor(pointer: string, message: string) {
    super(message);
    this.pointer = pointer;
  }
}

let seq = 0;
const freshId = () => `g${seq++}`;

export const MIN_COLUMNS = 8;

export function emptyDocument(nQubits: number, nColumns = MIN_COLUMNS): ComposerDocument {
  return {
    nQubits,
    nColumns,
    gates: [],
    measurements: [{ kind: "probs", qubits: range(nQubits) }],
    selectedId: null,
  };
}

function range(n: number): number[] {
  return Array.from({ length: n }, (_, i) => i);
}

/** Rows covered by a gate: the full vertical span, connector included. */
export function spanOf(gate: { qubits: number[] }): number[] {
  const lo = Math.min(...gate.qubits);
  const hi = Math.max(...gate.qubits);
  const rows = [];
  for (let q = lo; q <= hi; q++) rows.push(q);
  return rows;
}

export function gateAt(doc: ComposerDocument, column: number, qubit: number): PlacedGate | null {
  for (const g of doc.gates) {
    if (g.column === column && spanOf(g).includes(qubit)) return g;
  }
  return null;
}

export type PlacementProblem =
  | { reason: "out-of-range"; qubit: number }
  | { reason: "duplicate-qubits" }
  | { reason: "occupied"; column: number; qubit: number }
  | null;

/**
 * Check a prospective placement. `ignoreId` excludes the gate being
 * moved from the occupancy scan so a gate can be dropped back on (or
 * near) itself.
 */
export function placementProblem(
  doc: ComposerDocument,
  gate: { column: number; qubits: number[] },
  ignoreId?: string,
): PlacementProblem {
  if (gate.column < 0) return { reason: "out-of-range", qubit: -1 };
  for (const q of gate.qubits) {
    if (q < 0 || q >= doc.nQubits) return { reason: "out-of-range", qubit: q };
  }
  if (new Set(gate.qubits).size !== gate.qubits.length) return { reason: "duplicate-qubits" };
  for (const q of spanOf(gate)) {
    const hit = gateAt(doc, gate.column, q);
    if (hit && hit.id !== ignoreId) return { reason: "occupied", column: gate.column, qubit: q };
  }
  return null;
}

function defaultParams(info: GateInfo): ParamValue[] {
  return Array.from({ length: info.param_count }, () => ({ kind: "literal" as const, value: 0 }));
}

/** Place a palette gate; null when the drop is invalid (document unchanged). */
export function addGate(
  doc: ComposerDocument,
  info: GateInfo,
  column: number,
  qubit: number,
): ComposerDocument | null {
  const qubits = range(info.arity).map((i) => qubit + i);
  if (placementProblem(doc, { column, qubits })) return null;
  const gate: PlacedGate = { id: freshId(), kind: info.kind, column, qubits, params: defaultParams(info) };
  return withColumns({ ...doc, gates: [...doc.gates, gate], selectedId: gate.id });
}

/** Move an existing gate; null when the target cells are unusable. */
export function moveGate(
  doc: ComposerDocument,
  id: string,
  column: number,
  qubit: number,
): ComposerDocument | null {
  const gate = doc.gates.find((g) => g.id === id);
  if (!gate) return null;
  const base = Math.min(...gate.qubits);
  const qubits = gate.qubits.map((q) => q - base + qubit);
  if (placementProblem(doc, { column, qubits }, id)) return null;
  const moved = { ...gate, column, qubits };
  return withColumns({
    ...doc,
    gates: doc.gates.map((g) => (g.id === id ? moved : g)),
    selectedId: id,
  });
}

export function removeGate(doc: ComposerDocument, id: string): ComposerDocument {
  return {
    ...doc,
    gates: doc.gates.filter((g) => g.id !== id),
    selectedId: doc.selectedId === id ? null : doc.selectedId,
  };
}

/** Swap role order (e.g. control/target) of a two-qubit gate in place. */
export function flipGate(doc: ComposerDocument, id: string): ComposerDocument {
  return {
    ...doc,
    gates: doc.gates.map((g) =>
      g.id === id && g.qubits.length > 1 ? { ...g, qubits: [...g.qubits].reverse() } : g,
    ),
  };
}

export function setParam(
  doc: ComposerDocument,
  id: string,
  index: number,
  value: ParamValue,
): ComposerDocument {
  return {
    ...doc,
    gates: doc.gates.map((g) =>
      g.id === id ? { ...g, params: g.params.map((p, i) => (i === index ? value : p)) } : g,
    ),
  };
}

export function select(doc: ComposerDocument, id: string | null): ComposerDocument {
  return { ...doc, selectedId: id };
}

/** Grow (never shrink below content or MIN_COLUMNS) the grid width. */
function withColumns(doc: ComposerDocument): ComposerDocument {
  const used = doc.gates.reduce((m, g) => Math.max(m, g.column + 1), 0);
  return { ...doc, nColumns: Math.max(MIN_COLUMNS, used + 1) };
}

export function setQubitCount(doc: ComposerDocument, n: number): ComposerDocument | null {
  if (n < 1) return null;
  for (const g of doc.gates) {
    if (Math.max(...g.qubits) >= n) return null;
  }
  const measurements = doc.measurements
    .map((m) => {
      if (m.kind === "probs") {
        const qs = m.qubits.filter((q) => q < n);
        return qs.length ? { kind: "probs" as const, qubits: qs } : null;
      }
      if (m.kind === "expval") {
        return { kind: "expval" as const, pauli: m.pauli.slice(0, n).padEnd(n, "I") };
      }
      return m;
    })
    .filter((m): m is Measurement => m !== null);
  return {
    ...doc,
    nQubits: n,
    initState: undefined,
    measurements: measurements.length ? measurements : [{ kind: "probs", qubits: range(n) }],
  };
}

export function setMeasurements(doc: ComposerDocument, measurements: Measurement[]): ComposerDocument {
  return { ...doc, measurements };
}

/** Number of trainable slots referenced by the document (max slot + 1). */
export function slotCount(doc: ComposerDocument): number {
  let hi = -1;
  for (const g of doc.gates) {
    for (const p of g.params) {
      if (p.kind === "slot") hi = Math.max(hi, p.slot);
    }
  }
  return hi + 1;
}

/** Call order: column by column, top row first inside a column. */
export function callOrder(doc: ComposerDocument): PlacedGate[] {
  return [...doc.gates].sort(
    (a, b) => a.column - b.column || Math.min(...a.qubits) - Math.min(...b.qubits),
  );
}

export type CircuitJson = {
  version: 1;
  n_qubits: number;
  init_state?: [number, number][];
  gates: { kind: string; qubits: number[]; params?: (number | { slot: number })[] }[];
  measurements: Measurement[];
};

export function toCircuitJson(doc: ComposerDocument): CircuitJson {
  const gates = callOrder(doc).map((g) => {
    const out: CircuitJson["gates"][number] = { kind: g.kind, qubits: [...g.qubits] };
    if (g.params.length) {
      out.params = g.params.map((p) => (p.kind === "literal" ? p.value : { slot: p.slot }));
    }
    return out;
  });
  const json: CircuitJson = {
    version: 1,
    n_qubits: doc.nQubits,
    gates,
    measurements: doc.measurements.map((m) => ({ ...m })),
  };
  if (doc.initState) json.init_state = doc.initState.map((a) => [...a] as [number, number]);
  return json;
}

function asPointer(parts: (string | number)[]): string {
  return "/" + parts.join("/");
}

/**
 * Rebuild a document from circuit JSON. Layout is recomputed by packing
 * each gate into the leftmost column that keeps its rows free, so call
 * order is preserved exactly while editing gaps collapse. Structural
 * problems raise ImportError with a JSON pointer; anything the palette
 * cannot confirm locally is left to the service validator.
 */
export function fromCircuitJson(raw: unknown, palette: GateInfo[]): ComposerDocument {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    throw new ImportError("", "expected a JSON object");
  }
  const doc = raw as Record<string, unknown>;
  if (doc.version !== 1) throw new ImportError("/version", "unsupported version, expected 1");
  const n = doc.n_qubits;
  if (typeof n !== "number" || !Number.isInteger(n) || n < 1) {
    throw new ImportError("/n_qubits", "n_qubits must be a positive integer");
  }
  if (!Array.isArray(doc.gates)) throw new ImportError("/gates", "gates must be an array");
  if (!Array.isArray(doc.measurements) || doc.measurements.length === 0) {
    throw new ImportError("/measurements", "at least one measurement is required");
  }

  const byKind = new Map(palette.map((g) => [g.kind, g]));
  const nextFree = new Array<number>(n).fill(0);
  const placed: PlacedGate[] = [];

  doc.gates.forEach((entry, i) => {
    if (typeof entry !== "object" || entry === null) {
      throw new ImportError(asPointer(["gates", i]), "gate must be an object");
    }
    const g = entry as Record<string, unknown>;
    const info = byKind.get(g.kind as string);
    if (!info) throw new ImportError(asPointer(["gates", i, "kind"]), `unknown gate kind ${JSON.stringify(g.kind)}`);
    const qubits = g.qubits;
    if (!Array.isArray(qubits) || qubits.some((q) => !Number.isInteger(q))) {
      throw new ImportError(asPointer(["gates", i, "qubits"]), "qubits must be a list of integers");
    }
    if (qubits.length !== info.arity) {
      throw new ImportError(
        asPointer(["gates", i, "qubits"]),
        `${info.kind} acts on ${info.arity} qubit(s), got ${qubits.length}`,
      );
    }
    if (new Set(qubits).size !== qubits.length) {
      throw new ImportError(asPointer(["gates", i, "qubits"]), "qubits must be distinct");
    }
    for (const q of qubits as number[]) {
      if (q < 0 || q >= n) throw new ImportError(asPointer(["gates", i, "qubits"]), `qubit ${q} outside 0..${n - 1}`);
    }
    const rawParams = (g.params ?? []) as unknown[];
    if (!Array.isArray(rawParams) || rawParams.length !== info.param_count) {
      throw new ImportError(
        asPointer(["gates", i, "params"]),
        `${info.kind} takes ${info.param_count} parameter(s), got ${Array.isArray(rawParams) ? rawParams.length : "none"}`,
      );
    }
    const params: ParamValue[] = rawParams.map((p, j) => {
      if (typeof p === "number") return { kind: "literal", value: p };
      if (typeof p === "object" && p !== null && Number.isInteger((p as { slot?: unknown }).slot)) {
        return { kind: "slot", slot: (p as { slot: number }).slot };
      }
      throw new ImportError(asPointer(["gates", i, "params", j]), "parameter must be a number or {slot}");
    });

    const lo = Math.min(...(qubits as number[]));
    const hi = Math.max(...(qubits as number[]));
    let column = 0;
    for (let q = lo; q <= hi; q++) column = Math.max(column, nextFree[q]!);
    for (let q = lo; q <= hi; q++) nextFree[q] = column + 1;
    placed.push({ id: freshId(), kind: info.kind, column, qubits: [...(qubits as number[])], params });
  });

  const measurements = doc.measurements.map((m, i) => parseMeasurement(m, i, n));
  const out: ComposerDocument = {
    nQubits: n,
    nColumns: MIN_COLUMNS,
    gates: placed,
    measurements,
    selectedId: null,
  };
  if (doc.init_state !== undefined) {
    const st = doc.init_state;
    if (!Array.isArray(st) || st.some((a) => !Array.isArray(a) || a.length !== 2)) {
      throw new ImportError("/init_state", "init_state must be a list of [re, im] pairs");
    }
    out.initState = (st as [number, number][]).map((a) => [a[0], a[1]]);
  }
  return withColumns(out);
}

function parseMeasurement(raw: unknown, i: number, n: number): Measurement {
  if (typeof raw !== "object" || raw === null) {
    throw new ImportError(asPointer(["measurements", i]), "measurement must be an object");
  }
  const m = raw as Record<string, unknown>;
  if (m.kind === "state") return { kind: "state" };
  if (m.kind === "expval") {
    if (typeof m.pauli !== "string" || !/^[IXYZ]+$/.test(m.pauli)) {
      throw new ImportError(asPointer(["measurements", i, "pauli"]), "pauli must match [IXYZ]+");
    }
    if (m.pauli.length !== n) {
      throw new ImportError(asPointer(["measurements", i, "pauli"]), `Pauli string length ${m.pauli.length} != ${n}`);
    }
    return { kind: "expval", pauli: m.pauli };
  }
  if (m.kind === "probs") {
    const qs = m.qubits;
    if (!Array.isArray(qs) || qs.length === 0 || qs.some((q) => !Number.isInteger(q) || q < 0 || q >= n)) {
      throw new ImportError(asPointer(["measurements", i, "qubits"]), `qubits must be distinct integers in 0..${n - 1}`);
    }
    if (new Set(qs).size !== qs.length) {
      throw new ImportError(asPointer(["measurements", i, "qubits"]), "qubits must be distinct");
    }
    return { kind: "probs", qubits: [...(qs as number[])] };
  }
  throw new ImportError(asPointer(["measurements", i, "kind"]), `unknown measurement kind ${JSON.stringify(m.kind)}`);
}

export function paramLabel(p: ParamValue): string {
  return p.kind === "slot" ? `p${p.slot}` : trimNumber(p.value);
}

function trimNumber(x: number): string {
  const s = String(x);
  return s.length <= 8 ? s : x.toPrecision(6);
}

/** Plain-text listing of the circuit in call order, measurements last. */
export function definitionText(doc: ComposerDocument): string {
  const lines: string[] = [];
  callOrder(doc).forEach((g, i) => {
    const args = g.params.length ? `(${g.params.map(paramLabel).join(", ")})` : "";
    lines.push(`${i + 1}. ${g.kind}${args} q${g.qubits.join(", q")}`);
  });
  if (!doc.gates.length) lines.push("(no gates)");
  for (const m of doc.measurements) {
    if (m.kind === "expval") lines.push(`measure expval ${m.pauli}`);
    else if (m.kind === "probs") lines.push(`measure probs q${m.qubits.join(", q")}`);
    else lines.push("measure state");
  }
  return lines.join("\n");
}

/** "p3" or a numeric literal; null when the text parses as neither. */
export function parseParamInput(text: string): ParamValue | null {
  const t = text.trim();
  const slot = /^p(\d+)$/.exec(t);
  if (slot) return { kind: "slot", slot: Number(slot[1]) };
  if (t === "") return null;
  const v = Number(t);
  return Number.isFinite(v) ? { kind: "literal", value: v } : null;
}
