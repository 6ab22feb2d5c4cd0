// Action layer between the UI widgets and the store/API. Widgets call
// these methods; the controller enforces the document invariants, keeps
// failures non-destructive, and owns the background validation cycle.

import { ApiClient, ApiError } from "./api.js";
import type { LossEvent, TerminalEvent } from "./api.js";
import {
  ComposerDocument,
  ImportError,
  Measurement,
  ParamValue,
  addGate,
  flipGate,
  fromCircuitJson,
  moveGate,
  removeGate,
  select,
  setMeasurements,
  setParam,
  setQubitCount,
  slotCount,
  toCircuitJson,
} from "./document.js";
import type { AppStore } from "./store.js";

const VALIDATE_DEBOUNCE_MS = 150;

export class AppController {
  readonly store: AppStore;
  readonly api: ApiClient;
  private validateTimer: ReturnType<typeof setTimeout> | null = null;
  private validateEpoch = 0;

  constructor(store: AppStore, api: ApiClient) {
    this.store = store;
    this.api = api;
  }

  async loadPalette(): Promise<void> {
    try {
      const palette = await this.api.gates();
      this.store.update((s) => ({ ...s, palette, netError: null }));
    } catch (e) {
      this.store.update((s) => ({ ...s, netError: describe(e) }));
    }
  }

  private applyDoc(next: ComposerDocument | null, failCue: string): boolean {
    if (next === null) {
      this.store.update((s) => ({ ...s, dropCue: failCue }));
      return false;
    }
    this.store.update((s) => ({ ...s, doc: next, dropCue: null, importError: null }));
    this.scheduleValidation();
    return true;
  }

  tryAddGate(kind: string, column: number, qubit: number): boolean {
    const s = this.store.get();
    const info = s.palette.find((g) => g.kind === kind);
    if (!info) return false;
    return this.applyDoc(
      addGate(s.doc, info, column, qubit),
      `cannot place ${kind} at column ${column}, qubit ${qubit}`,
    );
  }

  tryMoveGate(id: string, column: number, qubit: number): boolean {
    const s = this.store.get();
    return this.applyDoc(
      moveGate(s.doc, id, column, qubit),
      `cannot move gate to column ${column}, qubit ${qubit}`,
    );
  }

  deleteGate(id: string): void {
    this.applyDoc(removeGate(this.store.get().doc, id), "");
  }

  flip(id: string): void {
    this.applyDoc(flipGate(this.store.get().doc, id), "");
  }

  selectGate(id: string | null): void {
    this.store.update((s) => ({ ...s, doc: select(s.doc, id) }));
  }

  setGateParam(id: string, index: number, value: ParamValue): void {
    this.applyDoc(setParam(this.store.get().doc, id, index, value), "");
  }

  setQubits(n: number): boolean {
    return this.applyDoc(
      setQubitCount(this.store.get().doc, n),
      `cannot shrink to ${n} qubit(s): gates in the way`,
    );
  }

  replaceMeasurements(measurements: Measurement[]): void {
    this.applyDoc(setMeasurements(this.store.get().doc, measurements), "");
  }

  setRunParamsText(text: string): void {
    this.store.update((s) => ({ ...s, runParamsText: text }));
  }

  setRunMode(mode: "statevector" | "tensor-network"): void {
    this.store.update((s) => ({ ...s, runMode: mode }));
  }

  private scheduleValidation(): void {
    if (this.validateTimer) clearTimeout(this.validateTimer);
    this.validateTimer = setTimeout(() => void this.validateNow(), VALIDATE_DEBOUNCE_MS);
  }

  /** Immediate round trip to the service validator. */
  async validateNow(): Promise<void> {
    if (this.validateTimer) {
      clearTimeout(this.validateTimer);
      this.validateTimer = null;
    }
    const epoch = ++this.validateEpoch;
    const doc = this.store.get().doc;
    try {
      const report = await this.api.validate(toCircuitJson(doc));
      if (epoch !== this.validateEpoch) return;
      this.store.update((s) => ({ ...s, validation: report, netError: null }));
    } catch (e) {
      if (epoch !== this.validateEpoch) return;
      this.store.update((s) => ({ ...s, netError: describe(e) }));
    }
  }

  /** Parse the slot-value text box; null plus an error cue on bad input. */
  private parseRunParams(): number[] | null {
    const s = this.store.get();
    const needed = slotCount(s.doc);
    const text = s.runParamsText.trim();
    const values = text === "" ? [] : text.split(/[\s,]+/).map(Number);
    if (values.length !== needed || values.some((v) => !Number.isFinite(v))) {
      this.store.update((st) => ({
        ...st,
        simulation: {
          status: "error",
          message: `expected ${needed} parameter value(s), got "${text}"`,
        },
      }));
      return null;
    }
    return values;
  }

  async runSimulation(): Promise<void> {
    const params = this.parseRunParams();
    if (params === null) return;
    const s = this.store.get();
    const measurements = s.doc.measurements.map((m) => ({ ...m }));
    this.store.update((st) => ({ ...st, simulation: { status: "running" } }));
    try {
      const resp = await this.api.simulate({
        circuit: toCircuitJson(s.doc),
        ...(params.length ? { params } : {}),
        mode: s.runMode,
      });
      this.store.update((st) => ({
        ...st,
        netError: null,
        simulation: {
          status: "done",
          mode: resp.mode,
          results: resp.results,
          measurements,
          wallMs: resp.wall_ms,
        },
      }));
    } catch (e) {
      const out =
        e instanceof ApiError
          ? { status: "error" as const, message: e.message, ...(e.pointer ? { pointer: e.pointer } : {}) }
          : { status: "error" as const, message: describe(e) };
      this.store.update((st) => ({ ...st, simulation: out }));
    }
  }

  async startTraining(task: string, options: Record<string, unknown>): Promise<void> {
    this.store.update((s) => ({
      ...s,
      training: { status: "starting", task, jobId: null, losses: [], extras: null, message: null },
    }));
    let jobId: string;
    try {
      ({ job_id: jobId } = await this.api.startTraining(task, options));
    } catch (e) {
      this.store.update((s) => ({
        ...s,
        training: { ...s.training, status: "error", message: describe(e) },
      }));
      return;
    }
    this.store.update((s) => ({
      ...s,
      training: { ...s.training, status: "streaming", jobId },
    }));
    try {
      const terminal = await this.api.streamEvents(jobId, (e) => this.pushLoss(e));
      this.finishTraining(terminal);
    } catch (e) {
      this.store.update((s) => ({
        ...s,
        training: { ...s.training, status: "error", message: describe(e) },
      }));
    }
  }

  private pushLoss(e: LossEvent): void {
    this.store.update((s) => ({
      ...s,
      training: { ...s.training, losses: [...s.training.losses, e] },
    }));
  }

  private finishTraining(terminal: TerminalEvent): void {
    this.store.update((s) => ({
      ...s,
      training: {
        ...s.training,
        status: terminal.status,
        extras: terminal.extras ?? null,
        message: terminal.message ?? null,
      },
    }));
  }

  async cancelTraining(): Promise<void> {
    const id = this.store.get().training.jobId;
    if (!id) return;
    try {
      await this.api.cancelTraining(id);
    } catch (e) {
      this.store.update((s) => ({ ...s, netError: describe(e) }));
    }
  }

  exportJson(): string {
    return JSON.stringify(toCircuitJson(this.store.get().doc), null, 2);
  }

  importJson(text: string): boolean {
    let raw: unknown;
    try {
      raw = JSON.parse(text);
    } catch (e) {
      this.store.update((s) => ({
        ...s,
        importError: { pointer: "", message: `invalid JSON: ${(e as Error).message}` },
      }));
      return false;
    }
    try {
      const doc = fromCircuitJson(raw, this.store.get().palette);
      this.store.update((s) => ({ ...s, doc, importError: null, dropCue: null }));
      this.scheduleValidation();
      return true;
    } catch (e) {
      if (e instanceof ImportError) {
        const { pointer, message } = e;
        this.store.update((s) => ({ ...s, importError: { pointer, message } }));
        return false;
      }
      throw e;
    }
  }
}

function describe(e: unknown): string {
  if (e instanceof ApiError) return `${e.error}: ${e.message}`;
  if (e instanceof Error) return `service unreachable: ${e.message}`;
  return String(e);
}
