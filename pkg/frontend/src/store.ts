// Single observable store. All UI state changes funnel through
// Store.update, which applies mutations one at a time even when a
// subscriber triggers another update mid-notify, so components never
// observe a half-applied transition.

import type { ComposerDocument, GateInfo, Measurement } from "./document.js";
import { emptyDocument } from "./document.js";
import type { LossEvent, SimulateResponse, ValidationReport } from "./api.js";

export class Store<S> {
  private state: S;
  private listeners = new Set<(s: S) => void>();
  private queue: ((s: S) => S)[] = [];
  private draining = false;

  constructor(initial: S) {
    this.state = initial;
  }

  get(): S {
    return this.state;
  }

  update(fn: (s: S) => S): void {
    this.queue.push(fn);
    if (this.draining) return;
    this.draining = true;
    try {
      while (this.queue.length) {
        const next = this.queue.shift()!;
        this.state = next(this.state);
        for (const l of this.listeners) l(this.state);
      }
    } finally {
      this.draining = false;
    }
  }

  subscribe(fn: (s: S) => void): () => void {
    this.listeners.add(fn);
    fn(this.state);
    return () => this.listeners.delete(fn);
  }
}

export type SimulationState =
  | { status: "idle" }
  | { status: "running" }
  | {
      status: "done";
      mode: string;
      results: SimulateResponse["results"];
      measurements: Measurement[];
      wallMs: number;
    }
  | { status: "error"; message: string; pointer?: string };

export type TrainingStatus = "idle" | "starting" | "streaming" | "done" | "canceled" | "error";

export type TrainingState = {
  status: TrainingStatus;
  task: string;
  jobId: string | null;
  losses: LossEvent[];
  extras: Record<string, unknown> | null;
  message: string | null;
};

export type AppState = {
  palette: GateInfo[];
  doc: ComposerDocument;
  validation: ValidationReport | null;
  /** Transient cue shown when a drop is rejected; cleared on next edit. */
  dropCue: string | null;
  runParamsText: string;
  runMode: "statevector" | "tensor-network";
  simulation: SimulationState;
  training: TrainingState;
  importError: { pointer: string; message: string } | null;
  /** Last transport-level failure; document and results stay intact. */
  netError: string | null;
};

export function initialState(nQubits = 2): AppState {
  return {
    palette: [],
    doc: emptyDocument(nQubits),
    validation: null,
    dropCue: null,
    runParamsText: "",
    runMode: "statevector",
    simulation: { status: "idle" },
    training: {
      status: "idle",
      task: "mqr",
      jobId: null,
      losses: [],
      extras: null,
      message: null,
    },
    importError: null,
    netError: null,
  };
}

export type AppStore = Store<AppState>;
