// Typed client for the qtnsim HTTP API. Every byte of numeric output
// shown in the UI flows through here; the client keeps a log of request
// and response bodies so integration tests can prove displayed numbers
// came from the service rather than local arithmetic.

import type { CircuitJson } from "./document.js";
import type { GateInfo } from "./document.js";

export type ValidationReport =
  | { ok: true }
  | { ok: false; errors: { pointer: string; message: string }[] };

export type SimulateRequest = {
  circuit: CircuitJson;
  params?: number[];
  mode?: "statevector" | "tensor-network";
  tn_options?: Record<string, unknown>;
};

export type MeasurementResult =
  | { kind: "expval"; value: number }
  | { kind: "probs"; value: number[] }
  | { kind: "state"; value: { real: number[]; imag: number[] } };

export type SimulateResponse = {
  mode: string;
  results: MeasurementResult[];
  wall_ms: number;
};

export type LossEvent = { iter: number; loss: number };
export type TerminalEvent = {
  status: "done" | "canceled" | "error";
  extras?: Record<string, unknown>;
  message?: string;
};

export type RequestRecord = {
  method: string;
  path: string;
  status: number;
  request?: unknown;
  response: unknown;
};

export class ApiError extends Error {
  status: number;
  error: string;
  pointer?: string;
  constructor(status: number, error: string, message: string, pointer?: string) {
    super(message);
    this.status = status;
    this.error = error;
    this.pointer = pointer;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  readonly baseUrl: string;
  readonly log: RequestRecord[] = [];
  private fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    // bind so the implementation survives being detached from globalThis
    const f = fetchImpl ?? fetch;
    this.fetchImpl = (input, init) => f(input, init);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const payload = await resp.json();
    this.log.push({ method, path, status: resp.status, request: body, response: payload });
    if (!resp.ok) {
      const err = payload as { error?: string; message?: string; pointer?: string };
      throw new ApiError(resp.status, err.error ?? "HttpError", err.message ?? resp.statusText, err.pointer);
    }
    return payload as T;
  }

  gates(): Promise<GateInfo[]> {
    return this.request<GateInfo[]>("GET", "/api/gates");
  }

  validate(circuit: CircuitJson): Promise<ValidationReport> {
    return this.request<ValidationReport>("POST", "/api/circuits/validate", circuit);
  }

  simulate(req: SimulateRequest): Promise<SimulateResponse> {
    return this.request<SimulateResponse>("POST", "/api/simulate", req);
  }

  startTraining(task: string, options: Record<string, unknown>): Promise<{ job_id: string }> {
    return this.request<{ job_id: string }>("POST", "/api/train", { task, options });
  }

  cancelTraining(jobId: string): Promise<{ status: string }> {
    return this.request<{ status: string }>("DELETE", `/api/train/${jobId}`);
  }

  /**
   * Consume the newline-delimited event stream for a job. `onLoss` fires
   * per loss event as it arrives; resolves with the terminal status line.
   */
  async streamEvents(jobId: string, onLoss: (e: LossEvent) => void): Promise<TerminalEvent> {
    const path = `/api/train/${jobId}/events`;
    const resp = await this.fetchImpl(this.baseUrl + path, { method: "GET" });
    if (!resp.ok) {
      const payload = await resp.json();
      this.log.push({ method: "GET", path, status: resp.status, response: payload });
      const err = payload as { error?: string; message?: string };
      throw new ApiError(resp.status, err.error ?? "HttpError", err.message ?? resp.statusText);
    }
    if (!resp.body) throw new ApiError(resp.status, "StreamError", "response has no body");

    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    const seen: unknown[] = [];
    let terminal: TerminalEvent | null = null;
    let buffer = "";

    const handleLine = (line: string) => {
      if (!line.trim()) return;
      const event = JSON.parse(line) as LossEvent | TerminalEvent;
      seen.push(event);
      if ("status" in event) terminal = event;
      else onLoss(event);
    };

    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffer += decoder.decode(value, { stream: true });
      let nl;
      while ((nl = buffer.indexOf("\n")) >= 0) {
        handleLine(buffer.slice(0, nl));
        buffer = buffer.slice(nl + 1);
      }
    }
    buffer += decoder.decode();
    if (buffer.trim()) handleLine(buffer);

    this.log.push({ method: "GET", path, status: resp.status, response: seen });
    if (!terminal) throw new ApiError(0, "StreamError", "stream ended without a terminal status");
    return terminal;
  }
}

/** Every finite number anywhere inside the logged response bodies. */
export function numbersInLog(log: RequestRecord[]): number[] {
  const out: number[] = [];
  const walk = (v: unknown) => {
    if (typeof v === "number" && Number.isFinite(v)) out.push(v);
    else if (Array.isArray(v)) v.forEach(walk);
    else if (typeof v === "object" && v !== null) Object.values(v).forEach(walk);
  };
  for (const rec of log) walk(rec.response);
  return out;
}
