// Simulation results panel. Every numeric string rendered here is a
// formatted copy of a value received from /api/simulate; the spans all
// carry class "num" so tests can sweep the panel and check each number
// against the client's response log.

import { basisLabel, fmtAmplitude, fmtMillis, fmtValue } from "../format.js";
import type { MeasurementResult } from "../api.js";
import type { Measurement } from "../document.js";
import type { AppController } from "../controller.js";

export class ResultsPanel {
  private root: HTMLElement;
  private ctl: AppController;

  constructor(root: HTMLElement, ctl: AppController) {
    this.root = root;
    this.ctl = ctl;
    root.classList.add("results");
    ctl.store.subscribe(() => this.render());
  }

  private render(): void {
    const sim = this.ctl.store.get().simulation;
    this.root.innerHTML = "";
    const title = document.createElement("div");
    title.className = "panel-title";
    title.textContent = "Results";
    this.root.appendChild(title);

    if (sim.status === "idle") {
      this.note("run a circuit to see results");
      return;
    }
    if (sim.status === "running") {
      this.note("running...");
      return;
    }
    if (sim.status === "error") {
      const err = document.createElement("div");
      err.className = "error-box";
      err.textContent = sim.pointer ? `${sim.pointer}: ${sim.message}` : sim.message;
      this.root.appendChild(err);
      return;
    }

    const meta = document.createElement("div");
    meta.className = "run-meta";
    meta.append(`${sim.mode}, `);
    meta.appendChild(num(fmtMillis(sim.wallMs)));
    this.root.appendChild(meta);

    sim.results.forEach((res, i) => {
      this.root.appendChild(this.measurementCard(res, sim.measurements[i]));
    });
  }

  private note(text: string): void {
    const el = document.createElement("div");
    el.className = "note";
    el.textContent = text;
    this.root.appendChild(el);
  }

  private measurementCard(res: MeasurementResult, m: Measurement | undefined): HTMLElement {
    const card = document.createElement("div");
    card.className = `result-card result-${res.kind}`;
    const head = document.createElement("div");
    head.className = "result-head";
    head.textContent = label(res, m);
    card.appendChild(head);

    if (res.kind === "expval") {
      const v = document.createElement("div");
      v.className = "expval-value";
      v.appendChild(num(fmtValue(res.value)));
      card.appendChild(v);
    } else if (res.kind === "probs") {
      const n = m && m.kind === "probs" ? m.qubits.length : Math.log2(res.value.length);
      res.value.forEach((p, i) => {
        const row = document.createElement("div");
        row.className = "prob-row";
        const lab = document.createElement("span");
        lab.className = "basis";
        lab.textContent = basisLabel(i, n);
        const bar = document.createElement("span");
        bar.className = "prob-bar";
        bar.style.width = `${Math.max(0, Math.min(1, p)) * 100}%`;
        const track = document.createElement("span");
        track.className = "prob-track";
        track.appendChild(bar);
        row.append(lab, track, num(fmtValue(p)));
        card.appendChild(row);
      });
    } else {
      res.value.real.forEach((re, i) => {
        const row = document.createElement("div");
        row.className = "amp-row";
        const lab = document.createElement("span");
        lab.className = "basis";
        lab.textContent = basisLabel(i, Math.log2(res.value.real.length));
        row.append(lab, num(fmtAmplitude(re, res.value.imag[i] ?? 0)));
        card.appendChild(row);
      });
    }
    return card;
  }
}

function num(text: string): HTMLElement {
  const el = document.createElement("span");
  el.className = "num";
  el.textContent = text;
  return el;
}

function label(res: MeasurementResult, m: Measurement | undefined): string {
  if (m?.kind === "expval") return `expval ${m.pauli}`;
  if (m?.kind === "probs") return `probs q${m.qubits.join(", q")}`;
  if (m?.kind === "state") return "state";
  return res.kind;
}
