// Run controls: qubit count, measurement list, engine choice, values for
// the symbolic parameter slots, and the Run button.

import { slotCount } from "../document.js";
import type { Measurement } from "../document.js";
import type { AppController } from "../controller.js";

export class RunPanel {
  private root: HTMLElement;
  private ctl: AppController;
  private qubitsInput!: HTMLInputElement;
  private paramsInput!: HTMLInputElement;
  private paramsHint!: HTMLElement;
  private modeSel!: HTMLSelectElement;
  private runBtn!: HTMLButtonElement;
  private measureList!: HTMLElement;
  private measureKind!: HTMLSelectElement;
  private measureText!: HTMLInputElement;
  private measureError!: HTMLElement;

  constructor(root: HTMLElement, ctl: AppController) {
    this.root = root;
    this.ctl = ctl;
    root.classList.add("runpanel");
    this.build();
    ctl.store.subscribe(() => this.sync());
  }

  private build(): void {
    const title = document.createElement("div");
    title.className = "panel-title";
    title.textContent = "Run";

    const qubitsLabel = document.createElement("label");
    qubitsLabel.textContent = "qubits ";
    this.qubitsInput = document.createElement("input");
    this.qubitsInput.type = "number";
    this.qubitsInput.min = "1";
    this.qubitsInput.max = "12";
    this.qubitsInput.className = "qubits-input";
    this.qubitsInput.addEventListener("change", () => {
      const n = Number(this.qubitsInput.value);
      if (!this.ctl.setQubits(n)) this.sync();
    });
    qubitsLabel.appendChild(this.qubitsInput);

    this.measureList = document.createElement("div");
    this.measureList.className = "measure-list";

    this.measureKind = document.createElement("select");
    this.measureKind.className = "measure-kind";
    for (const k of ["probs", "expval", "state"]) {
      const opt = document.createElement("option");
      opt.value = k;
      opt.textContent = k;
      this.measureKind.appendChild(opt);
    }
    this.measureText = document.createElement("input");
    this.measureText.className = "measure-text";
    this.measureText.placeholder = "qubits, e.g. 0,1";
    this.measureKind.addEventListener("change", () => {
      const k = this.measureKind.value;
      this.measureText.placeholder = k === "expval" ? "Pauli string, e.g. IZ" : "qubits, e.g. 0,1";
      this.measureText.style.display = k === "state" ? "none" : "";
    });
    const addBtn = document.createElement("button");
    addBtn.className = "measure-add";
    addBtn.textContent = "Add measurement";
    addBtn.addEventListener("click", () => this.addMeasurement());
    this.measureError = document.createElement("div");
    this.measureError.className = "measure-error";

    this.paramsInput = document.createElement("input");
    this.paramsInput.className = "run-params";
    this.paramsInput.placeholder = "slot values";
    this.paramsInput.addEventListener("input", () => {
      this.ctl.setRunParamsText(this.paramsInput.value);
    });
    this.paramsHint = document.createElement("span");
    this.paramsHint.className = "params-hint";

    this.modeSel = document.createElement("select");
    this.modeSel.className = "mode-select";
    for (const m of ["statevector", "tensor-network"]) {
      const opt = document.createElement("option");
      opt.value = m;
      opt.textContent = m;
      this.modeSel.appendChild(opt);
    }
    this.modeSel.addEventListener("change", () => {
      this.ctl.setRunMode(this.modeSel.value as "statevector" | "tensor-network");
    });

    this.runBtn = document.createElement("button");
    this.runBtn.className = "run-btn";
    this.runBtn.textContent = "Run";
    this.runBtn.addEventListener("click", () => void this.ctl.runSimulation());

    this.root.append(
      title,
      qubitsLabel,
      this.measureList,
      this.measureKind,
      this.measureText,
      addBtn,
      this.measureError,
      this.paramsHint,
      this.paramsInput,
      this.modeSel,
      this.runBtn,
    );
  }

  private addMeasurement(): void {
    const parsed = parseMeasurementInput(this.measureKind.value, this.measureText.value);
    if (typeof parsed === "string") {
      this.measureError.textContent = parsed;
      return;
    }
    this.measureError.textContent = "";
    const current = this.ctl.store.get().doc.measurements;
    this.ctl.replaceMeasurements([...current, parsed]);
    this.measureText.value = "";
  }

  removeMeasurement(index: number): void {
    const current = this.ctl.store.get().doc.measurements;
    this.ctl.replaceMeasurements(current.filter((_, i) => i !== index));
  }

  private sync(): void {
    const s = this.ctl.store.get();
    if (document.activeElement !== this.qubitsInput) {
      this.qubitsInput.value = String(s.doc.nQubits);
    }
    if (document.activeElement !== this.paramsInput && this.paramsInput.value !== s.runParamsText) {
      this.paramsInput.value = s.runParamsText;
    }
    const slots = slotCount(s.doc);
    this.paramsHint.textContent = slots
      ? `values for p0..p${slots - 1}: `
      : "";
    this.paramsInput.style.display = slots ? "" : "none";
    this.runBtn.disabled = s.simulation.status === "running";

    this.measureList.innerHTML = "";
    s.doc.measurements.forEach((m, i) => {
      const chip = document.createElement("span");
      chip.className = "measure-chip";
      chip.textContent = describeMeasurement(m);
      const rm = document.createElement("button");
      rm.className = "measure-remove";
      rm.textContent = "x";
      rm.title = "remove measurement";
      rm.addEventListener("click", () => this.removeMeasurement(i));
      chip.appendChild(rm);
      this.measureList.appendChild(chip);
    });
  }
}

function describeMeasurement(m: Measurement): string {
  if (m.kind === "expval") return `expval ${m.pauli}`;
  if (m.kind === "probs") return `probs q${m.qubits.join(",q")}`;
  return "state";
}

/** Local structural parse; semantic checks stay with the service. */
export function parseMeasurementInput(kind: string, text: string): Measurement | string {
  if (kind === "state") return { kind: "state" };
  if (kind === "expval") {
    const pauli = text.trim().toUpperCase();
    if (!/^[IXYZ]+$/.test(pauli)) return "Pauli string must use only I, X, Y, Z";
    return { kind: "expval", pauli };
  }
  if (kind === "probs") {
    const parts = text.split(/[\s,]+/).filter(Boolean);
    if (!parts.length) return "list the qubits to measure, e.g. 0,1";
    const qubits = parts.map(Number);
    if (qubits.some((q) => !Number.isInteger(q) || q < 0)) return "qubits must be non-negative integers";
    if (new Set(qubits).size !== qubits.length) return "qubits must be distinct";
    return { kind: "probs", qubits };
  }
  return `unknown measurement kind ${kind}`;
}
