// Circuit canvas: qubit wires as rows, discrete time steps as columns.
// Gates render as blocks spanning their qubit rows; empty cells accept
// drops from the palette (insert) or from other blocks (move/reorder).
// Rejected drops leave the document untouched and flash the canvas.

import { paramLabel, parseParamInput, spanOf } from "../document.js";
import type { PlacedGate } from "../document.js";
import type { AppController } from "../controller.js";
import { readPayload, writePayload } from "./dnd.js";

export class GridPanel {
  private root: HTMLElement;
  private ctl: AppController;

  constructor(root: HTMLElement, ctl: AppController) {
    this.root = root;
    this.ctl = ctl;
    root.classList.add("canvas");
    root.tabIndex = 0;
    root.addEventListener("keydown", (e) => {
      if (e.key === "Delete" || e.key === "Backspace") {
        const sel = this.ctl.store.get().doc.selectedId;
        if (sel) this.ctl.deleteGate(sel);
      }
    });
    ctl.store.subscribe(() => this.render());
  }

  /** Entry point for a drop on cell (column, qubit); false when rejected. */
  handleCellDrop(payloadText: string, column: number, qubit: number): boolean {
    const payload = readPayload(payloadText);
    let ok = false;
    if (payload?.source === "palette") ok = this.ctl.tryAddGate(payload.kind, column, qubit);
    else if (payload?.source === "grid") ok = this.ctl.tryMoveGate(payload.id, column, qubit);
    if (!ok) this.flashRejection();
    return ok;
  }

  private flashRejection(): void {
    this.root.classList.remove("rejected");
    // restart the CSS animation even on back-to-back rejections
    void this.root.offsetWidth;
    this.root.classList.add("rejected");
    setTimeout(() => this.root.classList.remove("rejected"), 400);
  }

  private render(): void {
    const { doc } = this.ctl.store.get();
    this.root.innerHTML = "";
    const grid = document.createElement("div");
    grid.className = "grid";
    grid.style.gridTemplateColumns = `3rem repeat(${doc.nColumns}, 4rem)`;
    grid.style.gridTemplateRows = `repeat(${doc.nQubits}, 3.2rem)`;

    for (let q = 0; q < doc.nQubits; q++) {
      const label = document.createElement("div");
      label.className = "wire-label";
      label.textContent = `q${q}`;
      label.style.gridColumn = "1";
      label.style.gridRow = String(q + 1);
      grid.appendChild(label);
      for (let c = 0; c < doc.nColumns; c++) {
        grid.appendChild(this.cell(c, q));
      }
    }
    for (const gate of doc.gates) grid.appendChild(this.block(gate, doc.selectedId));
    this.root.appendChild(grid);
  }

  private cell(column: number, qubit: number): HTMLElement {
    const el = document.createElement("div");
    el.className = "cell";
    el.dataset.col = String(column);
    el.dataset.q = String(qubit);
    el.style.gridColumn = String(column + 2);
    el.style.gridRow = String(qubit + 1);
    el.addEventListener("dragover", (e) => e.preventDefault());
    el.addEventListener("drop", (e) => {
      e.preventDefault();
      e.stopPropagation();
      this.handleCellDrop((e as DragEvent).dataTransfer?.getData("text/plain") ?? "", column, qubit);
    });
    return el;
  }

  private block(gate: PlacedGate, selectedId: string | null): HTMLElement {
    const rows = spanOf(gate);
    const el = document.createElement("div");
    el.className = "gate-block";
    if (gate.qubits.length > 1) el.classList.add("multi");
    if (gate.id === selectedId) el.classList.add("selected");
    el.dataset.gateId = gate.id;
    el.dataset.kind = gate.kind;
    el.draggable = true;
    el.style.gridColumn = String(gate.column + 2);
    el.style.gridRow = `${rows[0]! + 1} / span ${rows.length}`;

    const name = document.createElement("div");
    name.className = "gate-name";
    name.textContent = gate.kind;
    el.appendChild(name);

    if (gate.qubits.length > 1) {
      const roles = document.createElement("div");
      roles.className = "gate-roles";
      roles.textContent = gate.qubits.map((q, i) => `${i ? "t" : "c"}=q${q}`).join(" ");
      el.appendChild(roles);
    }

    gate.params.forEach((p, i) => {
      const input = document.createElement("input");
      input.className = "param-input";
      input.dataset.index = String(i);
      input.value = paramLabel(p);
      input.title = "number or p<slot>";
      input.addEventListener("change", () => {
        const parsed = parseParamInput(input.value);
        if (parsed) {
          input.classList.remove("bad");
          this.ctl.setGateParam(gate.id, i, parsed);
        } else {
          input.classList.add("bad");
        }
      });
      // keep keystrokes inside the field from starting a block drag
      input.addEventListener("mousedown", (e) => e.stopPropagation());
      input.draggable = false;
      el.appendChild(input);
    });

    el.addEventListener("click", (e) => {
      e.stopPropagation();
      this.ctl.selectGate(gate.id);
    });
    el.addEventListener("dblclick", () => {
      if (gate.qubits.length > 1) this.ctl.flip(gate.id);
    });
    el.addEventListener("dragstart", (e) => {
      writePayload((e as DragEvent).dataTransfer, { source: "grid", id: gate.id });
    });
    return el;
  }
}
