// Gate palette: draggable chips, one per gate kind reported by the
// service. Doubles as the drop target for removing gates (dragging a
// placed gate "away" from the canvas and letting go here deletes it).

import type { AppController } from "../controller.js";
import { readPayload, writePayload } from "./dnd.js";

export class PalettePanel {
  private root: HTMLElement;
  private ctl: AppController;

  constructor(root: HTMLElement, ctl: AppController) {
    this.root = root;
    this.ctl = ctl;
    root.classList.add("palette");
    root.addEventListener("dragover", (e) => e.preventDefault());
    root.addEventListener("drop", (e) => {
      e.preventDefault();
      this.handleRemoveDrop((e as DragEvent).dataTransfer?.getData("text/plain") ?? "");
    });
    ctl.store.subscribe(() => this.render());
  }

  /** Dropping a placed gate on the palette removes it from the circuit. */
  handleRemoveDrop(payloadText: string): void {
    const payload = readPayload(payloadText);
    if (payload?.source === "grid") this.ctl.deleteGate(payload.id);
  }

  private render(): void {
    const palette = this.ctl.store.get().palette;
    this.root.innerHTML = "";
    const title = document.createElement("div");
    title.className = "panel-title";
    title.textContent = "Gates";
    this.root.appendChild(title);
    for (const info of palette) {
      const chip = document.createElement("div");
      chip.className = "gate-chip";
      chip.textContent = info.kind;
      chip.title = `${info.kind}: ${info.arity} qubit(s), ${info.param_count} parameter(s)`;
      chip.draggable = true;
      chip.dataset.kind = info.kind;
      chip.addEventListener("dragstart", (e) => {
        writePayload((e as DragEvent).dataTransfer, { source: "palette", kind: info.kind });
      });
      this.root.appendChild(chip);
    }
  }
}
