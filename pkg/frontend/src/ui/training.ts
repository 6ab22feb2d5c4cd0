// Training dashboard: pick a task, start it on the service, watch the
// loss curve grow as events stream in, cancel mid-run. The polyline is
// pure layout; the only numbers printed are copies of streamed values.

import { fmtValue } from "../format.js";
import type { AppController } from "../controller.js";
import type { TrainingState } from "../store.js";

const CHART_W = 420;
const CHART_H = 160;

export class TrainingPanel {
  private root: HTMLElement;
  private ctl: AppController;
  private controls: HTMLElement;
  private live: HTMLElement;
  private taskSel!: HTMLSelectElement;
  private epochsInput!: HTMLInputElement;
  private seedInput!: HTMLInputElement;
  private hamInput!: HTMLTextAreaElement;
  private startBtn!: HTMLButtonElement;
  private cancelBtn!: HTMLButtonElement;

  constructor(root: HTMLElement, ctl: AppController) {
    this.root = root;
    this.ctl = ctl;
    root.classList.add("training");
    this.controls = document.createElement("div");
    this.live = document.createElement("div");
    this.buildControls();
    root.appendChild(this.controls);
    root.appendChild(this.live);
    ctl.store.subscribe((s) => this.render(s.training));
  }

  private buildControls(): void {
    const title = document.createElement("div");
    title.className = "panel-title";
    title.textContent = "Training";

    this.taskSel = document.createElement("select");
    this.taskSel.className = "task-select";
    for (const t of ["mqr", "vqe", "mbl"]) {
      const opt = document.createElement("option");
      opt.value = t;
      opt.textContent = t;
      this.taskSel.appendChild(opt);
    }
    this.taskSel.addEventListener("change", () => {
      this.hamInput.style.display = this.taskSel.value === "vqe" ? "" : "none";
    });

    this.epochsInput = document.createElement("input");
    this.epochsInput.className = "epochs-input";
    this.epochsInput.placeholder = "epochs (default)";

    this.seedInput = document.createElement("input");
    this.seedInput.className = "seed-input";
    this.seedInput.placeholder = "seed (0)";

    this.hamInput = document.createElement("textarea");
    this.hamInput.className = "ham-input";
    this.hamInput.placeholder = "Pauli sum, one term per line, e.g.  -0.5 ZI";
    this.hamInput.style.display = "none";

    this.startBtn = document.createElement("button");
    this.startBtn.className = "train-start";
    this.startBtn.textContent = "Start";
    this.startBtn.addEventListener("click", () => void this.start());

    this.cancelBtn = document.createElement("button");
    this.cancelBtn.className = "train-cancel";
    this.cancelBtn.textContent = "Cancel";
    this.cancelBtn.addEventListener("click", () => void this.ctl.cancelTraining());

    this.controls.append(
      title,
      this.taskSel,
      this.epochsInput,
      this.seedInput,
      this.startBtn,
      this.cancelBtn,
      this.hamInput,
    );
  }

  start(): Promise<void> {
    const options: Record<string, unknown> = {};
    const epochs = Number(this.epochsInput.value);
    if (this.epochsInput.value.trim() && Number.isFinite(epochs)) options.epochs = epochs;
    const seed = Number(this.seedInput.value);
    if (this.seedInput.value.trim() && Number.isFinite(seed)) options.seed = seed;
    if (this.taskSel.value === "vqe" && this.hamInput.value.trim()) {
      options.hamiltonian_text = this.hamInput.value;
    }
    return this.ctl.startTraining(this.taskSel.value, options);
  }

  private render(t: TrainingState): void {
    this.startBtn.disabled = t.status === "starting" || t.status === "streaming";
    this.cancelBtn.disabled = t.status !== "streaming";
    this.live.innerHTML = "";

    const badge = document.createElement("span");
    badge.className = `train-status status-${t.status}`;
    badge.textContent = t.status;
    this.live.appendChild(badge);
    if (t.message) {
      const msg = document.createElement("div");
      msg.className = "error-box";
      msg.textContent = t.message;
      this.live.appendChild(msg);
    }

    if (t.losses.length) {
      this.live.appendChild(this.chart(t.losses));
      const last = t.losses[t.losses.length - 1]!;
      let best = last;
      for (const e of t.losses) if (e.loss < best.loss) best = e;
      const readout = document.createElement("div");
      readout.className = "train-readout";
      readout.append("iteration ");
      readout.appendChild(num(String(last.iter)));
      readout.append(", loss ");
      readout.appendChild(num(fmtValue(last.loss)));
      readout.append(", best ");
      readout.appendChild(num(fmtValue(best.loss)));
      this.live.appendChild(readout);
    }

    if (t.extras && (t.status === "done" || t.status === "canceled")) {
      const list = document.createElement("dl");
      list.className = "extras";
      for (const [key, value] of Object.entries(t.extras)) {
        const dt = document.createElement("dt");
        dt.textContent = key;
        const dd = document.createElement("dd");
        if (typeof value === "number") dd.appendChild(num(Number.isInteger(value) ? String(value) : fmtValue(value)));
        else dd.textContent = String(value);
        list.append(dt, dd);
      }
      this.live.appendChild(list);
    }
  }

  private chart(losses: { iter: number; loss: number }[]): SVGSVGElement {
    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    svg.setAttribute("viewBox", `0 0 ${CHART_W} ${CHART_H}`);
    svg.setAttribute("class", "loss-chart");
    let lo = Infinity;
    let hi = -Infinity;
    for (const e of losses) {
      lo = Math.min(lo, e.loss);
      hi = Math.max(hi, e.loss);
    }
    const span = hi - lo || 1;
    const n = losses.length;
    const pts = losses
      .map((e, i) => {
        const x = n === 1 ? 0 : (i / (n - 1)) * CHART_W;
        const y = CHART_H - ((e.loss - lo) / span) * (CHART_H - 8) - 4;
        return `${x.toFixed(1)},${y.toFixed(1)}`;
      })
      .join(" ");
    const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
    line.setAttribute("points", pts);
    line.setAttribute("fill", "none");
    line.setAttribute("class", "loss-line");
    svg.appendChild(line);
    return svg;
  }
}

function num(text: string): HTMLElement {
  const el = document.createElement("span");
  el.className = "num";
  el.textContent = text;
  return el;
}
