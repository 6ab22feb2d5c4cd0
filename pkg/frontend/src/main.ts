// Application entry point. The page is static; everything the user sees
// comes from the store, and every number comes from the HTTP service.
// Point the page at a server with ?api=http://host:port (defaults to
// http://127.0.0.1:8000, the `qtnsim serve` default).

import { ApiClient } from "./api.js";
import { AppController } from "./controller.js";
import { Store, initialState } from "./store.js";
import { GridPanel } from "./ui/grid.js";
import { InspectorPanel } from "./ui/inspector.js";
import { PalettePanel } from "./ui/palette.js";
import { ResultsPanel } from "./ui/results.js";
import { RunPanel } from "./ui/runpanel.js";
import { TrainingPanel } from "./ui/training.js";

export type App = {
  controller: AppController;
  grid: GridPanel;
  palette: PalettePanel;
  runPanel: RunPanel;
  results: ResultsPanel;
  training: TrainingPanel;
  inspector: InspectorPanel;
};

/** Build the full UI inside `root`; exported so tests can mount it. */
export function mountApp(root: HTMLElement, apiBase: string, fetchImpl?: typeof fetch): App {
  const api = new ApiClient(apiBase, fetchImpl);
  const store = new Store(initialState(2));
  const controller = new AppController(store, api);

  root.innerHTML = "";
  root.classList.add("composer-app");
  const left = section(root, "left");
  const center = section(root, "center");
  const right = section(root, "right");

  const paletteEl = section(left, "palette-host");
  const runEl = section(left, "run-host");
  const gridEl = section(center, "grid-host");
  const resultsEl = section(center, "results-host");
  const trainingEl = section(right, "training-host");
  const inspectorEl = section(right, "inspector-host");

  const app: App = {
    controller,
    palette: new PalettePanel(paletteEl, controller),
    runPanel: new RunPanel(runEl, controller),
    grid: new GridPanel(gridEl, controller),
    results: new ResultsPanel(resultsEl, controller),
    training: new TrainingPanel(trainingEl, controller),
    inspector: new InspectorPanel(inspectorEl, controller),
  };
  return app;
}

function section(parent: HTMLElement, className: string): HTMLElement {
  const el = document.createElement("div");
  el.className = className;
  parent.appendChild(el);
  return el;
}

function apiBaseFromLocation(): string {
  const override = new URLSearchParams(window.location.search).get("api");
  return override ?? "http://127.0.0.1:8000";
}

// Auto-mount in a real page; tests call mountApp themselves.
const rootEl = typeof document !== "undefined" ? document.getElementById("app") : null;
if (rootEl) {
  const app = mountApp(rootEl, apiBaseFromLocation());
  void app.controller.loadPalette().then(() => app.controller.validateNow());
}
