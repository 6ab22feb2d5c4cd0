// Document inspector: live validation badge, JSON export/import, and the
// plain-text circuit definition in call order.

import { definitionText } from "../document.js";
import type { AppController } from "../controller.js";

export class InspectorPanel {
  private root: HTMLElement;
  private ctl: AppController;
  private badge!: HTMLElement;
  private jsonArea!: HTMLTextAreaElement;
  private importErr!: HTMLElement;
  private definition!: HTMLElement;
  private cueBox!: HTMLElement;
  private netBox!: HTMLElement;

  constructor(root: HTMLElement, ctl: AppController) {
    this.root = root;
    this.ctl = ctl;
    root.classList.add("inspector");
    this.build();
    ctl.store.subscribe(() => this.sync());
  }

  private build(): void {
    const title = document.createElement("div");
    title.className = "panel-title";
    title.textContent = "Circuit";

    this.badge = document.createElement("div");
    this.badge.className = "validation-badge";

    this.cueBox = document.createElement("div");
    this.cueBox.className = "drop-cue";

    this.netBox = document.createElement("div");
    this.netBox.className = "net-banner";

    this.definition = document.createElement("pre");
    this.definition.className = "definition";

    this.jsonArea = document.createElement("textarea");
    this.jsonArea.className = "json-area";
    this.jsonArea.rows = 10;
    this.jsonArea.placeholder = "circuit JSON";

    const exportBtn = document.createElement("button");
    exportBtn.className = "export-btn";
    exportBtn.textContent = "Export";
    exportBtn.addEventListener("click", () => {
      this.jsonArea.value = this.ctl.exportJson();
    });

    const importBtn = document.createElement("button");
    importBtn.className = "import-btn";
    importBtn.textContent = "Import";
    importBtn.addEventListener("click", () => {
      this.ctl.importJson(this.jsonArea.value);
    });

    this.importErr = document.createElement("div");
    this.importErr.className = "import-error";

    this.root.append(
      title,
      this.badge,
      this.cueBox,
      this.netBox,
      this.definition,
      exportBtn,
      importBtn,
      this.jsonArea,
      this.importErr,
    );
  }

  private sync(): void {
    const s = this.ctl.store.get();

    if (s.validation === null) {
      this.badge.textContent = "not validated yet";
      this.badge.className = "validation-badge pending";
    } else if (s.validation.ok) {
      this.badge.textContent = "valid";
      this.badge.className = "validation-badge ok";
    } else {
      const first = s.validation.errors[0];
      this.badge.textContent = first ? `${first.pointer}: ${first.message}` : "invalid";
      this.badge.className = "validation-badge bad";
    }

    this.cueBox.textContent = s.dropCue ?? "";
    this.cueBox.style.display = s.dropCue ? "" : "none";
    this.netBox.textContent = s.netError ?? "";
    this.netBox.style.display = s.netError ? "" : "none";

    this.definition.textContent = definitionText(s.doc);

    if (s.importError) {
      this.importErr.textContent = s.importError.pointer
        ? `${s.importError.pointer}: ${s.importError.message}`
        : s.importError.message;
    } else {
      this.importErr.textContent = "";
    }
  }
}
