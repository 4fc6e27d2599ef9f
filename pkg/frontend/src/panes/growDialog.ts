import { clear, el } from "./dom";

export interface GrowRequestUi {
  steps: number;
  minLevelDb: number | null;
  gateByBand: boolean;
}

/** Modal asking for grow parameters: ring count and an optional level gate. */
export class GrowDialog {
  private root: HTMLElement;

  constructor(
    container: HTMLElement,
    private readonly onSubmit: (req: GrowRequestUi) => void,
  ) {
    this.root = el("div", "grow-dialog hidden");
    container.appendChild(this.root);
  }

  open(bandLabel: string | null): void {
    clear(this.root);
    this.root.classList.remove("hidden");

    this.root.appendChild(el("div", "pane-title", "grow selection"));

    const stepsLabel = el("label", undefined, "steps ");
    const steps = el("input");
    steps.type = "number";
    steps.min = "1";
    steps.value = "1";
    stepsLabel.appendChild(steps);
    this.root.appendChild(stepsLabel);

    const levelLabel = el("label", undefined, "min level dB ");
    const level = el("input");
    level.type = "number";
    level.placeholder = "none";
    levelLabel.appendChild(level);
    this.root.appendChild(levelLabel);

    const gateLabel = el("label");
    const gate = el("input");
    gate.type = "checkbox";
    gate.checked = bandLabel !== null;
    gate.disabled = bandLabel === null;
    gateLabel.appendChild(gate);
    gateLabel.appendChild(
      document.createTextNode(bandLabel ? ` gate by band ${bandLabel}` : " no band selected"),
    );
    this.root.appendChild(gateLabel);

    const ok = el("button", "grow-ok", "grow");
    ok.addEventListener("click", () => {
      this.close();
      this.onSubmit({
        steps: Math.max(1, Number(steps.value) || 1),
        minLevelDb: level.value === "" ? null : Number(level.value),
        gateByBand: gate.checked,
      });
    });
    this.root.appendChild(ok);

    const cancel = el("button", "grow-cancel", "cancel");
    cancel.addEventListener("click", () => this.close());
    this.root.appendChild(cancel);
  }

  close(): void {
    this.root.classList.add("hidden");
  }

  get isOpen(): boolean {
    return !this.root.classList.contains("hidden");
  }
}
