import type { HarmonicsPayload } from "../api/types";
import type { TokenColors } from "../colors";
import { clear, el, formatDb } from "./dom";

export interface HarmonicsEvents {
  onHarmonicClick(harmonic: number): void;
  onSortToggle(): void;
}

/**
 * One ranked strip per harmonic of the shown band. Column headers carry the
 * harmonic number and its integral level; clicking a column selects that
 * harmonic, the toggle switches between per-column ranking and the shared
 * by-selection layout.
 */
export class HarmonicsPane {
  readonly root: HTMLElement;
  private payload: HarmonicsPayload | null = null;
  private highlighted: Record<string, number[]> = {};

  constructor(
    container: HTMLElement,
    private readonly colors: TokenColors,
    private readonly events: HarmonicsEvents,
  ) {
    this.root = el("div", "harmonics-pane");
    container.appendChild(this.root);
  }

  render(payload: HarmonicsPayload, preview: boolean): void {
    this.payload = payload;
    clear(this.root);

    const bar = el("div", "pane-toolbar");
    const title = `${payload.region} / ${payload.band}${preview ? " (preview)" : ""}`;
    bar.appendChild(el("span", "pane-title", title));
    const toggle = el("button", "sort-toggle", `sort: ${payload.sort}`);
    toggle.addEventListener("click", () => this.events.onSortToggle());
    bar.appendChild(toggle);
    this.root.appendChild(bar);

    const columns = el("div", "harmonic-columns");
    for (const col of payload.columns) {
      const colEl = el("div", "harmonic-column");
      colEl.dataset["harmonic"] = String(col.harmonic);

      const head = el("div", "harmonic-head", `h${col.harmonic}`);
      head.title = `${col.freq_hz.toFixed(1)} Hz  ${formatDb(col.integral_db)}`;
      colEl.appendChild(head);

      const strip = el("div", "harmonic-strip");
      col.tokens.forEach((token, row) => {
        const rowEl = el("div", "harmonic-row");
        rowEl.dataset["row"] = String(row);
        rowEl.style.background = this.colors.css(token);
        rowEl.title = formatDb(col.row_values[row]);
        strip.appendChild(rowEl);
      });
      colEl.appendChild(strip);
      colEl.addEventListener("click", () => this.events.onHarmonicClick(col.harmonic));
      columns.appendChild(colEl);
    }
    this.root.appendChild(columns);
    this.applyHighlight();
  }

  /** Row highlights from the server's highlight payload (harmonic -> rows). */
  setHighlight(rows: Record<string, number[]> | null): void {
    this.highlighted = rows ?? {};
    this.applyHighlight();
  }

  private applyHighlight(): void {
    if (!this.payload) return;
    for (const colEl of this.root.querySelectorAll<HTMLElement>(".harmonic-column")) {
      const rows = new Set(this.highlighted[colEl.dataset["harmonic"]!] ?? []);
      for (const rowEl of colEl.querySelectorAll<HTMLElement>(".harmonic-row")) {
        rowEl.classList.toggle("hl", rows.has(Number(rowEl.dataset["row"])));
      }
    }
  }

  get shown(): { region: string; band: string } | null {
    return this.payload ? { region: this.payload.region, band: this.payload.band } : null;
  }

  columnEl(harmonic: number): HTMLElement | null {
    return this.root.querySelector(`[data-harmonic="${harmonic}"]`);
  }
}
