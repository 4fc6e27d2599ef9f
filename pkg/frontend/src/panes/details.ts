import type { DetailsPayload, Stripe } from "../api/types";
import type { TokenColors } from "../colors";
import { clear, el, formatDb } from "./dom";

export interface DetailsEvents {
  /** click at `fraction` (0 = quiet end) of one of the four bars */
  onBarClick(bar: BarName, fraction: number): void;
  onTopPctChange(pct: number): void;
}

export type BarName = "all" | "top" | "threshold" | "categories";

const BAR_LABELS: Record<BarName, string> = {
  all: "all cells",
  top: "loudest area",
  threshold: "above limit",
  categories: "verdict split",
};

/**
 * Frequency band details: the four area bars for one region x band plus the
 * summary numbers. Bars are drawn quiet end first, exactly as served.
 */
export class DetailsPane {
  readonly root: HTMLElement;
  private intervals: [number, number][] = [];
  private payload: DetailsPayload | null = null;

  constructor(
    container: HTMLElement,
    private readonly colors: TokenColors,
    private readonly events: DetailsEvents,
  ) {
    this.root = el("div", "details-pane");
    container.appendChild(this.root);
  }

  render(payload: DetailsPayload): void {
    this.payload = payload;
    clear(this.root);

    this.root.appendChild(
      el("div", "pane-title", `${payload.region} / ${payload.band}`),
    );

    const bars: [BarName, Stripe[]][] = [
      ["all", payload.bars.all],
      ["top", payload.bars.top],
      ["threshold", payload.bars.threshold],
      ["categories", payload.bars.categories],
    ];
    for (const [name, stripes] of bars) {
      const row = el("div", "details-bar-row");
      row.appendChild(el("span", "details-bar-label", BAR_LABELS[name]));
      const bar = el("div", "details-bar");
      bar.dataset["bar"] = name;
      for (const [token, frac] of stripes) {
        const seg = el("div");
        seg.style.flexGrow = String(frac);
        seg.style.background = this.colors.css(token);
        bar.appendChild(seg);
      }
      bar.addEventListener("click", (ev) => {
        const rect = bar.getBoundingClientRect();
        const frac = rect.width > 0 ? (ev.clientX - rect.left) / rect.width : 0.5;
        this.events.onBarClick(name, Math.min(Math.max(frac, 0), 1));
      });
      if (name === "all") bar.classList.add("details-bar-main");
      row.appendChild(bar);
      this.root.appendChild(row);
    }

    const s = payload.summary;
    const grid = el("div", "details-summary");
    const add = (label: string, value: string) => {
      grid.appendChild(el("span", "details-key", label));
      grid.appendChild(el("span", "details-val", value));
    };
    add("integral", formatDb(s.integral_db));
    add("limit", formatDb(s.limit_db));
    add("excess", formatDb(s.excess_db));
    add("area", `${s.area_m2.toFixed(3)} m2`);
    add("cells", String(s.n_cells));
    for (const [cat, frac] of Object.entries(s.area_fractions)) {
      add(cat, `${(frac * 100).toFixed(1)} %`);
    }
    this.root.appendChild(grid);

    const pct = el("label", "details-pct", "top % ");
    const input = el("input");
    input.type = "number";
    input.min = "0";
    input.max = "100";
    input.value = String(payload.top_pct);
    input.addEventListener("change", () => this.events.onTopPctChange(Number(input.value)));
    pct.appendChild(input);
    this.root.appendChild(pct);

    this.applyIntervals();
  }

  /** Selection intervals from the highlight payload, drawn over the main bar. */
  setIntervals(intervals: [number, number][]): void {
    this.intervals = intervals;
    this.applyIntervals();
  }

  private applyIntervals(): void {
    const bar = this.root.querySelector<HTMLElement>(".details-bar-main");
    if (!bar) return;
    for (const old of bar.querySelectorAll(".details-interval")) old.remove();
    for (const [a, b] of this.intervals) {
      const mark = el("div", "details-interval");
      mark.style.left = `${a * 100}%`;
      mark.style.width = `${(b - a) * 100}%`;
      bar.appendChild(mark);
    }
  }

  get shown(): DetailsPayload | null {
    return this.payload;
  }
}
