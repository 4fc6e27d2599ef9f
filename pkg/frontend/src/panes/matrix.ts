import type {
  CategoryCell,
  CombinedCell,
  MatrixCell,
  MatrixPayload,
  StripCell,
  StripesCell,
} from "../api/types";
import type { TokenColors } from "../colors";
import { clear, el, formatDb } from "./dom";

export interface MatrixEvents {
  onHover(region: string | null, band: string | null): void;
  onSelect(region: string, band: string): void;
}

function isCategory(c: MatrixCell): c is CategoryCell {
  return "category" in c;
}

function isStripes(c: MatrixCell): c is StripesCell {
  return "stripes" in c;
}

function isCombined(c: MatrixCell): c is CombinedCell {
  return "two_tone" in c;
}

/**
 * Region x band overview grid. Row heights follow the served area
 * fractions, every cell renders exactly what the server encoded for the
 * active mode, and hover/click drive the drill-down.
 */
export class MatrixPane {
  readonly root: HTMLElement;
  private marks = new Set<string>();
  private payload: MatrixPayload | null = null;

  constructor(
    container: HTMLElement,
    private readonly colors: TokenColors,
    private readonly events: MatrixEvents,
  ) {
    this.root = el("div", "matrix-pane");
    container.appendChild(this.root);
    this.root.addEventListener("mouseleave", () => this.events.onHover(null, null));
  }

  render(payload: MatrixPayload): void {
    this.payload = payload;
    clear(this.root);

    const header = el("div", "matrix-row matrix-header");
    header.appendChild(el("div", "matrix-rowname", ""));
    for (const band of payload.bands) {
      header.appendChild(el("div", "matrix-band-label", band));
    }
    this.root.appendChild(header);

    for (const row of payload.rows) {
      const rowEl = el("div", "matrix-row");
      // TOTAL renders at full height, regions scale by their area share
      rowEl.style.setProperty("--row-scale", String(Math.max(row.height_fraction, 0.15)));
      rowEl.appendChild(el("div", "matrix-rowname", row.region));
      row.cells.forEach((cell, b) => {
        const band = payload.bands[b]!;
        const cellEl = this.renderCell(cell);
        cellEl.classList.add("matrix-cell");
        cellEl.dataset["region"] = row.region;
        cellEl.dataset["band"] = band;
        if (this.marks.has(`${row.region}|${band}`)) cellEl.classList.add("marked");
        cellEl.addEventListener("mouseenter", () => this.events.onHover(row.region, band));
        cellEl.addEventListener("click", () => this.events.onSelect(row.region, band));
        rowEl.appendChild(cellEl);
      });
      this.root.appendChild(rowEl);
    }
  }

  private renderCell(cell: MatrixCell): HTMLElement {
    if (isCombined(cell)) {
      const node = el("div", "cell-combined");
      node.appendChild(this.renderCell(cell.two_tone));
      node.appendChild(this.renderCell(cell.strip));
      return node;
    }
    if (isCategory(cell)) {
      const node = el("div", "cell-category");
      node.style.background = this.colors.css(cell.token);
      node.title = `${cell.category}  ${formatDb(cell.level_db)}`;
      if (cell.excess_db !== null && cell.excess_db > 0) {
        node.title += `  (+${cell.excess_db.toFixed(2)} dB)`;
      }
      return node;
    }
    if (isStripes(cell)) {
      const node = el("div", "cell-stripes");
      node.title = formatDb(cell.level_db);
      for (const [token, frac] of cell.stripes) {
        const stripe = el("div");
        stripe.style.flexGrow = String(frac);
        stripe.style.background = this.colors.css(token);
        node.appendChild(stripe);
      }
      return node;
    }
    return this.renderStrip(cell);
  }

  private renderStrip(cell: StripCell): HTMLElement {
    const node = el("div", "cell-strip");
    cell.tokens.forEach((token, i) => {
      const row = el("div");
      row.style.background = this.colors.css(token);
      row.title = formatDb(cell.row_values[i]);
      node.appendChild(row);
    });
    return node;
  }

  /** Apply highlight marks; pass the pairs from the highlight payload. */
  setMarks(pairs: [string, string][]): void {
    this.marks = new Set(pairs.map(([r, b]) => `${r}|${b}`));
    if (!this.payload) return;
    for (const node of this.root.querySelectorAll<HTMLElement>(".matrix-cell")) {
      const key = `${node.dataset["region"]}|${node.dataset["band"]}`;
      node.classList.toggle("marked", this.marks.has(key));
    }
  }

  cellAt(region: string, band: string): HTMLElement | null {
    return this.root.querySelector(`[data-region="${region}"][data-band="${band}"]`);
  }
}
