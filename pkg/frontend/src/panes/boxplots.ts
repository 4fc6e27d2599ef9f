import type { BoxplotsPayload } from "../api/types";
import type { TokenColors } from "../colors";
import { clear, el, svg } from "./dom";

const W = 160;
const H = 220;
const PAD = 22;

/**
 * Area-weighted box-and-whisker plots, one per served (band, region) pair,
 * with the level histogram behind the box and limit category stripes as
 * background bands. Pure presentation of served statistics.
 */
export class BoxplotsPane {
  readonly root: HTMLElement;

  constructor(
    container: HTMLElement,
    private readonly colors: TokenColors,
  ) {
    this.root = el("div", "boxplots-pane");
    container.appendChild(this.root);
  }

  render(payload: BoxplotsPayload): void {
    clear(this.root);
    if (payload.plots.length === 0) return;

    // one shared dB axis across all shown plots
    let lo = Infinity;
    let hi = -Infinity;
    for (const p of payload.plots) {
      lo = Math.min(lo, p.whisker_lo, p.hist_edges[0] ?? p.whisker_lo);
      hi = Math.max(hi, p.whisker_hi, p.hist_edges[p.hist_edges.length - 1] ?? p.whisker_hi);
    }
    const span = hi - lo || 1;
    const y = (db: number) => H - PAD - ((db - lo) / span) * (H - 2 * PAD);

    for (const p of payload.plots) {
      const fig = el("figure", "boxplot");
      const plot = svg("svg", { width: W, height: H, viewBox: `0 0 ${W} ${H}` });

      for (const stripe of p.limit_stripes) {
        if (stripe.lo_db === null || stripe.hi_db === null) continue;
        const top = y(Math.min(stripe.hi_db, hi));
        const bottom = y(Math.max(stripe.lo_db, lo));
        if (bottom <= top) continue;
        plot.appendChild(
          svg("rect", {
            x: 0,
            y: top,
            width: W,
            height: bottom - top,
            fill: this.colors.css(stripe.token),
            opacity: 0.25,
          }),
        );
      }

      const maxArea = Math.max(...p.hist_areas, 1e-12);
      p.hist_areas.forEach((area, i) => {
        const e0 = p.hist_edges[i]!;
        const e1 = p.hist_edges[i + 1]!;
        plot.appendChild(
          svg("rect", {
            x: W / 2 + 6,
            y: y(e1),
            width: (area / maxArea) * (W / 2 - 10),
            height: Math.max(y(e0) - y(e1), 0.5),
            fill: "#9ab",
            opacity: 0.7,
          }),
        );
      });

      const cx = W / 3;
      const boxW = 34;
      plot.appendChild(svg("line", { x1: cx, x2: cx, y1: y(p.whisker_lo), y2: y(p.whisker_hi), stroke: "#234", "stroke-width": 1 }));
      for (const w of [p.whisker_lo, p.whisker_hi]) {
        plot.appendChild(svg("line", { x1: cx - 8, x2: cx + 8, y1: y(w), y2: y(w), stroke: "#234", "stroke-width": 1 }));
      }
      plot.appendChild(
        svg("rect", {
          x: cx - boxW / 2,
          y: y(p.q3),
          width: boxW,
          height: Math.max(y(p.q1) - y(p.q3), 0.5),
          fill: "#cde",
          stroke: "#234",
        }),
      );
      plot.appendChild(
        svg("line", { x1: cx - boxW / 2, x2: cx + boxW / 2, y1: y(p.median), y2: y(p.median), stroke: "#123", "stroke-width": 2 }),
      );

      fig.appendChild(plot);
      const caption = el("figcaption");
      caption.textContent = p.region ? `${p.region} / ${p.band}` : `all / ${p.band}`;
      caption.title = `median ${p.median.toFixed(1)} dB, ${p.n_cells} cells, ${p.area_m2.toFixed(3)} m2`;
      fig.appendChild(caption);
      this.root.appendChild(fig);
    }
  }
}
