import type { BandKind, ColorScaleKind, MatrixMode, SortMode } from "../api/types";

export interface ViewSettings {
  matrixMode: MatrixMode;
  matrixKind: BandKind;
  shades: number;
  matrixRows: number;
  harmonicsRows: number;
  sortMode: SortMode;
  colorScale: ColorScaleKind;
  autoViews: number; // how many critical harmonics open 3D views on band selection
  cameraLink: boolean;
}

export interface SelectionView {
  region: string | null;
  band: string | null;
  harmonics: number[];
  cells: number[];
  frozen: boolean;
}

export const DEFAULT_SETTINGS: ViewSettings = {
  matrixMode: "limits",
  matrixKind: "third",
  shades: 3,
  matrixRows: 4,
  harmonicsRows: 64,
  sortMode: "individual",
  colorScale: "nonlinear",
  autoViews: 3,
  cameraLink: true,
};

type Listener = () => void;

/** Central mutable state; panes subscribe and re-render on change. */
export class Store {
  settings: ViewSettings = { ...DEFAULT_SETTINGS };
  selection: SelectionView = { region: null, band: null, harmonics: [], cells: [], frozen: false };
  /** preview target while hovering the matrix; null follows the selection */
  hover: { region: string; band: string } | null = null;

  private listeners = new Set<Listener>();

  subscribe(fn: Listener): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }

  notify(): void {
    for (const fn of this.listeners) fn();
  }
}

// -- URL hash ---------------------------------------------------------------
// #region=BOTTOM&band=500&mode=limits keeps the drill-down state shareable.

export interface HashState {
  region?: string;
  band?: string;
  mode?: MatrixMode;
}

export function encodeHash(state: HashState): string {
  const q = new URLSearchParams();
  if (state.region) q.set("region", state.region);
  if (state.band) q.set("band", state.band);
  if (state.mode) q.set("mode", state.mode);
  const s = q.toString();
  return s ? `#${s}` : "";
}

const MODES: MatrixMode[] = ["limits", "two-tone", "discrete-limits", "combined", "raw"];

export function decodeHash(hash: string): HashState {
  const q = new URLSearchParams(hash.replace(/^#/, ""));
  const out: HashState = {};
  const region = q.get("region");
  const band = q.get("band");
  const mode = q.get("mode");
  if (region) out.region = region;
  if (band) out.band = band;
  if (mode && (MODES as string[]).includes(mode)) out.mode = mode as MatrixMode;
  return out;
}
