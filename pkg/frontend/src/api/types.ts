// Wire types for the analysis service (/api/v1). Field names and shapes
// mirror the server's JSON exactly; undefined dB values arrive as null.

export type Stripe = [token: string, fraction: number];

export interface BandInfo {
  nominal: string;
  center_hz: number;
  lo_hz: number;
  hi_hz: number;
  harmonics: number;
  integral_limit_db?: number | null; // third bands only
  discrete_limit_db?: number | null;
}

export interface DatasetMeta {
  label: string;
  speed_rpm: number;
  fundamental_hz: number;
  reference: { velocity_m_s: number; area_m2: number };
  counts: {
    vertices: number;
    cells: number;
    harmonics: number;
    thirds: number;
    octaves: number;
    out_of_band: number;
  };
  regions: { name: string; cells: number; area_m2: number }[];
  bands: { third: BandInfo[]; octave: BandInfo[] };
  borderline_width_db: number;
  warnings: string[];
  dataset_hash: string;
}

export interface MeshPayload {
  vertices: number[][];
  cells: number[][];
  region_names: string[];
  cell_region: number[];
  areas: number[];
  dataset_hash: string;
}

export interface CategoryCell {
  level_db: number | null;
  excess_db: number | null;
  category: string;
  shade: number | null;
  token: string;
}

export interface StripesCell {
  level_db: number | null;
  stripes: Stripe[];
}

export interface StripCell {
  row_values: (number | null)[];
  tokens: string[];
}

export interface CombinedCell {
  two_tone: StripesCell;
  strip: StripCell;
}

export type MatrixCell = CategoryCell | StripesCell | StripCell | CombinedCell;

export type MatrixMode = "limits" | "two-tone" | "discrete-limits" | "combined" | "raw";
export type BandKind = "third" | "octave";

export interface MatrixPayload {
  mode: MatrixMode;
  kind: BandKind;
  shades: number;
  rows_per_cell: number;
  bands: string[];
  rows: { region: string; height_fraction: number; cells: MatrixCell[] }[];
  dataset_hash: string;
}

export interface HarmonicColumn {
  harmonic: number; // 1-based
  freq_hz: number;
  integral_db: number | null;
  row_values: (number | null)[];
  tokens: string[];
}

export type SortMode = "individual" | "by-selection";

export interface HarmonicsPayload {
  region: string;
  band: string;
  rows: number;
  sort: SortMode;
  anchor: number | null;
  columns: HarmonicColumn[];
  dataset_hash: string;
}

export interface DetailsPayload {
  region: string;
  band: string;
  bars: { all: Stripe[]; top: Stripe[]; threshold: Stripe[]; categories: Stripe[] };
  top_pct: number;
  abs_threshold_db: number | null;
  summary: {
    integral_db: number | null;
    limit_db: number | null;
    excess_db: number | null;
    area_m2: number;
    n_cells: number;
    area_fractions: Record<string, number>;
  };
  dataset_hash: string;
}

export interface BoxplotEntry {
  band: string;
  region: string | null;
  n_cells: number;
  area_m2: number;
  q1: number;
  median: number;
  q3: number;
  whisker_lo: number;
  whisker_hi: number;
  hist_edges: number[];
  hist_areas: number[];
  limit_stripes: { token: string; lo_db: number | null; hi_db: number | null }[];
}

export interface BoxplotsPayload {
  plots: BoxplotEntry[];
  dataset_hash: string;
}

export type ColorScaleKind = "linear" | "nonlinear" | "limits";

export interface ColorsPayload {
  band?: string;
  harmonic?: number;
  freq_hz?: number;
  scale: ColorScaleKind;
  values: (number | null)[];
  tokens: string[];
  dataset_hash: string;
}

export interface CampbellPayload {
  speeds_rpm: number[];
  bands: string[];
  levels_db: (number | null)[][];
  dataset_hash: string;
}

/** One palette variant: shade ramps per category, singles, diverging stops. */
export interface PaletteVariant {
  ACCEPT: string[];
  BORDER: string[];
  UNACCEPT: string[];
  UNDEFINED: string;
  NONE: string;
  MARK: string;
  DIVERGE_STOPS: string[];
}

export type PalettePayload = Record<string, PaletteVariant>;

/** Sorted explicit ids below the server's RLE threshold, inclusive runs above. */
export type CellMask = { cells: number[] } | { ranges: [number, number][] };

export interface SelectionPayload {
  selection: CellMask;
  region: string | null;
  band: string | null;
  harmonics: number[];
  frozen: boolean;
  dataset_hash: string;
}

export interface SelectionUpdate {
  clear?: boolean;
  cells?: number[];
  extend?: boolean;
  region?: string;
  band?: string;
  harmonics?: number[];
  frozen?: boolean;
  view_params?: Record<string, Record<string, unknown>>;
}

export interface GrowRequest {
  steps?: number;
  min_level_db?: number;
  band?: string;
}

export interface HighlightPayload {
  matrix_marks: [region: string, band: string][];
  harmonic_rows: Record<string, number[]> | null;
  details_intervals: [number, number][];
  mask: CellMask;
  dataset_hash: string;
}

export interface HarmonicsParams {
  region: string;
  band: string;
  rows?: number;
  sort?: SortMode;
  anchor?: number;
}

export interface MatrixParams {
  mode?: MatrixMode;
  shades?: number;
  rows?: number;
  kind?: BandKind;
}

export interface DetailsParams {
  region: string;
  band: string;
  abs?: number;
  pct?: number;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}
