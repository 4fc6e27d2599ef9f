import type { ApiClient } from "./api/client";
import { decodeMask } from "./api/client";
import type {
  DatasetMeta,
  DetailsPayload,
  HarmonicsPayload,
  MeshPayload,
} from "./api/types";
import { ApiError } from "./api/types";
import { TokenColors } from "./colors";
import { clear, el } from "./panes/dom";
import { BoxplotsPane } from "./panes/boxplots";
import { DetailsPane, type BarName } from "./panes/details";
import { GrowDialog } from "./panes/growDialog";
import { HarmonicsPane } from "./panes/harmonics";
import { MatrixPane } from "./panes/matrix";
import { decodeHash, encodeHash, Store } from "./state/store";
import { buildSharedMesh, type SharedMesh } from "./three/cellMesh";
import { CameraLink } from "./three/cameraLink";
import { MeshView, webglSurface, type SurfaceFactory } from "./three/meshView";

export interface AppOptions {
  surfaceFactory?: SurfaceFactory;
  /** window-ish object for URL hash sync; defaults to the real window */
  win?: Pick<Window, "location" | "addEventListener">;
}

/**
 * Coordinated multiple views over one analysis session.
 *
 * The drill-down block (matrix, harmonics, details) stays docked top-left,
 * 3D surface views fill the right grid, boxplots sit below. Every pane
 * renders server numbers only; selections round-trip through the session
 * so all panes highlight consistently.
 */
export class App {
  readonly store = new Store();
  readonly cameraLink = new CameraLink();
  readonly meshViews: MeshView[] = [];
  readonly ready: Promise<void>;

  matrixPane!: MatrixPane;
  harmonicsPane!: HarmonicsPane;
  detailsPane!: DetailsPane;
  boxplotsPane!: BoxplotsPane;
  growDialog!: GrowDialog;

  meta!: DatasetMeta;
  colors!: TokenColors;
  private meshPayload!: MeshPayload;
  private shared!: SharedMesh;
  private sessionId = "";
  private viewsGrid!: HTMLElement;
  private toast!: HTMLElement;
  private linkCheckbox!: HTMLInputElement;
  private harmonicsShown: HarmonicsPayload | null = null;
  private harmonicsSeq = 0;
  private readonly surfaceFactory: SurfaceFactory;
  private readonly win: Pick<Window, "location" | "addEventListener">;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ApiClient,
    options: AppOptions = {},
  ) {
    this.surfaceFactory = options.surfaceFactory ?? webglSurface;
    this.win = options.win ?? window;
    this.client.onDatasetChanged = () => {
      this.showError("dataset changed on the server, reloading views");
      void this.reloadAll();
    };
    this.ready = this.boot();
  }

  private async boot(): Promise<void> {
    const [meta, meshPayload, paletteResp, session] = await Promise.all([
      this.client.meta(),
      this.client.mesh(),
      this.client.palette(),
      this.client.createSession(),
    ]);
    this.meta = meta;
    this.meshPayload = meshPayload;
    this.colors = new TokenColors(paletteResp);
    this.sessionId = session.id;
    this.shared = buildSharedMesh(meshPayload);
    this.buildLayout();
    await this.refreshMatrix();
    await this.refreshBoxplots();
    const initial = decodeHash(this.win.location.hash);
    if (initial.mode) this.store.settings.matrixMode = initial.mode;
    if (initial.region && initial.band) {
      await this.selectCell(initial.region, initial.band);
    }
    this.win.addEventListener("hashchange", () => void this.onHashChange());
  }

  // -- layout ---------------------------------------------------------------

  private buildLayout(): void {
    clear(this.root);
    this.root.classList.add("app");

    const drill = el("div", "drill-block");
    const matrixBox = el("div", "matrix-box");
    matrixBox.appendChild(this.matrixToolbar());
    this.matrixPane = new MatrixPane(matrixBox, this.colors, {
      onHover: (r, b) => void this.hover(r, b),
      onSelect: (r, b) => void this.selectCell(r, b),
    });
    drill.appendChild(matrixBox);

    const harmBox = el("div", "harmonics-box");
    this.harmonicsPane = new HarmonicsPane(harmBox, this.colors, {
      onHarmonicClick: (h) => void this.toggleHarmonic(h),
      onSortToggle: () => void this.toggleSort(),
    });
    drill.appendChild(harmBox);

    const detailsBox = el("div", "details-box");
    this.detailsPane = new DetailsPane(detailsBox, this.colors, {
      onBarClick: (bar, frac) => void this.refineFromBar(bar, frac),
      onTopPctChange: (pct) => void this.refreshDetails({ pct }),
    });
    drill.appendChild(detailsBox);
    this.root.appendChild(drill);

    const viewsBox = el("div", "views-block");
    viewsBox.appendChild(this.viewsToolbar());
    this.viewsGrid = el("div", "views-grid");
    viewsBox.appendChild(this.viewsGrid);
    this.root.appendChild(viewsBox);

    const boxplotsBox = el("div", "boxplots-block");
    this.boxplotsPane = new BoxplotsPane(boxplotsBox, this.colors);
    this.root.appendChild(boxplotsBox);

    this.growDialog = new GrowDialog(this.root, (req) => void this.grow(req));
    this.toast = el("div", "toast hidden");
    this.root.appendChild(this.toast);
  }

  private matrixToolbar(): HTMLElement {
    const bar = el("div", "pane-toolbar");
    bar.appendChild(el("span", "pane-title", this.meta.label || "overview"));

    const mode = el("select", "matrix-mode");
    for (const m of ["limits", "two-tone", "discrete-limits", "combined", "raw"]) {
      const opt = el("option", undefined, m);
      opt.value = m;
      mode.appendChild(opt);
    }
    mode.value = this.store.settings.matrixMode;
    mode.addEventListener("change", () => {
      this.store.settings.matrixMode = mode.value as typeof this.store.settings.matrixMode;
      this.syncHash();
      void this.refreshMatrix();
    });
    bar.appendChild(mode);

    const kind = el("select", "matrix-kind");
    for (const k of ["third", "octave"]) {
      const opt = el("option", undefined, k);
      opt.value = k;
      kind.appendChild(opt);
    }
    kind.value = this.store.settings.matrixKind;
    kind.addEventListener("change", () => {
      this.store.settings.matrixKind = kind.value as "third" | "octave";
      void this.refreshMatrix();
    });
    bar.appendChild(kind);

    const shades = el("input", "matrix-shades");
    shades.type = "number";
    shades.min = "1";
    shades.max = "8";
    shades.value = String(this.store.settings.shades);
    shades.addEventListener("change", () => {
      this.store.settings.shades = Math.max(1, Number(shades.value) || 3);
      void this.refreshMatrix();
    });
    bar.appendChild(shades);

    if (this.meta.counts.out_of_band > 0) {
      const oob = el("button", "oob-button", `out of band (${this.meta.counts.out_of_band})`);
      oob.addEventListener("click", () => void this.loadHarmonics("TOTAL", "OUT_OF_BAND", false));
      bar.appendChild(oob);
    }
    return bar;
  }

  private viewsToolbar(): HTMLElement {
    const bar = el("div", "pane-toolbar");
    bar.appendChild(el("span", "pane-title", "3D views"));

    const linkLabel = el("label", "camera-link-label");
    this.linkCheckbox = el("input");
    this.linkCheckbox.type = "checkbox";
    this.linkCheckbox.checked = this.store.settings.cameraLink;
    this.linkCheckbox.addEventListener("change", () => {
      this.store.settings.cameraLink = this.linkCheckbox.checked;
      this.cameraLink.setEnabled(this.linkCheckbox.checked);
      this.cameraLink.renderAll();
    });
    linkLabel.appendChild(this.linkCheckbox);
    linkLabel.appendChild(document.createTextNode(" link cameras"));
    bar.appendChild(linkLabel);

    const grow = el("button", "grow-button", "grow...");
    grow.addEventListener("click", () => this.growDialog.open(this.store.selection.band));
    bar.appendChild(grow);

    // placeholder: operating deflection shape playback is not in this build
    const deform = el("button", "deform-button", "animate deformation");
    deform.disabled = true;
    deform.title = "deformation playback is not available in this build";
    bar.appendChild(deform);
    return bar;
  }

  // -- interactions -----------------------------------------------------------

  /** Matrix hover previews the harmonics pane unless a selection is frozen. */
  async hover(region: string | null, band: string | null): Promise<void> {
    if (this.store.selection.frozen) return;
    if (!region || !band) {
      this.store.hover = null;
      return;
    }
    if (this.store.settings.matrixKind !== "third") return; // drill-down is per third band
    this.store.hover = { region, band };
    await this.loadHarmonics(region, band, true);
  }

  /** Matrix click: freeze the drill-down on one region x band. */
  async selectCell(region: string, band: string): Promise<void> {
    try {
      const sel = this.store.selection;
      if (sel.frozen && sel.region === region && sel.band === band) {
        // second click unfreezes, back to hover-preview mode
        await this.postSelection({ frozen: false });
        return;
      }
      await this.postSelection({ region, band, frozen: true });
      this.syncHash();
      await Promise.all([
        this.loadHarmonics(region, band, false),
        this.refreshDetails({}),
        this.openCriticalViews(band),
        this.refreshBoxplots(),
      ]);
      await this.applyHighlight();
    } catch (err) {
      this.surfaceError(err);
    }
  }

  async toggleHarmonic(harmonic: number): Promise<void> {
    const sel = this.store.selection;
    if (!sel.region || !sel.band) return;
    try {
      const next = sel.harmonics.includes(harmonic)
        ? sel.harmonics.filter((h) => h !== harmonic)
        : [...sel.harmonics, harmonic];
      await this.postSelection({ region: sel.region, band: sel.band, harmonics: next });
      await this.applyHighlight();
    } catch (err) {
      this.surfaceError(err);
    }
  }

  async toggleSort(): Promise<void> {
    const shown = this.harmonicsShown;
    if (!shown) return;
    const s = this.store.settings;
    s.sortMode = s.sortMode === "individual" ? "by-selection" : "individual";
    await this.loadHarmonics(shown.region, shown.band, false);
  }

  /** 3D pick: select (or extend by) the cell under the pointer. */
  async pickCell(cellId: number, extend: boolean): Promise<void> {
    try {
      await this.postSelection({ cells: [cellId], extend });
      await this.applyHighlight();
    } catch (err) {
      this.surfaceError(err);
    }
  }

  async grow(req: { steps: number; minLevelDb: number | null; gateByBand: boolean }): Promise<void> {
    try {
      const body: { steps: number; min_level_db?: number; band?: string } = { steps: req.steps };
      if (req.minLevelDb !== null) body.min_level_db = req.minLevelDb;
      if (req.gateByBand && this.store.selection.band) body.band = this.store.selection.band;
      const sel = await this.client.grow(this.sessionId, body);
      this.storeSelection(sel);
      await this.applyHighlight();
    } catch (err) {
      this.surfaceError(err);
    }
  }

  /**
   * Details bar click -> selection refinement using served values only:
   * the categories bar maps to the verdict's dB interval against the
   * served per-cell limit, the other bars map the clicked point to the
   * loudest-area share it sits in.
   */
  async refineFromBar(bar: BarName, fraction: number): Promise<void> {
    const shown = this.detailsPane.shown;
    if (!shown) return;
    try {
      const colors = await this.client.colorsByBand(shown.band, "nonlinear");
      const regionIdx = this.meshPayload.region_names.indexOf(shown.region);
      const ids: number[] = [];
      for (let c = 0; c < this.meshPayload.cell_region.length; c++) {
        if (shown.region === "TOTAL" || this.meshPayload.cell_region[c] === regionIdx) {
          ids.push(c);
        }
      }
      const value = (c: number) => colors.values[c];
      let chosen: number[];
      if (bar === "categories") {
        chosen = this.cellsOfCategory(shown, fraction, ids, value);
      } else {
        const share = this.loudShare(bar, shown, fraction);
        if (share === null) return;
        chosen = this.loudestCells(ids, value, share);
      }
      if (chosen.length === 0) return;
      await this.postSelection({ cells: chosen });
      await this.applyHighlight();
    } catch (err) {
      this.surfaceError(err);
    }
  }

  private loudShare(bar: BarName, shown: DetailsPayload, fraction: number): number | null {
    // bars render quiet end first; the loud share starts where NONE ends
    if (bar === "all") return 1 - fraction;
    if (bar === "top") {
      const share = shown.top_pct / 100;
      return fraction >= 1 - share ? share : null;
    }
    const none = shown.bars.threshold.find(([token]) => token === "NONE");
    const covered = 1 - (none ? none[1] : 0);
    return fraction >= 1 - covered ? covered : null;
  }

  private cellsOfCategory(
    shown: DetailsPayload,
    fraction: number,
    ids: number[],
    value: (c: number) => number | null | undefined,
  ): number[] {
    // locate the clicked stripe, then turn its category into a dB interval
    let acc = 0;
    let token = "";
    for (const [t, f] of shown.bars.categories) {
      acc += f;
      if (fraction <= acc + 1e-12) {
        token = t;
        break;
      }
    }
    const third = this.meta.bands.third.find((b) => b.nominal === shown.band);
    const limit = third?.discrete_limit_db;
    if (limit === null || limit === undefined) return [];
    const width = this.meta.borderline_width_db;
    let lo = -Infinity;
    let hi = Infinity;
    if (token.startsWith("ACCEPT")) hi = limit;
    else if (token.startsWith("BORDER")) [lo, hi] = [limit, limit + width];
    else if (token.startsWith("UNACCEPT")) lo = limit + width;
    else return [];
    return ids.filter((c) => {
      const v = value(c);
      return v !== null && v !== undefined && v >= lo && v < hi;
    });
  }

  private loudestCells(
    ids: number[],
    value: (c: number) => number | null | undefined,
    share: number,
  ): number[] {
    const usable = ids.filter((c) => value(c) !== null && value(c) !== undefined);
    usable.sort((a, b) => (value(b)! - value(a)!) || a - b);
    const areas = this.meshPayload.areas;
    const total = usable.reduce((s, c) => s + areas[c]!, 0);
    const out: number[] = [];
    let acc = 0;
    for (const c of usable) {
      if (acc / total >= share - 1e-12) break;
      out.push(c);
      acc += areas[c]!;
    }
    return out;
  }

  // -- data loading -----------------------------------------------------------

  async refreshMatrix(): Promise<void> {
    const s = this.store.settings;
    const payload = await this.client.matrix({
      mode: s.matrixMode,
      shades: s.shades,
      rows: s.matrixRows,
      kind: s.matrixKind,
    });
    this.matrixPane.render(payload);
    await this.cacheViewParams();
  }

  async loadHarmonics(region: string, band: string, preview: boolean): Promise<void> {
    const seq = ++this.harmonicsSeq;
    const s = this.store.settings;
    try {
      const params: Parameters<ApiClient["harmonics"]>[0] = {
        region,
        band,
        rows: s.harmonicsRows,
        sort: s.sortMode,
      };
      if (s.sortMode === "by-selection") {
        const anchor = this.store.selection.harmonics[0] ?? this.harmonicsShown?.columns[0]?.harmonic;
        if (anchor === undefined) {
          s.sortMode = "individual";
        } else {
          params.anchor = anchor;
        }
        params.sort = s.sortMode;
      }
      const payload = await this.client.harmonics(params);
      if (seq !== this.harmonicsSeq) return; // a newer request superseded this one
      this.harmonicsShown = payload;
      this.harmonicsPane.render(payload, preview);
      if (!preview) await this.cacheViewParams();
    } catch (err) {
      if (seq === this.harmonicsSeq) this.surfaceError(err);
    }
  }

  async refreshDetails(opts: { pct?: number; abs?: number }): Promise<void> {
    const sel = this.store.selection;
    if (!sel.region || !sel.band) return;
    try {
      const payload = await this.client.details({
        region: sel.region,
        band: sel.band,
        pct: opts.pct,
        abs: opts.abs,
      });
      this.detailsPane.render(payload);
      await this.cacheViewParams();
    } catch (err) {
      this.surfaceError(err);
    }
  }

  async refreshBoxplots(): Promise<void> {
    const band = this.store.selection.band;
    try {
      if (band) {
        this.boxplotsPane.render(await this.client.boxplots([band], undefined, true));
      } else {
        // no selection: pool every limited band over the whole surface
        const limited = this.meta.bands.third
          .filter((b) => b.integral_limit_db !== null && b.integral_limit_db !== undefined)
          .map((b) => b.nominal)
          .slice(0, 6);
        if (limited.length > 0) {
          this.boxplotsPane.render(await this.client.boxplots(limited));
        }
      }
    } catch (err) {
      this.surfaceError(err);
    }
  }

  /**
   * Open one 3D view per most critical harmonic of the band: ranked by the
   * served TOTAL integral level of each harmonic, loudest first.
   */
  async openCriticalViews(band: string): Promise<void> {
    const ranking = await this.client.harmonics({ region: "TOTAL", band, rows: 1 });
    const ranked = ranking.columns
      .filter((c) => c.integral_db !== null)
      .sort((a, b) => (b.integral_db! - a.integral_db!) || a.harmonic - b.harmonic)
      .slice(0, this.store.settings.autoViews);

    while (this.meshViews.length > ranked.length) {
      const view = this.meshViews.pop()!;
      this.cameraLink.unregister(view);
      view.dispose();
    }
    while (this.meshViews.length < ranked.length) {
      const view = new MeshView(this.viewsGrid, this.shared, this.surfaceFactory, {
        onPick: (cell, extend) => void this.pickCell(cell, extend),
        onPoseChange: () => this.cameraLink.renderAll(),
      });
      view.surface.setMaskTint(this.colors.rgb("MARK"));
      this.cameraLink.register(view);
      this.meshViews.push(view);
    }
    this.cameraLink.setEnabled(this.store.settings.cameraLink);

    const s = this.store.settings;
    await Promise.all(
      ranked.map(async (col, i) => {
        const view = this.meshViews[i]!;
        const colors = await this.client.colorsByHarmonic(col.harmonic, s.colorScale, s.shades);
        view.setLabel(`h${col.harmonic}  ${col.freq_hz.toFixed(1)} Hz`);
        view.setColors(colors.tokens, this.colors);
      }),
    );
    this.cameraLink.renderAll();
  }

  // -- session plumbing -------------------------------------------------------

  private async postSelection(update: Parameters<ApiClient["postSelection"]>[1]): Promise<void> {
    const body = { ...update, view_params: this.viewParams() };
    const sel = await this.client.postSelection(this.sessionId, body);
    this.storeSelection(sel);
  }

  private storeSelection(sel: {
    selection: Parameters<typeof decodeMask>[0];
    region: string | null;
    band: string | null;
    harmonics: number[];
    frozen: boolean;
  }): void {
    this.store.selection = {
      region: sel.region,
      band: sel.band,
      harmonics: sel.harmonics,
      cells: decodeMask(sel.selection),
      frozen: sel.frozen,
    };
    this.store.notify();
  }

  private viewParams(): Record<string, Record<string, unknown>> {
    const params: Record<string, Record<string, unknown>> = {
      matrix: { kind: this.store.settings.matrixKind },
    };
    const shown = this.harmonicsShown;
    if (shown) {
      params["harmonics"] = {
        region: shown.region,
        band: shown.band,
        rows: shown.rows,
        sort: shown.sort,
        ...(shown.anchor !== null ? { anchor: shown.anchor } : {}),
      };
    }
    const details = this.detailsPane.shown;
    if (details) {
      params["details"] = { region: details.region, band: details.band };
    }
    return params;
  }

  private async cacheViewParams(): Promise<void> {
    const sel = await this.client.postSelection(this.sessionId, { view_params: this.viewParams() });
    this.storeSelection(sel);
  }

  /** Project the session selection into every pane. */
  async applyHighlight(): Promise<void> {
    const echo: Record<string, string | number> = {};
    const shown = this.harmonicsShown;
    if (shown) {
      echo["harmonics_region"] = shown.region;
      echo["harmonics_band"] = shown.band;
      echo["harmonics_rows"] = shown.rows;
      echo["harmonics_sort"] = shown.sort;
      if (shown.anchor !== null) echo["harmonics_anchor"] = shown.anchor;
    }
    const details = this.detailsPane.shown;
    if (details) {
      echo["details_region"] = details.region;
      echo["details_band"] = details.band;
    }
    echo["matrix_kind"] = this.store.settings.matrixKind;
    const panes = ["matrix", "mesh", ...(shown ? ["harmonics"] : []), ...(details ? ["details"] : [])];
    try {
      const payload = await this.client.highlight(this.sessionId, panes, echo);
      this.matrixPane.setMarks(payload.matrix_marks);
      this.harmonicsPane.setHighlight(payload.harmonic_rows);
      this.detailsPane.setIntervals(payload.details_intervals);
      const cells = decodeMask(payload.mask);
      for (const view of this.meshViews) view.setMask(cells);
      this.cameraLink.renderAll();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // layout drifted from the session cache; re-cache and retry once
        await this.cacheViewParams();
        const payload = await this.client.highlight(this.sessionId, panes, echo);
        this.matrixPane.setMarks(payload.matrix_marks);
        this.harmonicsPane.setHighlight(payload.harmonic_rows);
        this.detailsPane.setIntervals(payload.details_intervals);
        const cells = decodeMask(payload.mask);
        for (const view of this.meshViews) view.setMask(cells);
        this.cameraLink.renderAll();
        return;
      }
      throw err;
    }
  }

  // -- URL hash ---------------------------------------------------------------

  private syncHash(): void {
    const sel = this.store.selection;
    const next = encodeHash({
      region: sel.region ?? undefined,
      band: sel.band ?? undefined,
      mode: this.store.settings.matrixMode,
    });
    if (this.win.location.hash !== next) this.win.location.hash = next;
  }

  private async onHashChange(): Promise<void> {
    const state = decodeHash(this.win.location.hash);
    if (state.mode && state.mode !== this.store.settings.matrixMode) {
      this.store.settings.matrixMode = state.mode;
      await this.refreshMatrix();
    }
    const sel = this.store.selection;
    if (state.region && state.band && (state.region !== sel.region || state.band !== sel.band)) {
      await this.selectCell(state.region, state.band);
    }
  }

  // -- errors / reload ----------------------------------------------------------

  private surfaceError(err: unknown): void {
    const msg = err instanceof ApiError ? err.detail : String(err);
    this.showError(msg);
  }

  showError(message: string): void {
    this.toast.textContent = message;
    this.toast.classList.remove("hidden");
    setTimeout(() => this.toast.classList.add("hidden"), 4000);
  }

  private async reloadAll(): Promise<void> {
    this.meta = await this.client.meta();
    await this.refreshMatrix();
    const sel = this.store.selection;
    if (sel.region && sel.band) {
      await Promise.all([
        this.loadHarmonics(sel.region, sel.band, false),
        this.refreshDetails({}),
        this.refreshBoxplots(),
      ]);
    }
  }
}
