import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api/client";
import { App } from "../src/app";
import { startServer, type LiveServer } from "./helpers/server";
import { stubFactory, type StubSurface } from "./helpers/stub";

// End-to-end drill-down against a real service process: select a band,
// watch the harmonics pane and the auto-opened 3D views fill in, pick a
// cell in 3D and check the highlight lands in every pane. No dB math
// happens on this side; every asserted number came over the wire.

const HOT_REGION = "BOTTOM";
const HOT_BAND = "500";

let server: LiveServer;
let app: App;
let surfaces: StubSurface[];
let cellsByRegion: Map<string, number[]>;

beforeAll(async () => {
  server = await startServer();
  const client = new ApiClient(server.baseUrl);

  // region -> cell ids straight from the wire, for aiming picks later
  const mesh = await client.mesh();
  cellsByRegion = new Map(mesh.region_names.map((name) => [name, [] as number[]]));
  mesh.cell_region.forEach((r, c) => cellsByRegion.get(mesh.region_names[r]!)!.push(c));

  document.body.innerHTML = '<div id="app"></div>';
  const stub = stubFactory();
  surfaces = stub.surfaces;
  app = new App(document.getElementById("app")!, client, { surfaceFactory: stub.factory });
  await app.ready;
});

afterAll(() => {
  server?.stop();
});

async function waitFor(assertion: () => void, timeoutMs = 10_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      assertion();
      return;
    } catch (err) {
      if (Date.now() > deadline) throw err;
      await new Promise((r) => setTimeout(r, 50));
    }
  }
}

describe("drill-down flow", () => {
  it("boots with the overview matrix and no 3D views", () => {
    const rows = document.querySelectorAll(".matrix-row:not(.matrix-header)");
    expect(rows.length).toBe(7); // TOTAL plus six box faces
    expect(app.meshViews.length).toBe(0);
    expect(app.meta.counts.cells).toBe(6 * 6 * 6);
  });

  it("clicking a matrix cell freezes the drill-down on that band", async () => {
    const cell = app.matrixPane.cellAt(HOT_REGION, HOT_BAND);
    expect(cell).not.toBeNull();
    cell!.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await waitFor(() => {
      expect(app.harmonicsPane.shown).toEqual({ region: HOT_REGION, band: HOT_BAND });
      expect(app.store.selection.frozen).toBe(true);
      expect(app.meshViews.length).toBe(3);
      expect(app.detailsPane.shown).not.toBeNull();
    });
  });

  it("shows one column per harmonic inside the band", () => {
    const cols = document.querySelectorAll(".harmonic-column");
    expect(cols.length).toBe(3); // 33.33 Hz fundamental puts h14..h16 in the 500 band
    const heads = [...cols].map((c) => c.querySelector(".harmonic-head")!.textContent);
    expect(heads).toEqual(["h14", "h15", "h16"]);
  });

  it("opens linked 3D views for the most critical harmonics", () => {
    // the planted hot spot at exactly 500 Hz makes h15 the loudest by far
    expect(app.meshViews[0]!.label.startsWith("h15")).toBe(true);
    const labels = app.meshViews.map((v) => v.label.split(" ")[0]);
    expect(new Set(labels)).toEqual(new Set(["h14", "h15", "h16"]));

    // each view owns a color field and the fields differ across harmonics
    const colorsOf = (i: number) => [
      ...(app.meshViews[i]!.surface.geometry.getAttribute("color").array as Float32Array),
    ];
    expect(colorsOf(0)).not.toEqual(colorsOf(1));
    expect(colorsOf(0).length).toBe(colorsOf(1).length);

    // and the injected render surfaces actually drew frames
    expect(surfaces.length).toBe(3);
    for (const s of surfaces) expect(s.frames).toBeGreaterThan(0);
  });

  it("encodes the selection in the URL hash", () => {
    expect(window.location.hash).toContain(`region=${HOT_REGION}`);
    expect(window.location.hash).toContain(`band=${HOT_BAND}`);
    expect(window.location.hash).toContain("mode=limits");
  });

  it("details pane shows the served summary for the selection", () => {
    const shown = app.detailsPane.shown!;
    expect(shown.region).toBe(HOT_REGION);
    expect(shown.band).toBe(HOT_BAND);
    expect(shown.summary.n_cells).toBe(36);
    const fracSum = shown.bars.categories.reduce((s, [, f]) => s + f, 0);
    expect(fracSum).toBeCloseTo(1.0, 6);
  });

  it("raycast picking returns the aimed cell on the visible face", () => {
    // the default camera looks down from above, so TOP cells are unoccluded
    const cellId = cellsByRegion.get("TOP")![0]!;
    const view = app.meshViews[0]!;
    const ndc = view.projectCell(cellId);
    expect(view.pickAtNdc(ndc.x, ndc.y)).toBe(cellId);
  });

  it("picking a cell highlights rows in the harmonics pane and the matrix", async () => {
    const bottomCells = cellsByRegion.get(HOT_REGION)!;
    const picked = bottomCells[Math.floor(bottomCells.length / 2)]!;
    await app.pickCell(picked, false);

    // the session collapsed the spatial selection to the picked cell
    expect(app.store.selection.cells).toEqual([picked]);

    // matrix marks pair every region containing the cell with the band
    const marked = [...document.querySelectorAll<HTMLElement>(".matrix-cell.marked")].map((n) => [
      n.dataset["region"],
      n.dataset["band"],
    ]);
    expect(marked).toContainEqual(["TOTAL", HOT_BAND]);
    expect(marked).toContainEqual([HOT_REGION, HOT_BAND]);
    expect(marked.every(([, band]) => band === HOT_BAND)).toBe(true);

    // every harmonic column highlights the row holding the cell
    const hlRows = document.querySelectorAll(".harmonic-row.hl");
    expect(hlRows.length).toBeGreaterThanOrEqual(3);

    // the 3D mask shows exactly that cell in every view
    for (const view of app.meshViews) {
      expect(view.surface.maskedCells.has(picked)).toBe(true);
      expect(view.surface.maskedCells.size).toBe(1);
    }
  });

  it("grow expands the picked cell over its neighbors", async () => {
    expect(app.store.selection.cells.length).toBe(1);
    await app.grow({ steps: 1, minLevelDb: null, gateByBand: false });
    const after = app.store.selection.cells.length;
    expect(after).toBeGreaterThan(1);
    expect(after).toBeLessThanOrEqual(5); // one step adds at most the edge ring of a quad
    for (const view of app.meshViews) {
      expect(view.surface.maskedCells.size).toBe(after);
    }
  });

  it("keeps camera poses identical across views while linked", () => {
    expect(app.cameraLink.enabled).toBe(true);
    app.meshViews[0]!.rotate(0.4, -0.2);
    app.meshViews[1]!.dolly(1.3);
    const mats = app.meshViews.map((v) => {
      v.pose.applyTo(v.camera);
      return [...v.camera.matrixWorld.elements];
    });
    expect(mats[1]).toEqual(mats[0]);
    expect(mats[2]).toEqual(mats[0]);
  });

  it("unlinking lets poses diverge, relinking snaps them back together", () => {
    const checkbox = document.querySelector<HTMLInputElement>(".camera-link-label input")!;
    checkbox.checked = false;
    checkbox.dispatchEvent(new Event("change", { bubbles: true }));
    expect(app.cameraLink.enabled).toBe(false);

    app.meshViews[0]!.rotate(1.0, 0.0);
    expect(app.meshViews[0]!.pose.equals(app.meshViews[1]!.pose)).toBe(false);

    checkbox.checked = true;
    checkbox.dispatchEvent(new Event("change", { bubbles: true }));
    expect(app.cameraLink.enabled).toBe(true);
    expect(app.meshViews[0]!.pose.equals(app.meshViews[1]!.pose)).toBe(true);
  });

  it("surfaces service errors in the toast instead of crashing", async () => {
    await app.loadHarmonics("NO_SUCH_REGION", HOT_BAND, false);
    const toast = document.querySelector(".toast")!;
    expect(toast.classList.contains("hidden")).toBe(false);
    expect(toast.textContent).toContain("NO_SUCH_REGION");
  });

  it("serves byte-identical responses for repeated reads", async () => {
    const url = `${server.baseUrl}/matrix?mode=limits&shades=3&rows=4&kind=third`;
    const a = await (await fetch(url)).text();
    const b = await (await fetch(url)).text();
    expect(a).toBe(b);
  });
});
