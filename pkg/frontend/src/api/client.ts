import {
  ApiError,
  type BandKind,
  type BoxplotsPayload,
  type CampbellPayload,
  type CellMask,
  type ColorScaleKind,
  type ColorsPayload,
  type DatasetMeta,
  type DetailsParams,
  type DetailsPayload,
  type GrowRequest,
  type HarmonicsParams,
  type HarmonicsPayload,
  type HighlightPayload,
  type MatrixParams,
  type MatrixPayload,
  type MeshPayload,
  type PalettePayload,
  type SelectionPayload,
  type SelectionUpdate,
} from "./types";

/** Expand a server cell mask (explicit list or inclusive runs) into ids. */
export function decodeMask(mask: CellMask): number[] {
  if ("cells" in mask) return mask.cells.slice();
  const out: number[] = [];
  for (const [a, b] of mask.ranges) {
    for (let i = a; i <= b; i++) out.push(i);
  }
  return out;
}

function query(params: Record<string, unknown>): string {
  const q = new URLSearchParams();
  for (const [k, v] of Object.entries(params)) {
    if (v !== undefined && v !== null) q.set(k, String(v));
  }
  const s = q.toString();
  return s ? `?${s}` : "";
}

/**
 * Typed client for the analysis service.
 *
 * Concurrent GETs of the same URL are coalesced onto one in-flight request,
 * and every response's dataset hash is compared against the first one seen;
 * a change means the server swapped datasets and `onDatasetChanged` fires
 * so the application can refetch everything it shows.
 */
export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();
  private knownHash: string | null = null;

  onDatasetChanged: ((hash: string) => void) | null = null;

  constructor(
    private readonly base: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  get datasetHash(): string | null {
    return this.knownHash;
  }

  private checkHash(payload: unknown): void {
    const hash = (payload as { dataset_hash?: string }).dataset_hash;
    if (typeof hash !== "string") return;
    if (this.knownHash === null) {
      this.knownHash = hash;
    } else if (hash !== this.knownHash) {
      this.knownHash = hash;
      this.onDatasetChanged?.(hash);
    }
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.base + path, init);
    let body: unknown;
    try {
      body = await res.json();
    } catch {
      body = {};
    }
    if (!res.ok) {
      const detail = (body as { detail?: string }).detail ?? res.statusText;
      throw new ApiError(res.status, detail);
    }
    this.checkHash(body);
    return body as T;
  }

  private get<T>(path: string): Promise<T> {
    const pending = this.inflight.get(path);
    if (pending) return pending as Promise<T>;
    const p = this.request<T>(path).finally(() => this.inflight.delete(path));
    this.inflight.set(path, p);
    return p;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  meta(): Promise<DatasetMeta> {
    return this.get("/dataset/meta");
  }

  mesh(): Promise<MeshPayload> {
    return this.get("/dataset/mesh");
  }

  matrix(params: MatrixParams = {}): Promise<MatrixPayload> {
    return this.get(`/matrix${query({ ...params })}`);
  }

  harmonics(params: HarmonicsParams): Promise<HarmonicsPayload> {
    return this.get(`/harmonics${query({ ...params })}`);
  }

  details(params: DetailsParams): Promise<DetailsPayload> {
    return this.get(`/details${query({ ...params })}`);
  }

  boxplots(bands: string[], regions?: string[], split = false, bins?: number): Promise<BoxplotsPayload> {
    return this.get(
      `/boxplots${query({
        bands: bands.join(","),
        regions: regions?.join(","),
        split: split ? "true" : undefined,
        bins,
      })}`,
    );
  }

  colorsByBand(band: string, scale: ColorScaleKind, shades?: number): Promise<ColorsPayload> {
    return this.get(`/colors${query({ band, scale, shades })}`);
  }

  colorsByHarmonic(harmonic: number, scale: ColorScaleKind, shades?: number): Promise<ColorsPayload> {
    return this.get(`/colors${query({ harmonic, scale, shades })}`);
  }

  campbell(kind: BandKind = "third"): Promise<CampbellPayload> {
    return this.get(`/campbell${query({ kind })}`);
  }

  palette(): Promise<PalettePayload> {
    return this.get("/palette");
  }

  createSession(): Promise<{ id: string; dataset_hash: string }> {
    return this.post("/session", {});
  }

  getSelection(sid: string): Promise<SelectionPayload> {
    return this.request(`/session/${sid}/selection`);
  }

  postSelection(sid: string, update: SelectionUpdate): Promise<SelectionPayload> {
    return this.post(`/session/${sid}/selection`, update);
  }

  grow(sid: string, req: GrowRequest): Promise<SelectionPayload> {
    return this.post(`/session/${sid}/selection/grow`, req);
  }

  highlight(
    sid: string,
    panes: string[],
    echo: Record<string, string | number> = {},
  ): Promise<HighlightPayload> {
    return this.request(`/session/${sid}/highlight${query({ panes: panes.join(","), ...echo })}`);
  }
}
