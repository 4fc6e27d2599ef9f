import * as THREE from "three";
import type { MeshPayload } from "../api/types";
import type { Rgb, TokenColors } from "../colors";

/**
 * Geometry shared by every 3D view of one dataset.
 *
 * Cells are triangulated fan-wise (quads become two triangles) into a
 * non-indexed position buffer, so colors can be flat per cell: a cell's
 * triangles get identical vertex colors and nothing interpolates across
 * cell borders. The position attribute is built once and shared between
 * views; only color attributes are per view.
 */
export interface SharedMesh {
  position: THREE.BufferAttribute;
  /** triangle index -> cell id, for picking */
  triToCell: Uint32Array;
  /** cell id -> first vertex of its triangle run; length nCells + 1 */
  cellVertStart: Uint32Array;
  /** cell centroids, 3 floats per cell */
  centroids: Float32Array;
  nCells: number;
  /** bounding sphere of the whole surface, for camera framing */
  center: THREE.Vector3;
  radius: number;
}

export function buildSharedMesh(payload: MeshPayload): SharedMesh {
  const nCells = payload.cells.length;
  let nTris = 0;
  for (const cell of payload.cells) nTris += cell.length - 2;

  const positions = new Float32Array(nTris * 9);
  const triToCell = new Uint32Array(nTris);
  const cellVertStart = new Uint32Array(nCells + 1);
  const centroids = new Float32Array(nCells * 3);

  const box = new THREE.Box3();
  const v = new THREE.Vector3();
  let tri = 0;
  let vert = 0;
  payload.cells.forEach((cell, c) => {
    cellVertStart[c] = vert;
    let cx = 0;
    let cy = 0;
    let cz = 0;
    for (const vi of cell) {
      const p = payload.vertices[vi]!;
      cx += p[0]!;
      cy += p[1]!;
      cz += p[2]!;
      box.expandByPoint(v.set(p[0]!, p[1]!, p[2]!));
    }
    centroids[c * 3] = cx / cell.length;
    centroids[c * 3 + 1] = cy / cell.length;
    centroids[c * 3 + 2] = cz / cell.length;

    for (let k = 1; k < cell.length - 1; k++) {
      triToCell[tri++] = c;
      for (const vi of [cell[0]!, cell[k]!, cell[k + 1]!]) {
        const p = payload.vertices[vi]!;
        positions[vert * 3] = p[0]!;
        positions[vert * 3 + 1] = p[1]!;
        positions[vert * 3 + 2] = p[2]!;
        vert++;
      }
    }
  });
  cellVertStart[nCells] = vert;

  const center = new THREE.Vector3();
  box.getCenter(center);
  const radius = box.getSize(new THREE.Vector3()).length() / 2 || 1;

  return {
    position: new THREE.BufferAttribute(positions, 3),
    triToCell,
    cellVertStart,
    centroids,
    nCells,
    center,
    radius,
  };
}

const MASK_BLEND = 0.65;

/**
 * One view's colored instance of the shared geometry. Owns its color
 * buffer; masking blends the selection tint over the base colors without
 * touching them, so clearing the mask is exact.
 */
export class CellSurface {
  readonly geometry: THREE.BufferGeometry;
  readonly mesh: THREE.Mesh;
  private readonly colors: Float32Array;
  private readonly base: Float32Array;
  private masked = new Set<number>();
  private maskTint = new THREE.Color(1.0, 0.35, 0.0);

  constructor(private readonly shared: SharedMesh) {
    this.geometry = new THREE.BufferGeometry();
    this.geometry.setAttribute("position", shared.position);
    const nVerts = shared.position.count;
    this.colors = new Float32Array(nVerts * 3);
    this.base = new Float32Array(nVerts * 3);
    this.colors.fill(0.7);
    this.base.fill(0.7);
    this.geometry.setAttribute("color", new THREE.BufferAttribute(this.colors, 3));
    const material = new THREE.MeshBasicMaterial({
      vertexColors: true,
      side: THREE.DoubleSide,
    });
    this.mesh = new THREE.Mesh(this.geometry, material);
  }

  /** Flat color per cell from served tokens and the server palette. */
  setColors(tokens: string[], colors: TokenColors): void {
    const { cellVertStart, nCells } = this.shared;
    for (let c = 0; c < nCells; c++) {
      const rgb = colors.rgb(tokens[c] ?? "");
      const r = rgb[0] / 255;
      const g = rgb[1] / 255;
      const b = rgb[2] / 255;
      for (let vtx = cellVertStart[c]!; vtx < cellVertStart[c + 1]!; vtx++) {
        this.base[vtx * 3] = r;
        this.base[vtx * 3 + 1] = g;
        this.base[vtx * 3 + 2] = b;
      }
    }
    this.repaint();
  }

  setMask(cellIds: Iterable<number>): void {
    this.masked = new Set(cellIds);
    this.repaint();
  }

  /** Selection tint, normally the palette's MARK color. */
  setMaskTint(rgb: Rgb): void {
    this.maskTint = new THREE.Color(rgb[0] / 255, rgb[1] / 255, rgb[2] / 255);
    if (this.masked.size > 0) this.repaint();
  }

  get maskedCells(): ReadonlySet<number> {
    return this.masked;
  }

  private repaint(): void {
    const { cellVertStart, nCells } = this.shared;
    this.colors.set(this.base);
    for (const c of this.masked) {
      if (c < 0 || c >= nCells) continue;
      for (let vtx = cellVertStart[c]!; vtx < cellVertStart[c + 1]!; vtx++) {
        const i = vtx * 3;
        this.colors[i] = this.colors[i]! * (1 - MASK_BLEND) + this.maskTint.r * MASK_BLEND;
        this.colors[i + 1] = this.colors[i + 1]! * (1 - MASK_BLEND) + this.maskTint.g * MASK_BLEND;
        this.colors[i + 2] = this.colors[i + 2]! * (1 - MASK_BLEND) + this.maskTint.b * MASK_BLEND;
      }
    }
    (this.geometry.getAttribute("color") as THREE.BufferAttribute).needsUpdate = true;
  }

  /** Cell under the ray, or null. */
  pick(raycaster: THREE.Raycaster): number | null {
    const hits = raycaster.intersectObject(this.mesh, false);
    const hit = hits[0];
    if (!hit || hit.faceIndex === undefined || hit.faceIndex === null) return null;
    const cell = this.shared.triToCell[hit.faceIndex];
    return cell === undefined ? null : cell;
  }

  centroidOf(cellId: number): THREE.Vector3 {
    return new THREE.Vector3(
      this.shared.centroids[cellId * 3]!,
      this.shared.centroids[cellId * 3 + 1]!,
      this.shared.centroids[cellId * 3 + 2]!,
    );
  }
}
