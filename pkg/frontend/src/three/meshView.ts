import * as THREE from "three";
import type { TokenColors } from "../colors";
import { CellSurface, type SharedMesh } from "./cellMesh";

/**
 * The slice of a renderer a view needs. Production wraps
 * THREE.WebGLRenderer; tests inject a recording stub, everything else
 * (cameras, picking, colors) is plain math and runs headless.
 */
export interface RenderSurface {
  domElement: HTMLCanvasElement;
  setSize(width: number, height: number): void;
  render(scene: THREE.Scene, camera: THREE.Camera): void;
  dispose(): void;
}

export type SurfaceFactory = (canvas: HTMLCanvasElement) => RenderSurface;

export function webglSurface(canvas: HTMLCanvasElement): RenderSurface {
  const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
  return {
    domElement: canvas,
    setSize: (w, h) => renderer.setSize(w, h, false),
    render: (scene, camera) => renderer.render(scene, camera),
    dispose: () => renderer.dispose(),
  };
}

/** Orbit state: yaw/pitch around a target at a distance. */
export class OrbitPose {
  constructor(
    public yaw = 0.6,
    public pitch = 0.5,
    public distance = 3,
    public target = new THREE.Vector3(),
  ) {}

  copy(other: OrbitPose): this {
    this.yaw = other.yaw;
    this.pitch = other.pitch;
    this.distance = other.distance;
    this.target.copy(other.target);
    return this;
  }

  clone(): OrbitPose {
    return new OrbitPose(this.yaw, this.pitch, this.distance, this.target.clone());
  }

  equals(other: OrbitPose): boolean {
    return (
      this.yaw === other.yaw &&
      this.pitch === other.pitch &&
      this.distance === other.distance &&
      this.target.equals(other.target)
    );
  }

  applyTo(camera: THREE.PerspectiveCamera): void {
    const cp = Math.cos(this.pitch);
    camera.position.set(
      this.target.x + this.distance * cp * Math.sin(this.yaw),
      this.target.y + this.distance * cp * Math.cos(this.yaw),
      this.target.z + this.distance * Math.sin(this.pitch),
    );
    camera.up.set(0, 0, 1);
    camera.lookAt(this.target);
    camera.updateMatrixWorld(true);
  }
}

const PITCH_LIMIT = Math.PI / 2 - 1e-3;

export interface MeshViewEvents {
  onPick(cellId: number, extend: boolean): void;
  onPoseChange(view: MeshView): void;
}

/**
 * One 3D panel: the shared surface under its own camera and color field.
 * Dragging orbits, the wheel dollies, a motionless click picks the cell
 * under the pointer.
 */
export class MeshView {
  readonly root: HTMLElement;
  readonly canvas: HTMLCanvasElement;
  readonly surface: CellSurface;
  readonly scene: THREE.Scene;
  readonly camera: THREE.PerspectiveCamera;
  pose: OrbitPose;

  private gl: RenderSurface;
  private labelEl: HTMLElement;
  private raycaster = new THREE.Raycaster();
  private dragFrom: { x: number; y: number } | null = null;
  private dragged = false;

  constructor(
    container: HTMLElement,
    shared: SharedMesh,
    factory: SurfaceFactory,
    private readonly events: MeshViewEvents,
    public label = "",
  ) {
    this.root = document.createElement("div");
    this.root.className = "mesh-view";
    this.labelEl = document.createElement("div");
    this.labelEl.className = "mesh-view-label";
    this.labelEl.textContent = label;
    this.canvas = document.createElement("canvas");
    this.canvas.width = 320;
    this.canvas.height = 260;
    this.root.appendChild(this.labelEl);
    this.root.appendChild(this.canvas);
    container.appendChild(this.root);

    this.surface = new CellSurface(shared);
    this.scene = new THREE.Scene();
    this.scene.add(this.surface.mesh);
    this.camera = new THREE.PerspectiveCamera(45, this.canvas.width / this.canvas.height, 0.01, 1000);
    this.pose = new OrbitPose(0.6, 0.5, shared.radius * 3, shared.center.clone());
    this.gl = factory(this.canvas);
    this.gl.setSize(this.canvas.width, this.canvas.height);
    this.bindPointer();
  }

  private bindPointer(): void {
    this.canvas.addEventListener("pointerdown", (ev) => {
      this.dragFrom = { x: ev.clientX, y: ev.clientY };
      this.dragged = false;
    });
    this.canvas.addEventListener("pointermove", (ev) => {
      if (!this.dragFrom) return;
      const dx = ev.clientX - this.dragFrom.x;
      const dy = ev.clientY - this.dragFrom.y;
      if (Math.abs(dx) + Math.abs(dy) > 2) this.dragged = true;
      this.rotate(-dx * 0.01, dy * 0.01);
      this.dragFrom = { x: ev.clientX, y: ev.clientY };
    });
    this.canvas.addEventListener("pointerup", (ev) => {
      const wasDrag = this.dragged;
      this.dragFrom = null;
      this.dragged = false;
      if (wasDrag) return;
      const cell = this.pickAtClient(ev.clientX, ev.clientY);
      if (cell !== null) this.events.onPick(cell, ev.shiftKey);
    });
    this.canvas.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      this.dolly(ev.deltaY > 0 ? 1.1 : 1 / 1.1);
    });
  }

  rotate(dyaw: number, dpitch: number): void {
    this.pose.yaw += dyaw;
    this.pose.pitch = Math.min(Math.max(this.pose.pitch + dpitch, -PITCH_LIMIT), PITCH_LIMIT);
    this.events.onPoseChange(this);
  }

  dolly(factor: number): void {
    this.pose.distance = Math.max(this.pose.distance * factor, 1e-3);
    this.events.onPoseChange(this);
  }

  /** Normalized device coords (-1..1) -> cell id under that ray, or null. */
  pickAtNdc(x: number, y: number): number | null {
    this.pose.applyTo(this.camera);
    this.raycaster.setFromCamera(new THREE.Vector2(x, y), this.camera);
    return this.surface.pick(this.raycaster);
  }

  private pickAtClient(clientX: number, clientY: number): number | null {
    const rect = this.canvas.getBoundingClientRect();
    const w = rect.width || this.canvas.width;
    const h = rect.height || this.canvas.height;
    const x = ((clientX - rect.left) / w) * 2 - 1;
    const y = -(((clientY - rect.top) / h) * 2 - 1);
    return this.pickAtNdc(x, y);
  }

  /** NDC position of a cell centre; lets tests aim picks at known cells. */
  projectCell(cellId: number): { x: number; y: number } {
    this.pose.applyTo(this.camera);
    const p = this.surface.centroidOf(cellId).project(this.camera);
    return { x: p.x, y: p.y };
  }

  setLabel(text: string): void {
    this.label = text;
    this.labelEl.textContent = text;
  }

  setColors(tokens: string[], colors: TokenColors): void {
    this.surface.setColors(tokens, colors);
  }

  setMask(cells: Iterable<number>): void {
    this.surface.setMask(cells);
  }

  render(): void {
    this.pose.applyTo(this.camera);
    this.gl.render(this.scene, this.camera);
  }

  dispose(): void {
    this.gl.dispose();
    this.root.remove();
  }
}
