import type { MeshView } from "./meshView";
import { OrbitPose } from "./meshView";

/**
 * Shared camera pose across 3D views.
 *
 * While linked, every registered view aliases one OrbitPose object, so the
 * poses are identical by construction on every frame; orbiting any view
 * moves all of them. Unlinking hands each view its own copy so they can
 * diverge again.
 */
export class CameraLink {
  private views: MeshView[] = [];
  private shared = new OrbitPose();
  private on = false;

  get enabled(): boolean {
    return this.on;
  }

  register(view: MeshView): void {
    this.views.push(view);
    if (this.on) view.pose = this.shared;
  }

  unregister(view: MeshView): void {
    this.views = this.views.filter((v) => v !== view);
  }

  setEnabled(on: boolean): void {
    if (on === this.on) return;
    this.on = on;
    if (on) {
      const lead = this.views[0];
      if (lead) this.shared.copy(lead.pose);
      for (const v of this.views) v.pose = this.shared;
    } else {
      for (const v of this.views) v.pose = this.shared.clone();
    }
  }

  renderAll(): void {
    for (const v of this.views) v.render();
  }
}
