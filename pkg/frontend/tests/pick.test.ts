import { beforeEach, describe, expect, it, vi } from "vitest";
import { buildSharedMesh } from "../src/three/cellMesh";
import { MeshView } from "../src/three/meshView";
import { stubFactory, twoQuadPayload } from "./helpers/stub";

describe("cell picking", () => {
  let view: MeshView;
  const onPick = vi.fn();

  beforeEach(() => {
    document.body.innerHTML = "";
    onPick.mockClear();
    const shared = buildSharedMesh(twoQuadPayload());
    view = new MeshView(document.body, shared, stubFactory().factory, {
      onPick,
      onPoseChange: () => {},
    });
  });

  it("maps rays through cell centres back to the cell id", () => {
    for (const cell of [0, 1]) {
      const ndc = view.projectCell(cell);
      expect(view.pickAtNdc(ndc.x, ndc.y)).toBe(cell);
    }
  });

  it("picks both triangles of a quad as the same cell", () => {
    // aim slightly off-centre toward opposite quad corners
    const c = view.projectCell(0);
    const a = view.pickAtNdc(c.x - 0.02, c.y - 0.02);
    const b = view.pickAtNdc(c.x + 0.02, c.y + 0.02);
    expect(a).toBe(0);
    expect(b).toBe(0);
  });

  it("returns null when the ray misses the surface", () => {
    expect(view.pickAtNdc(0.99, 0.99)).toBeNull();
  });

  it("quad corners stay distinct cells", () => {
    const left = view.projectCell(0);
    const right = view.projectCell(1);
    expect(left.x).not.toBeCloseTo(right.x, 5);
    expect(view.pickAtNdc(right.x, right.y)).toBe(1);
  });
});
