import { describe, expect, it } from "vitest";
import { decodeHash, encodeHash } from "../src/state/store";

describe("url hash codec", () => {
  it("round trips region, band and mode", () => {
    const hash = encodeHash({ region: "BOTTOM", band: "500", mode: "two-tone" });
    expect(decodeHash(hash)).toEqual({ region: "BOTTOM", band: "500", mode: "two-tone" });
  });

  it("keeps the hash empty when nothing is selected", () => {
    expect(encodeHash({})).toBe("");
    expect(decodeHash("")).toEqual({});
    expect(decodeHash("#")).toEqual({});
  });

  it("drops unknown matrix modes instead of passing them through", () => {
    expect(decodeHash("#region=TOP&mode=nonsense")).toEqual({ region: "TOP" });
  });

  it("handles region names that need escaping", () => {
    const hash = encodeHash({ region: "A&B C", band: "1250" });
    expect(decodeHash(hash)).toEqual({ region: "A&B C", band: "1250" });
  });
});
