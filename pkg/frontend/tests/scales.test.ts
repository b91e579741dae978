import { describe, expect, it } from "vitest";

import {
  NOT_VIVID_COLOR,
  VIVID_COLOR,
  divergingColor,
  divergingT,
  frameColor,
  linearScale,
} from "../src/scales.js";

describe("linearScale", () => {
  it("maps the domain ends to the range ends", () => {
    const s = linearScale([0, 10], [0, 100]);
    expect(s(0)).toBe(0);
    expect(s(10)).toBe(100);
    expect(s(5)).toBe(50);
  });

  it("handles a degenerate domain", () => {
    const s = linearScale([3, 3], [0, 100]);
    expect(s(3)).toBe(50);
  });
});

describe("divergingT", () => {
  it("pins the center at 0.5 even for skewed data", () => {
    expect(divergingT(0, -0.2, 0.9)).toBe(0.5);
    expect(divergingT(0, -1, 1)).toBe(0.5);
  });

  it("is symmetric about the center", () => {
    const lo = divergingT(-0.3, -1, 1);
    const hi = divergingT(0.3, -1, 1);
    expect(lo + hi).toBeCloseTo(1, 12);
  });

  it("is monotone and clamped to [0,1]", () => {
    let prev = -1;
    for (let v = -2; v <= 2; v += 0.25) {
      const t = divergingT(v, -1, 1);
      expect(t).toBeGreaterThanOrEqual(0);
      expect(t).toBeLessThanOrEqual(1);
      expect(t).toBeGreaterThanOrEqual(prev);
      prev = t;
    }
  });
});

describe("divergingColor", () => {
  it("is near-white at the midpoint and saturated at the ends", () => {
    expect(divergingColor(0.5)).toBe("#f7f7f7");
    expect(divergingColor(0)).toBe("#b2182b");
    expect(divergingColor(1)).toBe("#2166ac");
  });
});

describe("fixed color vocabulary", () => {
  it("uses purple for vivid and gray for not vivid", () => {
    expect(VIVID_COLOR).toBe("#7b3294");
    expect(NOT_VIVID_COLOR.toLowerCase()).toMatch(/^#9/); // a gray
  });

  it("gives each foundation a distinct hue, vice darker than virtue", () => {
    const virtues = ["Care", "Fairness", "Loyalty", "Authority", "Purity", "Liberty"].map(
      (f) => frameColor(f, "virtue"),
    );
    expect(new Set(virtues).size).toBe(6);
    expect(frameColor("Care", "vice")).not.toBe(frameColor("Care", "virtue"));
  });
});
