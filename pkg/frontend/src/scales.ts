/** Scales and the fixed color vocabulary shared by all views. */

export interface LinearScale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(
  domain: [number, number],
  range: [number, number],
): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  const f = ((v: number) => {
    if (span === 0) return (r0 + r1) / 2;
    return r0 + ((v - d0) / span) * (r1 - r0);
  }) as LinearScale;
  f.domain = domain;
  f.range = range;
  return f;
}

export function clamp(v: number, lo: number, hi: number): number {
  return v < lo ? lo : v > hi ? hi : v;
}

/** Map a value to [0,1] with 0.5 pinned at ``center`` and symmetric extent,
 * so a diverging palette is visually centered regardless of data skew. */
export function divergingT(
  v: number,
  min: number,
  max: number,
  center = 0,
): number {
  const extent = Math.max(Math.abs(min - center), Math.abs(max - center));
  if (extent === 0) return 0.5;
  return clamp(0.5 + (v - center) / (2 * extent), 0, 1);
}

function hex(channel: number): string {
  return Math.round(clamp(channel, 0, 255)).toString(16).padStart(2, "0");
}

function mix(a: [number, number, number], b: [number, number, number], t: number): string {
  const c = a.map((av, i) => av + (b[i] - av) * t) as [number, number, number];
  return `#${hex(c[0])}${hex(c[1])}${hex(c[2])}`;
}

const DIV_LOW: [number, number, number] = [178, 24, 43]; // red (negative)
const DIV_MID: [number, number, number] = [247, 247, 247];
const DIV_HIGH: [number, number, number] = [33, 102, 172]; // blue (positive)

/** Diverging red-white-blue color for t in [0,1], 0.5 = neutral. */
export function divergingColor(t: number): string {
  const tt = clamp(t, 0, 1);
  return tt < 0.5 ? mix(DIV_LOW, DIV_MID, tt * 2) : mix(DIV_MID, DIV_HIGH, (tt - 0.5) * 2);
}

// fixed intuitive mapping: gray for not vivid, purple for vivid
export const VIVID_COLOR = "#7b3294";
export const NOT_VIVID_COLOR = "#9a9a9a";
export const PRO_COLOR = "#1b9e77";
export const ANTI_COLOR = "#d95f02";
export const NEUTRAL_BG = "#e8e8e8"; // counties without data

/** One hue per foundation; the vice frame is a darker shade of its virtue. */
const FOUNDATION_HUES: Record<string, [string, string]> = {
  Care: ["#66c2a5", "#2e7d64"],
  Fairness: ["#8da0cb", "#47598f"],
  Loyalty: ["#ffd92f", "#b29a00"],
  Authority: ["#e78ac3", "#a34d82"],
  Purity: ["#a6d854", "#6a941c"],
  Liberty: ["#fc8d62", "#b04f2a"],
};

export function frameColor(
  foundation: string,
  polarity: "virtue" | "vice",
): string {
  const pair = FOUNDATION_HUES[foundation] ?? ["#bbbbbb", "#777777"];
  return polarity === "virtue" ? pair[0] : pair[1];
}

export function formatNumber(v: number | null, digits = 3): string {
  if (v === null || Number.isNaN(v)) return "–";
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e6)) {
    return v.toExponential(2);
  }
  return v.toFixed(digits).replace(/\.?0+$/, (m) => (m.startsWith(".") ? "" : m));
}
