/** County glyph geometry: area-true circles whose radius grows monotonically
 * with the encoded feature value. Shape is a rounded "badge" circle; size
 * carries the feature, fill carries the demographic. */

export interface GlyphExtent {
  min: number;
  max: number;
}

export const MIN_RADIUS = 2;
export const MAX_RADIUS = 14;

/** Radius for a feature value; strictly increasing in ``v`` over the extent
 * (area-proportional so perceived size tracks the value). */
export function glyphRadius(
  v: number,
  extent: GlyphExtent,
  minR = MIN_RADIUS,
  maxR = MAX_RADIUS,
): number {
  const span = extent.max - extent.min;
  const t = span === 0 ? 0.5 : (v - extent.min) / span;
  const tt = t < 0 ? 0 : t > 1 ? 1 : t;
  // interpolate in area, not radius
  const a0 = minR * minR;
  const a1 = maxR * maxR;
  return Math.sqrt(a0 + tt * (a1 - a0));
}

/** SVG path for the glyph outline centered at (cx, cy). */
export function glyphPath(cx: number, cy: number, r: number): string {
  const f = (x: number) => x.toFixed(2);
  return (
    `M ${f(cx - r)} ${f(cy)} ` +
    `A ${f(r)} ${f(r)} 0 1 0 ${f(cx + r)} ${f(cy)} ` +
    `A ${f(r)} ${f(r)} 0 1 0 ${f(cx - r)} ${f(cy)} Z`
  );
}

export function extentOf(values: number[]): GlyphExtent {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (min > max) return { min: 0, max: 0 };
  return { min, max };
}

/** Centroid of a GeoJSON polygon outer ring (projected coordinates). */
export function ringCentroid(ring: Array<[number, number]>): [number, number] {
  let sx = 0;
  let sy = 0;
  let n = 0;
  // last vertex repeats the first in closed rings; skip it
  const last = ring.length > 1 &&
    ring[0][0] === ring[ring.length - 1][0] &&
    ring[0][1] === ring[ring.length - 1][1]
    ? ring.length - 1
    : ring.length;
  for (let i = 0; i < last; i++) {
    sx += ring[i][0];
    sy += ring[i][1];
    n++;
  }
  return n ? [sx / n, sy / n] : [0, 0];
}
