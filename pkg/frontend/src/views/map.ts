/** Glyph map: county polygons as neutral background, one glyph per county
 * with data — glyph size encodes the selected tweet feature, fill encodes
 * the selected demographic on a diverging scale centered at zero. Hover
 * shows county detail; a legend explaining the glyph encoding is available
 * on demand. Clicking a county toggles it in the shared filter. */

import { clear, el, svg } from "../dom.js";
import {
  NEUTRAL_BG,
  divergingColor,
  divergingT,
  formatNumber,
  linearScale,
} from "../scales.js";
import {
  MAX_RADIUS,
  MIN_RADIUS,
  extentOf,
  glyphPath,
  glyphRadius,
  ringCentroid,
} from "../glyph.js";
import type { GeometryPayload, MapCounty, MapPayload, MetaPayload } from "../types.js";

const WIDTH = 640;
const HEIGHT = 360;

export interface MapHandlers {
  onCountyToggle(fips: string): void;
  onFeatureChange(feature: string): void;
  onDemographicChange(demographic: string): void;
}

interface Projected {
  fips: string;
  name: string;
  state: string;
  rings: Array<Array<[number, number]>>;
  centroid: [number, number];
}

export function projectGeometry(geometry: GeometryPayload): Projected[] {
  let minX = Infinity,
    maxX = -Infinity,
    minY = Infinity,
    maxY = -Infinity;
  const features = geometry.geojson.features;
  const outers: Array<Array<Array<[number, number]>>> = features.map((f) => {
    const coords =
      f.geometry.type === "Polygon"
        ? [f.geometry.coordinates as number[][][]]
        : (f.geometry.coordinates as number[][][][]);
    return coords.map((poly) => poly[0] as Array<[number, number]>);
  });
  for (const polys of outers) {
    for (const ring of polys) {
      for (const [x, y] of ring) {
        if (x < minX) minX = x;
        if (x > maxX) maxX = x;
        if (y < minY) minY = y;
        if (y > maxY) maxY = y;
      }
    }
  }
  const sx = linearScale([minX, maxX], [8, WIDTH - 8]);
  // latitude grows upward, screen y grows downward
  const sy = linearScale([minY, maxY], [HEIGHT - 8, 8]);
  return features.map((f, i) => {
    const rings = outers[i].map((ring) =>
      ring.map(([x, y]) => [sx(x), sy(y)] as [number, number]),
    );
    return {
      fips: f.properties.fips,
      name: f.properties.name,
      state: f.properties.state,
      rings,
      centroid: ringCentroid(rings[0]),
    };
  });
}

export function renderMap(
  container: HTMLElement,
  payload: MapPayload,
  geometry: GeometryPayload,
  meta: MetaPayload,
  selectedFips: string[],
  handlers: MapHandlers,
): void {
  clear(container);
  const head = el("div", { class: "view-title" });
  head.appendChild(el("span", {}, "County map"));
  head.appendChild(
    selector("feature", payload.feature, featureOptions(meta), handlers.onFeatureChange),
  );
  head.appendChild(
    selector(
      "demographic",
      payload.demographic,
      meta.context_fields.map((f) => [f, f]),
      handlers.onDemographicChange,
    ),
  );
  const legendBtn = el("button", { class: "legend-toggle", type: "button" }, "legend");
  head.appendChild(legendBtn);
  container.appendChild(head);

  const byFips = new Map(payload.counties.map((c) => [c.fips, c]));
  const featVals = payload.counties
    .map((c) => c.feature_value)
    .filter((v): v is number => v !== null);
  const featExtent = extentOf(featVals);
  const demoVals = payload.counties
    .map((c) => c.demographic_value)
    .filter((v): v is number => v !== null);
  const demoMin = demoVals.length ? Math.min(...demoVals) : 0;
  const demoMax = demoVals.length ? Math.max(...demoVals) : 0;
  // demographics that change sign get a zero-centered scale; others span data
  const center = demoMin < 0 && demoMax > 0 ? 0 : (demoMin + demoMax) / 2;

  const root = svg("svg", {
    width: String(WIDTH),
    height: String(HEIGHT),
    class: "glyph-map",
    role: "img",
  });

  const detail = el("div", { class: "county-detail" }, "hover a county");

  for (const county of projectGeometry(geometry)) {
    const data = byFips.get(county.fips);
    const g = svg("g", { class: "county", "data-fips": county.fips });
    for (const ring of county.rings) {
      const d = `M ${ring.map(([x, y]) => `${x.toFixed(1)} ${y.toFixed(1)}`).join(" L ")} Z`;
      g.appendChild(
        svg("path", {
          class: "county-shape",
          d,
          fill: NEUTRAL_BG,
          stroke: selectedFips.includes(county.fips) ? "#222" : "#fff",
          "stroke-width": selectedFips.includes(county.fips) ? "1.5" : "0.5",
        }),
      );
    }
    // counties with no data get background only, no glyph
    if (data && data.feature_value !== null) {
      const r = glyphRadius(data.feature_value, featExtent);
      const fill =
        data.demographic_value === null
          ? "#bdbdbd"
          : divergingColor(divergingT(data.demographic_value, demoMin, demoMax, center));
      g.appendChild(
        svg("path", {
          class: "county-glyph",
          d: glyphPath(county.centroid[0], county.centroid[1], r),
          "data-radius": r.toFixed(3),
          "data-value": String(data.feature_value),
          fill,
          stroke: "#555",
          "stroke-width": "0.5",
        }),
      );
    }
    g.addEventListener("click", () => handlers.onCountyToggle(county.fips));
    g.addEventListener("mouseenter", () => {
      detail.textContent = countyDetail(county.name, county.state, data, payload, meta);
    });
    root.appendChild(g);
  }
  container.appendChild(root);
  container.appendChild(detail);

  const legend = buildLegend(payload, meta, featExtent.min, featExtent.max);
  legend.style.display = "none";
  legendBtn.addEventListener("click", () => {
    legend.style.display = legend.style.display === "none" ? "block" : "none";
  });
  container.appendChild(legend);
}

function featureOptions(meta: MetaPayload): Array<[string, string]> {
  // basic channels first; entropy and log-scaled features are "advanced"
  return Object.entries(meta.features).map(([key, name]) => [key, `${key} ${name}`]);
}

function selector(
  cls: string,
  current: string,
  options: Array<[string, string]>,
  onChange: (v: string) => void,
): HTMLSelectElement {
  const sel = el("select", { class: `${cls}-select` });
  for (const [value, label] of options) {
    const opt = el("option", { value }, label);
    if (value === current) opt.setAttribute("selected", "selected");
    sel.appendChild(opt);
  }
  sel.addEventListener("change", () => onChange(sel.value));
  return sel;
}

function countyDetail(
  name: string,
  state: string,
  data: MapCounty | undefined,
  payload: MapPayload,
  meta: MetaPayload,
): string {
  if (!data) return `${name} (${state}) — no tweets`;
  const featName = meta.features[payload.feature] ?? payload.feature;
  return (
    `${name} (${state}) — ${data.n_tweets} tweets, ` +
    `${featName}=${formatNumber(data.feature_value)}, ` +
    `${payload.demographic}=${formatNumber(data.demographic_value)}`
  );
}

function buildLegend(
  payload: MapPayload,
  meta: MetaPayload,
  featMin: number,
  featMax: number,
): HTMLElement {
  const box = el("div", { class: "glyph-legend" });
  const featName = meta.features[payload.feature] ?? payload.feature;
  box.appendChild(
    el(
      "p",
      {},
      `Glyph size: ${featName} — smallest circle = ${formatNumber(featMin)}, ` +
        `largest = ${formatNumber(featMax)}.`,
    ),
  );
  box.appendChild(
    el(
      "p",
      {},
      `Glyph color: ${payload.demographic} on a red–white–blue diverging scale ` +
        `(white = neutral midpoint).`,
    ),
  );
  const strip = svg("svg", { width: "220", height: "20", class: "legend-strip" });
  for (let i = 0; i < 22; i++) {
    strip.appendChild(
      svg("rect", {
        x: String(i * 10),
        y: "0",
        width: "10",
        height: "14",
        fill: divergingColor(i / 21),
      }),
    );
  }
  box.appendChild(strip);
  const sizes = svg("svg", { width: "220", height: "36", class: "legend-sizes" });
  [MIN_RADIUS, (MIN_RADIUS + MAX_RADIUS) / 2, MAX_RADIUS].forEach((r, i) => {
    sizes.appendChild(
      svg("path", {
        d: glyphPath(30 + i * 70, 18, r),
        fill: "#ccc",
        stroke: "#555",
        "stroke-width": "0.5",
      }),
    );
  });
  box.appendChild(sizes);
  return box;
}
