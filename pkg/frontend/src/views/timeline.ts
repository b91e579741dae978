/** Timeline view: stacked frame-colored bars per bin with optional epidemic
 * case curve and sentiment line overlays; alternative small-multiples mode
 * with one mini-timeline per frame. Dragging across bins brushes the shared
 * date filter. */

import { clear, el, svg } from "../dom.js";
import { divergingColor, divergingT, frameColor, linearScale } from "../scales.js";
import type { TimelineMode } from "../state.js";
import type { MetaPayload, TimelinePayload } from "../types.js";

const WIDTH = 640;
const HEIGHT = 180;
const PAD = { top: 8, right: 40, bottom: 20, left: 40 };
const MULTI_H = 36;

export interface TimelineHandlers {
  onBrush(from: string | null, to: string | null): void;
  onModeChange(mode: TimelineMode): void;
}

export function renderTimeline(
  container: HTMLElement,
  payload: TimelinePayload,
  meta: MetaPayload,
  mode: TimelineMode,
  handlers: TimelineHandlers,
): void {
  clear(container);
  const head = el("div", { class: "view-title" });
  head.appendChild(el("span", {}, `Timeline (${payload.width_days}-day bins)`));
  const toggle = el(
    "button",
    { class: "mode-toggle", type: "button" },
    mode === "stacked" ? "small multiples" : "stacked",
  );
  toggle.addEventListener("click", () =>
    handlers.onModeChange(mode === "stacked" ? "small-multiples" : "stacked"),
  );
  head.appendChild(toggle);
  const reset = el("button", { class: "brush-reset", type: "button" }, "full range");
  reset.addEventListener("click", () => handlers.onBrush(null, null));
  head.appendChild(reset);
  container.appendChild(head);

  if (!payload.bins.length) {
    container.appendChild(el("div", { class: "empty-state" }, "no tweets in range"));
    return;
  }
  if (mode === "stacked") {
    container.appendChild(stackedChart(payload, meta, handlers));
  } else {
    container.appendChild(smallMultiples(payload, meta));
  }
}

function binEnd(binStart: string, widthDays: number): string {
  const d = new Date(`${binStart}T00:00:00Z`);
  d.setUTCDate(d.getUTCDate() + widthDays - 1);
  return d.toISOString().slice(0, 10);
}

function stackedChart(
  payload: TimelinePayload,
  meta: MetaPayload,
  handlers: TimelineHandlers,
): SVGSVGElement {
  const bins = payload.bins;
  const frameOrder = meta.frames.map((f) => f.name);
  const innerW = WIDTH - PAD.left - PAD.right;
  const innerH = HEIGHT - PAD.top - PAD.bottom;
  const barW = innerW / bins.length;
  const maxTotal = Math.max(1, ...bins.map((b) => b.total));
  const yScale = linearScale([0, maxTotal], [0, innerH]);
  const hasCovid = meta.has_covid && bins.some((b) => b.new_cases !== undefined);
  const maxCases = hasCovid
    ? Math.max(1, ...bins.map((b) => b.new_cases ?? 0))
    : 1;
  const caseScale = linearScale([0, maxCases], [innerH, 0]);

  const root = svg("svg", {
    width: String(WIDTH),
    height: String(HEIGHT),
    class: "timeline-chart",
    role: "img",
  });
  const plot = svg("g", { transform: `translate(${PAD.left} ${PAD.top})` });
  root.appendChild(plot);

  bins.forEach((bin, i) => {
    const g = svg("g", {
      class: "timeline-bin",
      "data-bin-start": bin.bin_start,
      "data-total": String(bin.total),
    });
    let yCursor = innerH;
    for (const name of frameOrder) {
      const count = bin.frame_counts[name] ?? 0;
      if (!count) continue;
      const h = yScale(count);
      yCursor -= h;
      const info = meta.frames.find((f) => f.name === name)!;
      g.appendChild(
        svg("rect", {
          class: "stack-segment",
          "data-frame": name,
          x: (i * barW + 1).toFixed(1),
          y: yCursor.toFixed(2),
          width: Math.max(0.5, barW - 2).toFixed(1),
          height: h.toFixed(2),
          fill: frameColor(info.foundation, info.polarity),
        }),
      );
    }
    // brushing: click = single-bin range, shift-click extends
    g.addEventListener("click", (ev) => {
      const from = bin.bin_start;
      const to = binEnd(bin.bin_start, bin.width_days);
      if ((ev as MouseEvent).shiftKey) {
        handlers.onBrush(bins[0].bin_start, to);
      } else {
        handlers.onBrush(from, to);
      }
    });
    plot.appendChild(g);
  });

  // sentiment line (left as diverging-colored dots to avoid a second axis)
  bins.forEach((bin, i) => {
    if (bin.mean_sentiment === null) return;
    plot.appendChild(
      svg("circle", {
        class: "sentiment-dot",
        cx: (i * barW + barW / 2).toFixed(1),
        cy: (innerH * (0.5 - bin.mean_sentiment / 2)).toFixed(1),
        r: "2",
        fill: divergingColor(divergingT(bin.mean_sentiment, -1, 1)),
      }),
    );
  });

  if (hasCovid) {
    const pts = bins
      .map((b, i) => `${(i * barW + barW / 2).toFixed(1)},${caseScale(b.new_cases ?? 0).toFixed(1)}`)
      .join(" ");
    plot.appendChild(
      svg("polyline", {
        class: "covid-curve",
        points: pts,
        fill: "none",
        stroke: "#333",
        "stroke-width": "1.5",
        "stroke-dasharray": "4 2",
      }),
    );
  }

  const axis = svg("text", {
    x: String(PAD.left),
    y: String(HEIGHT - 4),
    class: "axis-label",
  });
  axis.textContent = `${bins[0].bin_start} … ${binEnd(
    bins[bins.length - 1].bin_start,
    bins[bins.length - 1].width_days,
  )}`;
  root.appendChild(axis);
  return root;
}

function smallMultiples(payload: TimelinePayload, meta: MetaPayload): HTMLElement {
  const wrap = el("div", { class: "small-multiples" });
  const bins = payload.bins;
  const innerW = WIDTH - PAD.left - PAD.right;
  const barW = innerW / bins.length;
  for (const frame of meta.frames) {
    const counts = bins.map((b) => b.frame_counts[frame.name] ?? 0);
    const maxC = Math.max(1, ...counts);
    const row = el("div", { class: "multiple-row", "data-frame": frame.name });
    row.appendChild(el("span", { class: "multiple-label" }, frame.name));
    const chart = svg("svg", {
      width: String(innerW),
      height: String(MULTI_H),
      class: "multiple-chart",
    });
    counts.forEach((c, i) => {
      if (!c) return;
      const h = (c / maxC) * (MULTI_H - 2);
      chart.appendChild(
        svg("rect", {
          x: (i * barW).toFixed(1),
          y: (MULTI_H - h).toFixed(1),
          width: Math.max(0.5, barW - 1).toFixed(1),
          height: h.toFixed(1),
          fill: frameColor(frame.foundation, frame.polarity),
        }),
      );
    });
    row.appendChild(chart);
    wrap.appendChild(row);
  }
  return wrap;
}
