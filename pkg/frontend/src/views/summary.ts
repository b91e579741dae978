/** Summary view: rotated (horizontal) bar charts, one row per moral frame,
 * showing count, pro/anti split, sentiment, and vividness. Clicking a row
 * toggles that frame in the shared filter. */

import { clear, el, svg } from "../dom.js";
import {
  ANTI_COLOR,
  NOT_VIVID_COLOR,
  PRO_COLOR,
  VIVID_COLOR,
  divergingColor,
  divergingT,
  formatNumber,
  frameColor,
  linearScale,
} from "../scales.js";
import type { MetaPayload, SummaryPayload } from "../types.js";

const ROW_H = 26;
const BAR_H = 16;
const LABEL_W = 96;
const COUNT_W = 180;
const STANCE_W = 90;
const SENT_W = 60;
const VIVID_W = 90;
const WIDTH = LABEL_W + COUNT_W + STANCE_W + SENT_W + VIVID_W + 40;

export interface SummaryHandlers {
  onFrameToggle(frame: string): void;
}

export function renderSummary(
  container: HTMLElement,
  payload: SummaryPayload,
  meta: MetaPayload,
  selectedFrames: string[],
  handlers: SummaryHandlers,
): void {
  clear(container);
  const byName = new Map(meta.frames.map((f) => [f.name, f]));
  container.appendChild(
    el("div", { class: "view-title" }, `Frames — ${payload.total} tweets`),
  );
  const root = svg("svg", {
    width: String(WIDTH),
    height: String(payload.frames.length * ROW_H + 24),
    class: "summary-chart",
    role: "img",
  });

  const maxCount = Math.max(1, ...payload.frames.map((r) => r.count));
  const countScale = linearScale([0, maxCount], [0, COUNT_W]);

  const header = svg("g", { class: "col-headers" });
  const cols: Array<[string, number]> = [
    ["count", LABEL_W],
    ["stance", LABEL_W + COUNT_W + 8],
    ["sent.", LABEL_W + COUNT_W + STANCE_W + 16],
    ["vivid", LABEL_W + COUNT_W + STANCE_W + SENT_W + 24],
  ];
  for (const [label, x] of cols) {
    const t = svg("text", { x: String(x), y: "12", class: "col-header" });
    t.textContent = label;
    header.appendChild(t);
  }
  root.appendChild(header);

  payload.frames.forEach((row, i) => {
    const info = byName.get(row.frame);
    const y = 20 + i * ROW_H;
    const g = svg("g", {
      class: "summary-row",
      "data-frame": row.frame,
      transform: `translate(0 ${y})`,
    });
    if (selectedFrames.length && !selectedFrames.includes(row.frame)) {
      g.setAttribute("opacity", "0.35");
    }
    if (selectedFrames.includes(row.frame)) g.classList.add("selected");

    const label = svg("text", { x: "4", y: String(BAR_H - 3), class: "frame-label" });
    label.textContent = row.frame;
    g.appendChild(label);

    g.appendChild(
      svg("rect", {
        class: "count-bar",
        x: String(LABEL_W),
        y: "0",
        width: countScale(row.count).toFixed(1),
        height: String(BAR_H),
        fill: info ? frameColor(info.foundation, info.polarity) : "#bbb",
      }),
    );
    const countText = svg("text", {
      x: String(LABEL_W + countScale(row.count) + 4),
      y: String(BAR_H - 3),
      class: "count-text",
    });
    countText.textContent = String(row.count);
    g.appendChild(countText);

    // pro/anti split of the stance-labeled fraction
    const stanceX = LABEL_W + COUNT_W + 8;
    if (row.pro_share !== null) {
      const proW = row.pro_share * STANCE_W;
      g.appendChild(
        svg("rect", {
          class: "pro-bar",
          x: String(stanceX),
          y: "2",
          width: proW.toFixed(1),
          height: String(BAR_H - 4),
          fill: PRO_COLOR,
        }),
      );
      g.appendChild(
        svg("rect", {
          class: "anti-bar",
          x: (stanceX + proW).toFixed(1),
          y: "2",
          width: (STANCE_W - proW).toFixed(1),
          height: String(BAR_H - 4),
          fill: ANTI_COLOR,
        }),
      );
    }

    const sentX = LABEL_W + COUNT_W + STANCE_W + 16;
    const sent = svg("rect", {
      class: "sentiment-cell",
      x: String(sentX),
      y: "2",
      width: String(SENT_W - 12),
      height: String(BAR_H - 4),
      fill:
        row.mean_sentiment === null
          ? "#f0f0f0"
          : divergingColor(divergingT(row.mean_sentiment, -1, 1)),
    });
    const title = svg("title");
    title.textContent = `mean sentiment ${formatNumber(row.mean_sentiment)}`;
    sent.appendChild(title);
    g.appendChild(sent);

    const vividX = LABEL_W + COUNT_W + STANCE_W + SENT_W + 24;
    if (row.vivid_share !== null) {
      const vw = row.vivid_share * VIVID_W;
      g.appendChild(
        svg("rect", {
          class: "vivid-bar",
          x: String(vividX),
          y: "2",
          width: vw.toFixed(1),
          height: String(BAR_H - 4),
          fill: VIVID_COLOR,
        }),
      );
      g.appendChild(
        svg("rect", {
          class: "not-vivid-bar",
          x: (vividX + vw).toFixed(1),
          y: "2",
          width: (VIVID_W - vw).toFixed(1),
          height: String(BAR_H - 4),
          fill: NOT_VIVID_COLOR,
        }),
      );
    }

    g.addEventListener("click", () => handlers.onFrameToggle(row.frame));
    root.appendChild(g);
  });

  container.appendChild(root);
}
