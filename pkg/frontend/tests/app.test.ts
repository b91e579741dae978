// @vitest-environment happy-dom
/** Integration: the app against the fixture service — all four views render,
 * linked filtering keeps them consistent, and view state survives the URL. */
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { fromParams, toParams } from "../src/state.js";
import { fixtureServer, fixtures } from "./fixtures.js";

function makeApp(root: HTMLElement) {
  const server = fixtureServer();
  const app = new App(root, new ApiClient("", server.fetch), { debounceMs: 0 });
  return { app, server };
}

async function settle(ms = 25): Promise<void> {
  await new Promise((r) => setTimeout(r, ms));
}

let root: HTMLElement;

beforeEach(() => {
  history.replaceState(null, "", "/");
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.appendChild(root);
});

describe("app integration", () => {
  it("renders all four views from the fixture service", async () => {
    const { app } = makeApp(root);
    await app.start();
    await settle();
    expect(root.querySelectorAll(".summary-row")).toHaveLength(12);
    expect(root.querySelectorAll(".timeline-bin").length).toBeGreaterThan(0);
    expect(root.querySelectorAll(".county").length).toBe(
      fixtures.geometry.geojson.features.length,
    );
    expect(root.querySelector(".inference-form")).not.toBeNull();
    expect(root.querySelector(".status-strip")!.textContent).toContain(
      `${fixtures.meta.n_tweets} of ${fixtures.meta.n_tweets} tweets`,
    );
  });

  it("toggling Care updates timeline, map, and tweet count consistently", async () => {
    const { app } = makeApp(root);
    await app.start();
    await settle();

    root
      .querySelector('.summary-row[data-frame="Care"]')!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await settle();

    expect(app.state.frames).toEqual(["Care"]);
    const careTotal = fixtures.summaryCare.total;
    // status strip count
    expect(root.querySelector(".status-strip")!.textContent).toContain(
      `${careTotal} of ${fixtures.meta.n_tweets} tweets`,
    );
    // timeline bins sum to the same subset size
    const binSum = Array.from(root.querySelectorAll(".timeline-bin")).reduce(
      (s, b) => s + parseInt(b.getAttribute("data-total")!, 10),
      0,
    );
    expect(binSum).toBe(careTotal);
    // map tweet counts sum to the same subset size
    const mapSum = fixtures.mapCare.counties.reduce((s, c) => s + c.n_tweets, 0);
    expect(mapSum).toBe(careTotal);
    const glyphs = root.querySelectorAll(".county-glyph");
    expect(glyphs.length).toBe(
      fixtures.mapCare.counties.filter((c) => c.feature_value !== null).length,
    );
    // summary shows the filtered total
    expect(root.querySelector(".summary-panel")!.textContent).toContain(
      `${careTotal} tweets`,
    );
  });

  it("toggling Care twice returns to the unfiltered state", async () => {
    const { app } = makeApp(root);
    await app.start();
    await settle();
    for (let i = 0; i < 2; i++) {
      root
        .querySelector('.summary-row[data-frame="Care"]')!
        .dispatchEvent(new MouseEvent("click", { bubbles: true }));
      await settle();
    }
    expect(app.state.frames).toEqual([]);
    expect(root.querySelector(".status-strip")!.textContent).toContain(
      `${fixtures.meta.n_tweets} of ${fixtures.meta.n_tweets} tweets`,
    );
  });

  it("brushing a date range propagates to every view request", async () => {
    const { app, server } = makeApp(root);
    await app.start();
    await settle();
    server.requests.length = 0;

    root
      .querySelector(".timeline-bin")!
      .dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await settle();

    expect(app.state.dateFrom).toBe(fixtures.timeline.bins[0].bin_start);
    expect(app.state.dateTo).not.toBeNull();
    const filtered = server.requests.filter((r) => r.includes("from%3D"));
    const views = new Set(filtered.map((r) => r.split("?")[0]));
    expect(views).toContain("/api/summary");
    expect(views).toContain("/api/timeline");
    expect(views).toContain("/api/map");
    expect(views).toContain("/api/tweets");
  });

  it("inference panel displays the planted slope from the API", async () => {
    const { app } = makeApp(root);
    await app.start();
    await settle();

    await app.runFit({ dependent: "mean_sentiment", predictors: ["vote_margin"] });
    const row = root.querySelector('tr[data-term="vote_margin"]')!;
    const coef = parseFloat(row.querySelector(".coef")!.textContent!);
    expect(coef).toBeCloseTo(fixtures.inference.model.coefficients[1], 3);
    expect(coef).toBeGreaterThan(0.7); // planted positive slope, from payload
  });

  it("view state survives a URL round-trip", async () => {
    const { app } = makeApp(root);
    await app.start();
    await settle();
    app.update({
      frames: ["Care"],
      feature: "f4",
      demographic: "mask_use",
      timelineMode: "small-multiples",
    });
    await settle();

    const qs = location.search;
    expect(qs).toContain("frames=Care");

    // a fresh app booted from the same URL restores the identical state
    const root2 = document.createElement("div");
    document.body.appendChild(root2);
    const { app: app2 } = makeApp(root2);
    await app2.start();
    await settle();
    expect(app2.state).toEqual(app.state);
    expect(toParams(app2.state).toString()).toBe(
      toParams(fromParams(new URLSearchParams(qs))).toString(),
    );
  });

  it("stale responses never overwrite newer ones", async () => {
    // first request (no filter) resolves after the second (Care): the view
    // must show Care
    const server = fixtureServer();
    const gateDelays = new Map<string, number>([["", 30]]);
    const slowFetch: typeof server.fetch = async (url, init) => {
      const u = new URL(url, "http://fixture");
      if (u.pathname === "/api/summary") {
        const flt = u.searchParams.get("filter") ?? "";
        const delay = gateDelays.get(flt) ?? 0;
        await new Promise((r) => setTimeout(r, delay));
      }
      return server.fetch(url, init);
    };
    const app = new App(root, new ApiClient("", slowFetch), { debounceMs: 0 });
    await app.start();
    await settle(60);

    // trigger the race: unfiltered refresh then immediately Care
    void app.refresh();
    app.update({ frames: ["Care"] });
    await settle(80);

    expect(root.querySelector(".summary-panel")!.textContent).toContain(
      `${fixtures.summaryCare.total} tweets`,
    );
  });

  it("shows an explicit empty state when the service is unreachable", async () => {
    const failing = new ApiClient("", async () => {
      throw new Error("connection refused");
    });
    const app = new App(root, failing, { debounceMs: 0 });
    await app.start();
    expect(root.querySelector(".empty-state")!.textContent).toContain(
      "service unavailable",
    );
  });
});
