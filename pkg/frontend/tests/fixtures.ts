/** Fixture payloads captured from the real service over a synthetic dataset,
 * plus a fetch stub that answers API requests from them. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";
import type {
  GeometryPayload,
  InferencePayload,
  MapPayload,
  MetaPayload,
  SummaryPayload,
  TimelinePayload,
  TweetsPayload,
} from "../src/types.js";

const HERE = dirname(fileURLToPath(import.meta.url));

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(HERE, "fixtures", `${name}.json`), "utf8")) as T;
}

export const fixtures = {
  meta: load<MetaPayload>("meta"),
  summary: load<SummaryPayload>("summary"),
  summaryCare: load<SummaryPayload>("summary_care"),
  timeline: load<TimelinePayload>("timeline"),
  timelineCare: load<TimelinePayload>("timeline_care"),
  map: load<MapPayload>("map"),
  mapCare: load<MapPayload>("map_care"),
  tweets: load<TweetsPayload>("tweets"),
  tweetsCare: load<TweetsPayload>("tweets_care"),
  inference: load<InferencePayload>("inference"),
  geometry: load<GeometryPayload>("geometry"),
};

export function jsonResponse(body: unknown, status = 200): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    statusText: String(status),
    json: async () => body,
  } as unknown as Response;
}

export interface FixtureServer {
  fetch: FetchLike;
  requests: string[];
}

/** Serves the captured payloads; filter=frame=Care gets the Care variants,
 * any other filter falls back to the unfiltered payloads. */
export function fixtureServer(): FixtureServer {
  const requests: string[] = [];
  const fetch: FetchLike = async (rawUrl, init) => {
    const url = new URL(rawUrl, "http://fixture");
    requests.push(url.pathname + url.search);
    const flt = url.searchParams.get("filter");
    const care = flt === "frame=Care";
    switch (url.pathname) {
      case "/api/meta":
        return jsonResponse(fixtures.meta);
      case "/api/geometry":
        return jsonResponse(fixtures.geometry);
      case "/api/summary":
        return jsonResponse(care ? fixtures.summaryCare : fixtures.summary);
      case "/api/timeline":
        return jsonResponse(care ? fixtures.timelineCare : fixtures.timeline);
      case "/api/map":
        return jsonResponse(care ? fixtures.mapCare : fixtures.map);
      case "/api/tweets": {
        const base = care ? fixtures.tweetsCare : fixtures.tweets;
        const limit = parseInt(url.searchParams.get("limit") ?? "100", 10);
        return jsonResponse({ ...base, limit, tweets: limit ? base.tweets : [] });
      }
      case "/api/inference":
        if (init?.method === "POST") return jsonResponse(fixtures.inference);
        return jsonResponse({ detail: "method not allowed" }, 405);
      default:
        return jsonResponse({ detail: `no fixture for ${url.pathname}` }, 404);
    }
  };
  return { fetch, requests };
}
