/** Typed client for the analytics service plus stale-response handling.
 *
 * Every number shown in the UI comes from these payloads; the client does no
 * statistics of its own. Each view keeps at most one in-flight request: a
 * RequestGate hands out tokens and answers arriving for an outdated token
 * are discarded.
 */

import type {
  GeometryPayload,
  InferencePayload,
  MapPayload,
  MetaPayload,
  ModelSpecBody,
  SummaryPayload,
  TimelinePayload,
  TweetsPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`API ${status}: ${detail}`);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async get<T>(path: string, params: Record<string, string | null>): Promise<T> {
    const qs = new URLSearchParams();
    for (const [k, v] of Object.entries(params)) {
      if (v !== null && v !== "") qs.set(k, v);
    }
    const suffix = qs.toString() ? `?${qs.toString()}` : "";
    const resp = await this.fetchFn(`${this.baseUrl}${path}${suffix}`);
    if (!resp.ok) throw new ApiError(resp.status, await errorDetail(resp));
    return (await resp.json()) as T;
  }

  meta(): Promise<MetaPayload> {
    return this.get("/api/meta", {});
  }

  summary(filter: string | null): Promise<SummaryPayload> {
    return this.get("/api/summary", { filter });
  }

  timeline(filter: string | null, width: number | null): Promise<TimelinePayload> {
    return this.get("/api/timeline", {
      filter,
      width: width === null ? null : String(width),
    });
  }

  map(
    feature: string,
    demographic: string,
    filter: string | null,
  ): Promise<MapPayload> {
    return this.get("/api/map", { feature, demographic, filter });
  }

  tweets(filter: string | null, limit: number, offset: number): Promise<TweetsPayload> {
    return this.get("/api/tweets", {
      filter,
      limit: String(limit),
      offset: String(offset),
    });
  }

  geometry(): Promise<GeometryPayload> {
    return this.get("/api/geometry", {});
  }

  async inference(spec: ModelSpecBody): Promise<InferencePayload> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/inference`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(spec),
    });
    if (!resp.ok) throw new ApiError(resp.status, await errorDetail(resp));
    return (await resp.json()) as InferencePayload;
  }
}

async function errorDetail(resp: Response): Promise<string> {
  try {
    const body = await resp.json();
    if (body && typeof body.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return resp.statusText;
  }
}

/** Monotone token source: a response is applied only if its token is still
 * the latest issued for that view. */
export class RequestGate {
  private latest = 0;

  begin(): number {
    return ++this.latest;
  }

  isCurrent(token: number): boolean {
    return token === this.latest;
  }
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | null = null;
  return (...args: A) => {
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, ms);
  };
}
