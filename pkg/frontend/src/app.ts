/** Application shell: owns the shared ViewState, keeps it in the URL, and
 * coordinates the four views. Filter changes are debounced (250 ms) and each
 * view keeps at most one in-flight request with stale responses discarded. */

import { ApiClient, ApiError, RequestGate, debounce } from "./api.js";
import { clear, el, emptyState } from "./dom.js";
import {
  ViewState,
  filterString,
  fromParams,
  toParams,
  toggleInList,
} from "./state.js";
import type {
  GeometryPayload,
  MetaPayload,
  ModelSpecBody,
} from "./types.js";
import { FitRecord, renderInference } from "./views/inference.js";
import { renderMap } from "./views/map.js";
import { renderSummary } from "./views/summary.js";
import { renderTimeline } from "./views/timeline.js";

export interface AppOptions {
  apiBase?: string;
  debounceMs?: number;
}

export class App {
  state: ViewState;
  private meta: MetaPayload | null = null;
  private geometry: GeometryPayload | null = null;
  private readonly gates = {
    summary: new RequestGate(),
    timeline: new RequestGate(),
    map: new RequestGate(),
    tweets: new RequestGate(),
  };
  private history: FitRecord[] = [];
  private inferenceError: string | null = null;
  private readonly panels: Record<string, HTMLElement>;
  private readonly scheduleRefresh: () => void;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    options: AppOptions = {},
  ) {
    this.state = fromParams(new URLSearchParams(location.search));
    this.panels = {
      status: el("div", { class: "status-strip" }),
      summary: el("div", { class: "panel summary-panel" }),
      timeline: el("div", { class: "panel timeline-panel" }),
      map: el("div", { class: "panel map-panel" }),
      inference: el("div", { class: "panel inference-panel" }),
    };
    clear(root);
    for (const panel of Object.values(this.panels)) root.appendChild(panel);
    this.scheduleRefresh = debounce(() => void this.refresh(), options.debounceMs ?? 250);
  }

  async start(): Promise<void> {
    try {
      [this.meta, this.geometry] = await Promise.all([
        this.api.meta(),
        this.api.geometry(),
      ]);
    } catch (err) {
      emptyState(this.root, `service unavailable: ${describe(err)}`);
      return;
    }
    this.renderInferencePanel();
    await this.refresh();
  }

  /** Apply a state change: update URL, re-render after the debounce window. */
  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    const qs = toParams(this.state).toString();
    history.replaceState(null, "", qs ? `?${qs}` : location.pathname);
    this.scheduleRefresh();
  }

  /** Fetch all view payloads for the current filter and render. */
  async refresh(): Promise<void> {
    if (!this.meta || !this.geometry) return;
    const flt = filterString(this.state);
    await Promise.all([
      this.refreshSummary(flt),
      this.refreshTimeline(flt),
      this.refreshMap(flt),
      this.refreshCount(flt),
    ]);
  }

  private async refreshSummary(flt: string | null): Promise<void> {
    const token = this.gates.summary.begin();
    try {
      const payload = await this.api.summary(flt);
      if (!this.gates.summary.isCurrent(token)) return; // stale
      renderSummary(this.panels.summary, payload, this.meta!, this.state.frames, {
        onFrameToggle: (frame) =>
          this.update({ frames: toggleInList(this.state.frames, frame) }),
      });
    } catch (err) {
      if (this.gates.summary.isCurrent(token)) {
        emptyState(this.panels.summary, `summary unavailable: ${describe(err)}`);
      }
    }
  }

  private async refreshTimeline(flt: string | null): Promise<void> {
    const token = this.gates.timeline.begin();
    try {
      const payload = await this.api.timeline(flt, this.state.binWidth);
      if (!this.gates.timeline.isCurrent(token)) return;
      renderTimeline(
        this.panels.timeline,
        payload,
        this.meta!,
        this.state.timelineMode,
        {
          onBrush: (from, to) => {
            // an empty-range brush resets to the full range
            if (from !== null && to !== null && from > to) {
              this.update({ dateFrom: null, dateTo: null });
            } else {
              this.update({ dateFrom: from, dateTo: to });
            }
          },
          onModeChange: (mode) => this.update({ timelineMode: mode }),
        },
      );
    } catch (err) {
      if (this.gates.timeline.isCurrent(token)) {
        emptyState(this.panels.timeline, `timeline unavailable: ${describe(err)}`);
      }
    }
  }

  private async refreshMap(flt: string | null): Promise<void> {
    const token = this.gates.map.begin();
    try {
      const payload = await this.api.map(this.state.feature, this.state.demographic, flt);
      if (!this.gates.map.isCurrent(token)) return;
      renderMap(this.panels.map, payload, this.geometry!, this.meta!, this.state.fips, {
        onCountyToggle: (fips) =>
          this.update({ fips: toggleInList(this.state.fips, fips) }),
        onFeatureChange: (feature) => this.update({ feature }),
        onDemographicChange: (demographic) => this.update({ demographic }),
      });
    } catch (err) {
      if (this.gates.map.isCurrent(token)) {
        emptyState(this.panels.map, `map unavailable: ${describe(err)}`);
      }
    }
  }

  private async refreshCount(flt: string | null): Promise<void> {
    const token = this.gates.tweets.begin();
    try {
      const payload = await this.api.tweets(flt, 0, 0);
      if (!this.gates.tweets.isCurrent(token)) return;
      this.panels.status.textContent =
        `${payload.total} of ${this.meta!.n_tweets} tweets selected` +
        (flt ? ` — ${flt}` : "");
    } catch (err) {
      if (this.gates.tweets.isCurrent(token)) {
        this.panels.status.textContent = `count unavailable: ${describe(err)}`;
      }
    }
  }

  private renderInferencePanel(): void {
    renderInference(this.panels.inference, this.meta!, this.history, this.inferenceError, {
      onSubmit: (spec) => void this.runFit(spec),
      onRerun: (spec) => void this.runFit(spec),
    });
  }

  async runFit(spec: ModelSpecBody): Promise<void> {
    try {
      const result = await this.api.inference(spec);
      this.history.push({ spec, filter: filterString(this.state), result });
      this.inferenceError = null;
    } catch (err) {
      // rank deficiency / too-few-rows messages surfaced verbatim
      this.inferenceError = err instanceof ApiError ? err.detail : describe(err);
    }
    this.renderInferencePanel();
  }
}

function describe(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

export function mount(root: HTMLElement, options: AppOptions = {}): App {
  const app = new App(root, new ApiClient(options.apiBase ?? ""), options);
  void app.start();
  return app;
}
