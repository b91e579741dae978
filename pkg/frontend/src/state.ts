/** Shared view state: one filter drives all four views, and the whole state
 * round-trips through the URL for shareable sessions. */

export type TimelineMode = "stacked" | "small-multiples";

export interface ViewState {
  frames: string[]; // selected frames; empty = all
  stances: string[];
  dateFrom: string | null; // ISO dates
  dateTo: string | null;
  states: string[];
  fips: string[];
  feature: string; // f1..f14 key shown on the map
  demographic: string;
  timelineMode: TimelineMode;
  binWidth: number | null; // null = dataset default
  advanced: boolean; // expose entropy/advanced features in selectors
}

export const DEFAULT_STATE: ViewState = {
  frames: [],
  stances: [],
  dateFrom: null,
  dateTo: null,
  states: [],
  fips: [],
  feature: "f1",
  demographic: "vote_margin",
  timelineMode: "stacked",
  binWidth: null,
  advanced: false,
};

/** Server filter-grammar string for the current selection, or null if empty.
 * Grammar: semicolon-separated key=value, set values comma-separated. */
export function filterString(s: ViewState): string | null {
  const parts: string[] = [];
  if (s.frames.length) parts.push(`frame=${[...s.frames].sort().join(",")}`);
  if (s.stances.length) parts.push(`stance=${[...s.stances].sort().join(",")}`);
  if (s.dateFrom) parts.push(`from=${s.dateFrom}`);
  if (s.dateTo) parts.push(`to=${s.dateTo}`);
  if (s.states.length) parts.push(`state=${[...s.states].sort().join(",")}`);
  if (s.fips.length) parts.push(`fips=${[...s.fips].sort().join(",")}`);
  return parts.length ? parts.join(";") : null;
}

export function toParams(s: ViewState): URLSearchParams {
  const p = new URLSearchParams();
  const setList = (key: string, v: string[]) => {
    if (v.length) p.set(key, [...v].sort().join(","));
  };
  setList("frames", s.frames);
  setList("stances", s.stances);
  if (s.dateFrom) p.set("from", s.dateFrom);
  if (s.dateTo) p.set("to", s.dateTo);
  setList("states", s.states);
  setList("fips", s.fips);
  if (s.feature !== DEFAULT_STATE.feature) p.set("feature", s.feature);
  if (s.demographic !== DEFAULT_STATE.demographic) p.set("demo", s.demographic);
  if (s.timelineMode !== DEFAULT_STATE.timelineMode) p.set("tl", s.timelineMode);
  if (s.binWidth !== null) p.set("width", String(s.binWidth));
  if (s.advanced) p.set("adv", "1");
  return p;
}

export function fromParams(p: URLSearchParams): ViewState {
  const list = (key: string): string[] => {
    const raw = p.get(key);
    return raw ? raw.split(",").filter((v) => v.length) : [];
  };
  const width = p.get("width");
  const mode = p.get("tl");
  return {
    frames: list("frames"),
    stances: list("stances"),
    dateFrom: p.get("from"),
    dateTo: p.get("to"),
    states: list("states"),
    fips: list("fips"),
    feature: p.get("feature") ?? DEFAULT_STATE.feature,
    demographic: p.get("demo") ?? DEFAULT_STATE.demographic,
    timelineMode: mode === "small-multiples" ? "small-multiples" : "stacked",
    binWidth: width !== null && /^\d+$/.test(width) ? parseInt(width, 10) : null,
    advanced: p.get("adv") === "1",
  };
}

export function toggleInList(list: string[], value: string): string[] {
  return list.includes(value) ? list.filter((v) => v !== value) : [...list, value];
}

/** Structural equality over the parts that drive API requests. */
export function sameFilter(a: ViewState, b: ViewState): boolean {
  return filterString(a) === filterString(b);
}
