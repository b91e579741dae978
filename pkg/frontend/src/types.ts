/** Payload shapes of the analytics service API. Mirrors the server exactly. */

export interface FrameInfo {
  name: string;
  foundation: string;
  polarity: "virtue" | "vice";
}

export interface MetaPayload {
  version: number;
  n_tweets: number;
  n_counties: number;
  n_contexts: number;
  n_feature_vectors: number;
  date_range: { start: string | null; end: string | null };
  has_covid: boolean;
  bin_width_days: number;
  frames: FrameInfo[];
  features: Record<string, string>; // f1..f14 -> human name
  context_fields: string[];
  demographics: string[];
  states: string[];
}

export interface SummaryRow {
  frame: string;
  count: number;
  pro_share: number | null;
  mean_sentiment: number | null;
  vivid_share: number | null;
  mean_virality: number | null;
}

export interface SummaryPayload {
  version: number;
  total: number;
  frames: SummaryRow[];
}

export interface TimelineBin {
  bin_start: string;
  width_days: number;
  total: number;
  frame_counts: Record<string, number>;
  pro_count: number;
  anti_count: number;
  mean_sentiment: number | null;
  total_virality: number | null;
  new_cases?: number;
  new_deaths?: number;
}

export interface TimelinePayload {
  version: number;
  width_days: number;
  bins: TimelineBin[];
}

export interface MapCounty {
  fips: string;
  state: string;
  n_tweets: number;
  feature_value: number | null;
  demographic_value: number | null;
}

export interface MapPayload {
  version: number;
  feature: string;
  demographic: string;
  counties: MapCounty[];
}

export interface TweetRecord {
  id: string;
  timestamp: string;
  lat: number;
  lon: number;
  frame: string;
  stance: string;
  sentiment: number | null;
  vivid: boolean;
  virality: number | null;
  text: string;
  hashtags: string[];
  fips: string;
}

export interface TweetsPayload {
  version: number;
  total: number;
  limit: number;
  offset: number;
  tweets: TweetRecord[];
}

export interface ModelSpecBody {
  dependent: string;
  predictors: string[];
  include_intercept?: boolean;
}

export interface ModelDict {
  terms: string[];
  coefficients: number[];
  std_errors: number[];
  t_stats: number[];
  p_values: number[];
  r_squared: number;
  n_observations: number;
  dof: number;
  excluded_rows: number;
}

export interface InferencePayload {
  version: number;
  spec: ModelSpecBody;
  model: ModelDict;
}

export interface GeometryPayload {
  version: number;
  geojson: {
    type: "FeatureCollection";
    features: Array<{
      type: "Feature";
      properties: { fips: string; name: string; state: string };
      geometry: {
        type: "Polygon" | "MultiPolygon";
        coordinates: number[][][] | number[][][][];
      };
    }>;
  };
}
