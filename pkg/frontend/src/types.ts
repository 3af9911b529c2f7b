// Payload types mirroring the stationplan HTTP API. The UI performs no domain
// computation: every number on screen traces back to one of these fields.

export type YearlyCounts = Record<string, number>;

export interface StationActions {
  total: number;
  primary: number;
  backup: number;
}

export interface StationRow {
  id: string;
  lat: number;
  lng: number;
  commissioned: string;
  staffing: number | null;
  actions: StationActions;
}

export interface StationsPayload {
  stations: StationRow[];
}

export interface SdPoint {
  month: string;
  actual: number;
  predicted: number;
  phi: Record<string, number>;
}

export interface YearDistribution {
  year: number;
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  count: number;
}

export interface SdPayload {
  features: string[];
  series: SdPoint[];
  response_distribution: YearDistribution[];
  station_commissioned: { id: string; date: string }[];
}

export interface GridSpecPayload {
  origin_lat: number;
  origin_lng: number;
  cell_size_km: number;
  rows: number;
  cols: number;
}

export interface GridCell {
  i: number;
  j: number;
  lat: number;
  lng: number;
  fire_count: number;
  avg_response_min: number;
  features: Record<string, number>;
  phi?: Record<string, number>;
  abs_phi_sum?: number;
}

export interface GridFire {
  id: string;
  lat: number;
  lng: number;
  response_time_min: number;
  station_id: string;
  role: string;
}

export interface GridPayload {
  month: string;
  grid: GridSpecPayload;
  cells: GridCell[];
  fires: GridFire[];
}

export interface MultiPolygon {
  type: "MultiPolygon";
  coordinates: number[][][][]; // polygons -> rings -> [lng, lat]
}

export interface ReachabilityPayload {
  k: number;
  boundaries: MultiPolygon;
  reachable_cells: number;
  total_cells: number;
}

export interface UnderservedCell {
  i: number;
  j: number;
  lat: number;
  lng: number;
  fire_count: number;
  avg_response_min: number;
  score: number;
}

export interface UnderservedPayload {
  k: number;
  cells: UnderservedCell[];
}

export interface TimeSector {
  start_hour: number;
  end_hour: number;
  below_k: number;
  at_or_above_k: number;
}

export interface ProfilePayload {
  station_id: string;
  k: number;
  total_actions: number;
  roles: Record<string, number>;
  directions: number[];
  time_sectors: TimeSector[];
}

export interface ParetoSolution {
  genome: [number, number][];
  objectives: Record<string, number>;
  normalized_objectives: Record<string, number>;
  rank: number;
  crowding: number | null;
}

export interface ParetoPayload {
  criteria: string[];
  seed: number;
  config: Record<string, number | null>;
  solutions: ParetoSolution[];
  correlation: number[][] | null;
  zero_variance_criteria: string[];
}

export interface JobPayload {
  id: string;
  kind: "optimize" | "simulate";
  state: "queued" | "running" | "done" | "failed";
  progress: number;
  error: string | null;
  result?: unknown;
}

export interface SimNode {
  id: string;
  kind: "existing" | "new";
  before?: number;
  after?: number;
  assigned?: number;
  geo?: { lat: number; lng: number };
}

export interface SimEdge {
  from: string;
  to: string;
  weight: number;
}

export interface SimPeriod {
  period: string;
  total_transferred: number;
  nodes: SimNode[];
  edges: SimEdge[];
}

export interface SimReport {
  bucketing: string;
  new_stations: { id: string; lat: number; lng: number }[];
  periods: SimPeriod[];
  flags: string[];
}

export interface ComparisonPayload {
  bucketing: string;
  periods: string[];
  totals: Record<string, number[]>;
  cumulative: Record<string, number[]>;
}

export interface SimulationResult {
  reports: Record<string, SimReport>;
  comparison: ComparisonPayload;
}

export interface EvaluatePayload {
  objectives: Record<string, number>;
}

export interface AreaPayloadBody {
  polygon?: [number, number][];
  cells?: [number, number][];
}

export interface OptimizeRequestBody {
  area: AreaPayloadBody;
  criteria: string[];
  k_new: number;
  ga?: {
    population?: number;
    generations?: number;
    crossover_prob?: number;
    mutation_prob?: number | null;
  };
  seed?: number;
  new_stations_only?: boolean;
}

export interface SimulateRequestBody {
  solutions: Record<string, [number, number][]>;
  bucketing?: string;
  include_backup?: boolean;
}

export interface EvaluateRequestBody {
  genome: [number, number][];
  criteria: string[];
  area?: AreaPayloadBody;
  k?: number;
}
