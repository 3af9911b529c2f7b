import type {
  EvaluatePayload,
  EvaluateRequestBody,
  GridPayload,
  JobPayload,
  OptimizeRequestBody,
  ParetoPayload,
  ProfilePayload,
  ReachabilityPayload,
  SdPayload,
  SimulateRequestBody,
  StationsPayload,
  UnderservedPayload,
  YearlyCounts,
} from "./types.js";

// Minimal fetch surface so tests can inject a recording fake.
export interface FetchResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<FetchResponseLike>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly url: string,
    detail: string,
  ) {
    super(`${status} from ${url}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const url = this.baseUrl + path;
    const response = await this.fetchFn(url);
    if (!response.ok) {
      throw new ApiError(response.status, url, JSON.stringify(await response.json().catch(() => ({}))));
    }
    return (await response.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const url = this.baseUrl + path;
    const response = await this.fetchFn(url, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      throw new ApiError(response.status, url, JSON.stringify(await response.json().catch(() => ({}))));
    }
    return (await response.json()) as T;
  }

  yearly(): Promise<YearlyCounts> {
    return this.get("/api/stats/yearly");
  }

  stations(): Promise<StationsPayload> {
    return this.get("/api/stats/stations");
  }

  sdSeries(): Promise<SdPayload> {
    return this.get("/api/sd-series");
  }

  grid(month: string): Promise<GridPayload> {
    return this.get(`/api/grid?month=${encodeURIComponent(month)}`);
  }

  reachability(k: number): Promise<ReachabilityPayload> {
    return this.get(`/api/reachability?k=${k}`);
  }

  underserved(k: number): Promise<UnderservedPayload> {
    return this.get(`/api/underserved?k=${k}`);
  }

  stationProfile(id: string, k: number): Promise<ProfilePayload> {
    return this.get(`/api/station/${encodeURIComponent(id)}/profile?k=${k}`);
  }

  optimize(body: OptimizeRequestBody): Promise<JobPayload> {
    return this.post("/api/optimize", body);
  }

  simulate(body: SimulateRequestBody): Promise<JobPayload> {
    return this.post("/api/simulate", body);
  }

  evaluate(body: EvaluateRequestBody): Promise<EvaluatePayload> {
    return this.post("/api/evaluate", body);
  }

  job(id: string): Promise<JobPayload> {
    return this.get(`/api/jobs/${encodeURIComponent(id)}`);
  }

  pareto(jobId: string): Promise<ParetoPayload> {
    return this.get(`/api/solutions/${encodeURIComponent(jobId)}/pareto`);
  }

  /** Poll a job until it settles; interval injectable for tests. */
  async waitForJob(
    id: string,
    sleep: (ms: number) => Promise<void> = (ms) => new Promise((r) => setTimeout(r, ms)),
    intervalMs = 400,
  ): Promise<JobPayload> {
    for (;;) {
      const snap = await this.job(id);
      if (snap.state === "done" || snap.state === "failed") return snap;
      await sleep(intervalMs);
    }
  }
}
