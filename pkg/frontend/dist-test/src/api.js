export class ApiError extends Error {
    status;
    url;
    constructor(status, url, detail) {
        super(`${status} from ${url}: ${detail}`);
        this.status = status;
        this.url = url;
    }
}
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl = "", fetchFn = (url, init) => fetch(url, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async get(path) {
        const url = this.baseUrl + path;
        const response = await this.fetchFn(url);
        if (!response.ok) {
            throw new ApiError(response.status, url, JSON.stringify(await response.json().catch(() => ({}))));
        }
        return (await response.json());
    }
    async post(path, body) {
        const url = this.baseUrl + path;
        const response = await this.fetchFn(url, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
        if (!response.ok) {
            throw new ApiError(response.status, url, JSON.stringify(await response.json().catch(() => ({}))));
        }
        return (await response.json());
    }
    yearly() {
        return this.get("/api/stats/yearly");
    }
    stations() {
        return this.get("/api/stats/stations");
    }
    sdSeries() {
        return this.get("/api/sd-series");
    }
    grid(month) {
        return this.get(`/api/grid?month=${encodeURIComponent(month)}`);
    }
    reachability(k) {
        return this.get(`/api/reachability?k=${k}`);
    }
    underserved(k) {
        return this.get(`/api/underserved?k=${k}`);
    }
    stationProfile(id, k) {
        return this.get(`/api/station/${encodeURIComponent(id)}/profile?k=${k}`);
    }
    optimize(body) {
        return this.post("/api/optimize", body);
    }
    simulate(body) {
        return this.post("/api/simulate", body);
    }
    evaluate(body) {
        return this.post("/api/evaluate", body);
    }
    job(id) {
        return this.get(`/api/jobs/${encodeURIComponent(id)}`);
    }
    pareto(jobId) {
        return this.get(`/api/solutions/${encodeURIComponent(jobId)}/pareto`);
    }
    /** Poll a job until it settles; interval injectable for tests. */
    async waitForJob(id, sleep = (ms) => new Promise((r) => setTimeout(r, ms)), intervalMs = 400) {
        for (;;) {
            const snap = await this.job(id);
            if (snap.state === "done" || snap.state === "failed")
                return snap;
            await sleep(intervalMs);
        }
    }
}
