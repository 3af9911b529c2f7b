import { readFileSync } from "node:fs";
import path from "node:path";

import type { FetchLike, FetchResponseLike } from "../src/api.js";

export function loadFixture<T>(name: string): T {
  const file = path.join(process.cwd(), "tests", "fixtures", name);
  return JSON.parse(readFileSync(file, "utf-8")) as T;
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

/** Recording fetch fake: maps "METHOD path-prefix" to canned payloads. */
export function fakeFetch(routes: Record<string, unknown>): {
  fetchFn: FetchLike;
  calls: RecordedCall[];
} {
  const calls: RecordedCall[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    calls.push({ url, method, body: init?.body ? JSON.parse(init.body) : undefined });
    for (const [route, payload] of Object.entries(routes)) {
      const [routeMethod, prefix] = route.split(" ", 2);
      if (routeMethod === method && url.startsWith(prefix)) {
        const response: FetchResponseLike = {
          ok: true,
          status: 200,
          json: async () => payload,
        };
        return response;
      }
    }
    return { ok: false, status: 404, json: async () => ({ detail: `no route for ${method} ${url}` }) };
  };
  return { fetchFn, calls };
}
