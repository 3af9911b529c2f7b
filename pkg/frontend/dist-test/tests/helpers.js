import { readFileSync } from "node:fs";
import path from "node:path";
export function loadFixture(name) {
    const file = path.join(process.cwd(), "tests", "fixtures", name);
    return JSON.parse(readFileSync(file, "utf-8"));
}
/** Recording fetch fake: maps "METHOD path-prefix" to canned payloads. */
export function fakeFetch(routes) {
    const calls = [];
    const fetchFn = async (url, init) => {
        const method = init?.method ?? "GET";
        calls.push({ url, method, body: init?.body ? JSON.parse(init.body) : undefined });
        for (const [route, payload] of Object.entries(routes)) {
            const [routeMethod, prefix] = route.split(" ", 2);
            if (routeMethod === method && url.startsWith(prefix)) {
                const response = {
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
