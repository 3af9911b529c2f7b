import assert from "node:assert/strict";
import { test } from "node:test";
import { ApiClient } from "../src/api.js";
import { findOne } from "../src/scene.js";
import { ViewState, monthsInWindow } from "../src/state.js";
import { renderSdView } from "../src/views/sd.js";
import { fakeFetch, loadFixture } from "./helpers.js";
const sd = loadFixture("sd-series.json");
const grid = loadFixture("grid-month.json");
test("view state validates k and comparison mode", () => {
    const state = new ViewState();
    assert.throws(() => state.set({ k: 0 }), RangeError);
    assert.throws(() => state.set({ comparisonMode: "diagonal" }), RangeError);
    assert.throws(() => new ViewState({ window: { start: "2015-05", end: "2015-01" } }), RangeError);
    state.set({ k: 10 });
    assert.equal(state.get().k, 10);
});
test("brushing emits one shared window every view reads", () => {
    const state = new ViewState();
    const seen = [];
    state.subscribe((s) => {
        if (s.window)
            seen.push(`${s.window.start}..${s.window.end}`);
    });
    state.setWindow("2014-03", "2014-09");
    assert.deepEqual(seen, ["2014-03..2014-09"]);
    // The S&D view shades exactly that window when re-rendered from state.
    const scene = renderSdView(sd, state.get().window);
    const brush = findOne(scene, "brush-window");
    assert.equal(brush.data?.start, "2014-03");
    assert.equal(brush.data?.end, "2014-09");
    // The map consumes the same window: it shows the last month inside it.
    const months = sd.series.map((p) => p.month);
    const visible = monthsInWindow(months, state.get().window);
    assert.equal(visible[0], "2014-03");
    assert.equal(visible[visible.length - 1], "2014-09");
});
test("the brushed window drives the map's month fetch", async () => {
    const { fetchFn, calls } = fakeFetch({ "GET /api/grid": grid });
    const api = new ApiClient("", fetchFn);
    const state = new ViewState();
    state.setWindow("2014-02", "2014-07");
    const months = sd.series.map((p) => p.month);
    const visible = monthsInWindow(months, state.get().window);
    await api.grid(visible[visible.length - 1]);
    assert.equal(calls.length, 1);
    assert.ok(calls[0].url.endsWith("month=2014-07"));
});
test("k slider change refetches reachability at the new k", async () => {
    const reach = loadFixture("reachability-k10.json");
    const { fetchFn, calls } = fakeFetch({ "GET /api/reachability": reach });
    const api = new ApiClient("", fetchFn);
    const state = new ViewState();
    state.set({ k: 10 });
    await api.reachability(state.get().k);
    assert.equal(calls[0].url, "/api/reachability?k=10");
});
