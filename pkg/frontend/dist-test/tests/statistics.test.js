import assert from "node:assert/strict";
import { test } from "node:test";
import { findAll, findOne } from "../src/scene.js";
import { renderStatistics } from "../src/views/statistics.js";
import { loadFixture } from "./helpers.js";
const yearly = loadFixture("stats-yearly.json");
const stations = loadFixture("stats-stations.json");
test("every year bar traces to its payload count and heights are proportional", () => {
    const scene = renderStatistics(yearly, stations);
    const bars = findAll(scene, "year-bar");
    assert.equal(bars.length, Object.keys(yearly).length);
    const worst = Math.max(...Object.values(yearly));
    for (const bar of bars) {
        const year = bar.data?.year;
        assert.equal(bar.data?.count, yearly[year]);
        const expected = (yearly[year] / worst) * 160;
        assert.ok(Math.abs(bar.height - expected) < 1e-9, `bar ${year}`);
    }
});
test("single-year fixture renders one bar of proportional height", () => {
    const scene = renderStatistics({ "2014": 3 }, { stations: [] });
    const bars = findAll(scene, "year-bar");
    assert.equal(bars.length, 1);
    assert.equal(bars[0].data?.count, 3);
    assert.equal(bars[0].height, 160); // the only bar spans the full chart
});
test("empty dataset shows the empty-state message", () => {
    const scene = renderStatistics({}, { stations: [] });
    const empty = findOne(scene, "empty-state");
    assert.match(empty.text, /no fire records/);
    assert.equal(findAll(scene, "year-bar").length, 0);
});
test("station table has one row per station with role counts from the payload", () => {
    const scene = renderStatistics(yearly, stations);
    const rows = findAll(scene, "station-row");
    assert.equal(rows.length, stations.stations.length);
    for (const row of rows) {
        const source = stations.stations.find((s) => s.id === row.data?.id);
        assert.equal(row.data?.total, source.actions.total);
        assert.equal(row.data?.primary, source.actions.primary);
        assert.equal(row.data?.backup, source.actions.backup);
        assert.equal(source.actions.primary + source.actions.backup, source.actions.total);
    }
});
test("API failure renders the error banner", () => {
    const scene = renderStatistics(null, null);
    const banner = findOne(scene, "error-banner");
    assert.match(banner.text, /API request failed/);
});
