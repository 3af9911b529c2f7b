import assert from "node:assert/strict";
import { test } from "node:test";

import { findAll, findOne, PolylineNode, RectNode } from "../src/scene.js";
import { renderSdView } from "../src/views/sd.js";
import type { SdPayload } from "../src/types.js";
import { loadFixture } from "./helpers.js";

const payload = loadFixture<SdPayload>("sd-series.json");

test("predicted line is solid, actual dashed, both carrying payload values", () => {
  const scene = renderSdView(payload);
  const predicted = findOne(scene, "predicted-line") as PolylineNode;
  const actual = findOne(scene, "actual-line") as PolylineNode;
  assert.equal(predicted.dash, undefined);
  assert.ok(actual.dash);
  assert.deepEqual(predicted.data?.values, payload.series.map((p) => p.predicted));
  assert.deepEqual(actual.data?.values, payload.series.map((p) => p.actual));
});

test("negative attribution bars stack above the prediction line, positive below", () => {
  const scene = renderSdView(payload);
  const bars = findAll(scene, "phi-bar") as RectNode[];
  assert.ok(bars.length > 0);
  let sawNegative = 0;
  let sawPositive = 0;
  for (const bar of bars) {
    const value = bar.data?.value as number;
    const lineY = bar.data?.lineY as number;
    if (value < 0) {
      sawNegative += 1;
      // Above the line in screen space: the bar ends at or before the line y.
      assert.ok(bar.y + bar.height <= lineY + 1e-9, `negative bar below line: ${JSON.stringify(bar.data)}`);
      assert.ok(bar.cls?.includes("phi-negative"));
    } else {
      sawPositive += 1;
      assert.ok(bar.y >= lineY - 1e-9, `positive bar above line: ${JSON.stringify(bar.data)}`);
      assert.ok(bar.cls?.includes("phi-positive"));
    }
  }
  assert.ok(sawNegative > 0, "fixture must exercise negative values");
  assert.ok(sawPositive > 0, "fixture must exercise positive values");
});

test("every bar's value is a payload phi entry (no client-side computation)", () => {
  const scene = renderSdView(payload);
  for (const bar of findAll(scene, "phi-bar") as RectNode[]) {
    const month = bar.data?.month as string;
    const feature = bar.data?.feature as string;
    const point = payload.series.find((p) => p.month === month)!;
    assert.equal(bar.data?.value, point.phi[feature]);
  }
});

test("violin boxes match the payload quartiles", () => {
  const scene = renderSdView(payload);
  const boxes = findAll(scene, "violin-box") as RectNode[];
  assert.equal(boxes.length, payload.response_distribution.length);
  for (const box of boxes) {
    const source = payload.response_distribution.find((d) => d.year === box.data?.year)!;
    assert.equal(box.data?.q1, source.q1);
    assert.equal(box.data?.q3, source.q3);
    assert.ok(box.height >= 0);
  }
  const medians = findAll(scene, "violin-median");
  for (const m of medians) {
    const source = payload.response_distribution.find((d) => d.year === m.data?.year)!;
    assert.equal(m.data?.median, source.median);
  }
});

test("commission ticks appear for stations commissioned inside the axis", () => {
  const scene = renderSdView(payload);
  const ticks = findAll(scene, "commission-tick");
  const months = payload.series.map((p) => p.month);
  const inAxis = payload.station_commissioned.filter(
    (s) => s.date.slice(0, 7) <= months[months.length - 1],
  );
  assert.equal(ticks.length, inAxis.length);
});

test("a brushed window renders the shared-window shading", () => {
  const window = { start: payload.series[2].month, end: payload.series[5].month };
  const scene = renderSdView(payload, window);
  const brush = findOne(scene, "brush-window");
  assert.equal(brush.data?.start, window.start);
  assert.equal(brush.data?.end, window.end);
});

test("API failure renders the error banner", () => {
  const scene = renderSdView(null);
  findOne(scene, "error-banner");
});
