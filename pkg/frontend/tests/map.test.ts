import assert from "node:assert/strict";
import { test } from "node:test";

import { findAll, findOne, CircleNode, PathNode, PolylineNode } from "../src/scene.js";
import { renderCellSectorChart, renderMap, renderStationGlyph } from "../src/views/map.js";
import type {
  GridPayload,
  ProfilePayload,
  ReachabilityPayload,
  StationsPayload,
} from "../src/types.js";
import { loadFixture } from "./helpers.js";

const grid = loadFixture<GridPayload>("grid-month.json");
const reach9 = loadFixture<ReachabilityPayload>("reachability-k9.json");
const reach10 = loadFixture<ReachabilityPayload>("reachability-k10.json");
const stations = loadFixture<StationsPayload>("stats-stations.json");
const profile = loadFixture<ProfilePayload>("station-profile.json");

const profiles = { [profile.station_id]: profile };

test("low zoom renders grid glyphs whose counts come from the payload", () => {
  const scene = renderMap(grid, reach9, stations.stations, profiles, 1);
  const cells = findAll(scene, "grid-cell");
  assert.equal(cells.length, grid.cells.length);
  const circles = findAll(scene, "grid-circle") as CircleNode[];
  assert.equal(circles.length, grid.cells.filter((c) => c.fire_count > 0).length);
  for (const circle of circles) {
    const source = grid.cells.find((c) => c.i === circle.data?.i && c.j === circle.data?.j)!;
    assert.equal(circle.data?.fire_count, source.fire_count);
    assert.equal(circle.data?.avg_response_min, source.avg_response_min);
  }
  assert.equal(findAll(scene, "fire-dot").length, 0);
});

test("high zoom switches the grid layer to per-fire dots", () => {
  const scene = renderMap(grid, reach9, stations.stations, profiles, 5);
  assert.equal(findAll(scene, "grid-circle").length, 0);
  const dots = findAll(scene, "fire-dot");
  assert.equal(dots.length, grid.fires.length);
  // Ids repeat across (fire, station, role) rows, so compare as multisets.
  const key = (id: unknown, t: unknown, s: unknown) => `${id}|${t}|${s}`;
  const drawn = dots
    .map((d) => key(d.data?.id, d.data?.response_time_min, d.data?.station_id))
    .sort();
  const expected = grid.fires
    .map((f) => key(f.id, f.response_time_min, f.station_id))
    .sort();
  assert.deepEqual(drawn, expected);
});

test("reachability boundaries are dashed and the label is a pure passthrough", () => {
  const scene = renderMap(grid, reach9, stations.stations, profiles, 1);
  const rings = findAll(scene, "reach-boundary") as PolylineNode[];
  const expected = reach9.boundaries.coordinates.reduce((acc, poly) => acc + poly.length, 0);
  assert.equal(rings.length, expected);
  for (const ring of rings) assert.ok(ring.dash, "boundary must be dashed");
  const label = findOne(scene, "reach-label");
  assert.equal(label.data?.reachable_cells, reach9.reachable_cells);
  assert.equal(label.data?.k, reach9.k);
});

test("raising k grows or preserves the reachable region (payload passthrough)", () => {
  assert.ok(reach10.reachable_cells >= reach9.reachable_cells);
  const scene9 = renderMap(grid, reach9, stations.stations, profiles, 1);
  const scene10 = renderMap(grid, reach10, stations.stations, profiles, 1);
  const label9 = findOne(scene9, "reach-label").data?.reachable_cells as number;
  const label10 = findOne(scene10, "reach-label").data?.reachable_cells as number;
  assert.ok(label10 >= label9);
});

test("station glyph splits role arcs per payload and scales rose sectors", () => {
  const station = stations.stations.find((s) => s.id === profile.station_id)!;
  const glyph = renderStationGlyph(station, profile, 0, 0);
  const primaryArc = findOne(glyph, "role-arc-primary") as PathNode;
  const backupArc = findOne(glyph, "role-arc-backup") as PathNode;
  assert.equal(primaryArc.data?.primary, profile.roles["primary"]);
  assert.equal(backupArc.data?.backup, profile.roles["backup"]);

  const slow = findAll(glyph, "rose-slow");
  const expectedSlow = profile.time_sectors.filter((s) => s.at_or_above_k > 0).length;
  assert.equal(slow.length, expectedSlow);
  for (const wedge of slow) {
    const source = profile.time_sectors.find((s) => s.start_hour === wedge.data?.start_hour)!;
    assert.equal(wedge.data?.at_or_above_k, source.at_or_above_k);
  }

  const area = findOne(glyph, "direction-area");
  assert.deepEqual(area.data?.directions, profile.directions);
});

test("cell sector chart sizes by total |phi| and shades negative sectors", () => {
  const cell = grid.cells.find((c) => c.abs_phi_sum && c.abs_phi_sum > 0)!;
  const chart = renderCellSectorChart(cell, Math.max(...grid.cells.map((c) => c.abs_phi_sum ?? 0)));
  assert.equal(chart.data?.abs_phi_sum, cell.abs_phi_sum);
  const sectors = findAll(chart, "phi-sector");
  const nonZero = Object.values(cell.phi ?? {}).filter((v) => v !== 0).length;
  assert.equal(sectors.length, nonZero);
  let shareSum = 0;
  for (const sector of sectors) {
    const feature = sector.data?.feature as string;
    assert.equal(sector.data?.phi, cell.phi![feature]);
    shareSum += sector.data?.share as number;
    if ((cell.phi![feature] as number) < 0) {
      assert.ok(sector.cls?.includes("negative"), "negative sector needs the shading class");
    }
  }
  assert.ok(Math.abs(shareSum - 1) < 1e-9, "sector shares cover the circle");
});

test("API failure renders the error banner", () => {
  const scene = renderMap(null, null, [], {}, 1);
  findOne(scene, "error-banner");
});
