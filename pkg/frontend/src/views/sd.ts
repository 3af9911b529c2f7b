// Fire Service Supply & Demand view: two subplots split by the time axis.
// Above: step lines for predicted (solid) and actual (dashed) monthly counts
// with signed attribution bars stacked against the prediction line; features
// with negative values sit above the line (they push the prediction down),
// positive ones below. Beneath: the yearly response-time distribution drawn
// downward as violin boxes, plus station commissioning ticks on the axis.

import { GroupNode, SceneNode, group } from "../scene.js";
import { linearScale, maxOf } from "../scale.js";
import type { SdPayload } from "../types.js";
import type { TimeWindow } from "../state.js";

export interface SdLayout {
  width: number;
  upperHeight: number;
  lowerHeight: number;
  left: number;
}

const DEFAULT_LAYOUT: SdLayout = { width: 720, upperHeight: 220, lowerHeight: 150, left: 36 };

export const FEATURE_COLORS = ["#e0903f", "#4d9de0", "#7bb661", "#b06ab3", "#c96567"];

export function featureColor(index: number): string {
  return FEATURE_COLORS[index % FEATURE_COLORS.length];
}

export function renderSdView(
  payload: SdPayload | null,
  window: TimeWindow | null = null,
  layout: SdLayout = DEFAULT_LAYOUT,
): GroupNode {
  if (payload === null) {
    return group(
      [{ kind: "text", x: 8, y: 20, text: "supply & demand unavailable: API request failed", cls: "error-banner" }],
      { cls: "sd-view" },
    );
  }
  const children: SceneNode[] = [];
  const months = payload.series.map((p) => p.month);
  const axisY = layout.upperHeight;

  // Scale the count axis to fit lines plus the largest stacked extent.
  const stackMagnitudes = payload.series.map((p) =>
    Object.values(p.phi).reduce((acc, v) => acc + Math.abs(v), 0),
  );
  const top = maxOf([
    ...payload.series.map((p) => p.actual),
    ...payload.series.map((p, n) => p.predicted + stackMagnitudes[n]),
  ]);
  const yCount = linearScale([0, top], [axisY, 0]);
  const pxPerUnit = axisY / top;
  const x = linearScale([0, Math.max(1, months.length - 1)], [layout.left, layout.width]);

  // Step lines: predicted solid, actual dashed.
  const stepPoints = (value: (n: number) => number): [number, number][] => {
    const pts: [number, number][] = [];
    payload.series.forEach((_, n) => {
      const y = yCount(value(n));
      const x0 = n === 0 ? x(0) : (x(n - 1) + x(n)) / 2;
      const x1 = n === months.length - 1 ? x(n) : (x(n) + x(n + 1)) / 2;
      pts.push([x0, y], [x1, y]);
    });
    return pts;
  };
  children.push({
    kind: "polyline",
    points: stepPoints((n) => payload.series[n].predicted),
    stroke: "#222",
    fill: "none",
    cls: "predicted-line",
    data: { values: payload.series.map((p) => p.predicted) },
  });
  children.push({
    kind: "polyline",
    points: stepPoints((n) => payload.series[n].actual),
    stroke: "#222",
    dash: "5,3",
    fill: "none",
    cls: "actual-line",
    data: { values: payload.series.map((p) => p.actual) },
  });

  // Signed attribution bars stacked against the prediction line.
  const barWidth = Math.max(2, (layout.width - layout.left) / months.length - 2);
  payload.series.forEach((point, n) => {
    const lineY = yCount(point.predicted);
    let upOffset = 0; // negative values climb above the line
    let downOffset = 0; // positive values hang below it
    payload.features.forEach((feature, f) => {
      const value = point.phi[feature] ?? 0;
      if (value === 0) return;
      const h = Math.abs(value) * pxPerUnit;
      const above = value < 0;
      const y = above ? lineY - upOffset - h : lineY + downOffset;
      if (above) upOffset += h;
      else downOffset += h;
      children.push({
        kind: "rect",
        x: x(n) - barWidth / 2,
        y,
        width: barWidth,
        height: h,
        fill: featureColor(f),
        cls: above ? "phi-bar phi-negative" : "phi-bar phi-positive",
        data: { month: point.month, feature, value, lineY },
        title: `${point.month} ${feature}: ${value.toFixed(3)}`,
      });
    });
  });

  // Axis and brushed-window shading.
  children.push({
    kind: "line",
    x1: layout.left,
    y1: axisY,
    x2: layout.width,
    y2: axisY,
    stroke: "#444",
    cls: "time-axis",
  });
  if (window) {
    const first = months.findIndex((m) => m >= window.start);
    let last = -1;
    months.forEach((m, n) => {
      if (m <= window.end) last = n;
    });
    if (first !== -1 && last >= first) {
      children.push({
        kind: "rect",
        x: x(first) - barWidth / 2,
        y: 0,
        width: x(last) - x(first) + barWidth,
        height: axisY + layout.lowerHeight,
        fill: "rgba(120,140,220,0.12)",
        cls: "brush-window",
        data: { start: window.start, end: window.end },
      });
    }
  }

  // Lower subplot: response-time distribution per year, drawn downward.
  const worstResponse = maxOf(payload.response_distribution.map((d) => d.max));
  const yResp = linearScale([0, worstResponse], [axisY, axisY + layout.lowerHeight]);
  const years = payload.response_distribution;
  const xYear = linearScale([0, Math.max(1, years.length - 1)], [layout.left + 40, layout.width - 40]);
  years.forEach((d, n) => {
    const cx = xYear(n);
    children.push({
      kind: "line",
      x1: cx,
      y1: yResp(d.min),
      x2: cx,
      y2: yResp(d.max),
      stroke: "#557",
      cls: "violin-whisker",
      data: { year: d.year, min: d.min, max: d.max },
    });
    children.push({
      kind: "rect",
      x: cx - 9,
      y: yResp(d.q1),
      width: 18,
      height: yResp(d.q3) - yResp(d.q1),
      fill: "rgba(85,85,119,0.45)",
      cls: "violin-box",
      data: { year: d.year, q1: d.q1, q3: d.q3, count: d.count },
      title: `${d.year}: q1 ${d.q1.toFixed(1)} / median ${d.median.toFixed(1)} / q3 ${d.q3.toFixed(1)}`,
    });
    children.push({
      kind: "line",
      x1: cx - 9,
      y1: yResp(d.median),
      x2: cx + 9,
      y2: yResp(d.median),
      stroke: "#113",
      cls: "violin-median",
      data: { year: d.year, median: d.median },
    });
    children.push({
      kind: "text",
      x: cx,
      y: axisY + layout.lowerHeight + 14,
      text: String(d.year),
      anchor: "middle",
      cls: "year-tick",
    });
  });

  // Station commissioning ticks on the shared time axis.
  for (const s of payload.station_commissioned) {
    const month = s.date.slice(0, 7);
    const n = months.findIndex((m) => m >= month);
    if (n === -1) continue;
    children.push({
      kind: "line",
      x1: x(n),
      y1: axisY - 5,
      x2: x(n),
      y2: axisY + 5,
      stroke: "#b8860b",
      width: 2,
      cls: "commission-tick",
      data: { id: s.id, date: s.date },
      title: `${s.id} commissioned ${s.date}`,
    });
  }

  return group(children, { cls: "sd-view", data: { months } });
}

/** Maps a pixel x back to the nearest month; used by the brush controller. */
export function monthAtX(
  payload: SdPayload,
  px: number,
  layout: SdLayout = DEFAULT_LAYOUT,
): string {
  const months = payload.series.map((p) => p.month);
  const x = linearScale([0, Math.max(1, months.length - 1)], [layout.left, layout.width]);
  let best = 0;
  let bestDist = Infinity;
  months.forEach((_, n) => {
    const d = Math.abs(x(n) - px);
    if (d < bestDist) {
      bestDist = d;
      best = n;
    }
  });
  return months[best];
}
