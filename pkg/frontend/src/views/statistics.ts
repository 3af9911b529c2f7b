// Statistics Overview: yearly incident bars plus the station table with
// per-role action counts.

import { GroupNode, SceneNode, group } from "../scene.js";
import { linearScale, maxOf } from "../scale.js";
import type { StationsPayload, YearlyCounts } from "../types.js";

export interface StatisticsLayout {
  width: number;
  chartHeight: number;
  rowHeight: number;
}

const DEFAULT_LAYOUT: StatisticsLayout = { width: 420, chartHeight: 160, rowHeight: 18 };

export function renderStatistics(
  yearly: YearlyCounts | null,
  stations: StationsPayload | null,
  layout: StatisticsLayout = DEFAULT_LAYOUT,
): GroupNode {
  if (yearly === null || stations === null) {
    return group(
      [
        {
          kind: "text",
          x: 8,
          y: 20,
          text: "statistics unavailable: API request failed",
          cls: "error-banner",
        },
      ],
      { cls: "statistics-view" },
    );
  }

  const years = Object.keys(yearly).sort();
  const children: SceneNode[] = [];

  if (years.length === 0) {
    children.push({
      kind: "text",
      x: 8,
      y: 20,
      text: "no fire records in the selected period",
      cls: "empty-state",
    });
  } else {
    const worst = maxOf(years.map((y) => yearly[y]));
    const h = linearScale([0, worst], [0, layout.chartHeight]);
    const barWidth = layout.width / years.length;
    years.forEach((year, n) => {
      const count = yearly[year];
      const height = h(count);
      children.push({
        kind: "rect",
        x: n * barWidth + 2,
        y: layout.chartHeight - height,
        width: barWidth - 4,
        height,
        fill: "#c2452d",
        cls: "year-bar",
        data: { year, count },
        title: `${year}: ${count} fires`,
      });
      children.push({
        kind: "text",
        x: n * barWidth + barWidth / 2,
        y: layout.chartHeight + 14,
        text: year,
        anchor: "middle",
        cls: "year-label",
      });
    });
  }

  const tableTop = layout.chartHeight + 30;
  const rows: SceneNode[] = stations.stations.map((s, n) => ({
    kind: "text" as const,
    x: 8,
    y: tableTop + (n + 1) * layout.rowHeight,
    text: `${s.id}  commissioned ${s.commissioned}  actions ${s.actions.total} (primary ${s.actions.primary} / backup ${s.actions.backup})`,
    cls: "station-row",
    data: {
      id: s.id,
      commissioned: s.commissioned,
      total: s.actions.total,
      primary: s.actions.primary,
      backup: s.actions.backup,
    },
  }));

  return group([...children, ...rows], { cls: "statistics-view" });
}
