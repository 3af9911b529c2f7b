// Statistics Overview: yearly incident bars plus the station table with
// per-role action counts.
import { group } from "../scene.js";
import { linearScale, maxOf } from "../scale.js";
const DEFAULT_LAYOUT = { width: 420, chartHeight: 160, rowHeight: 18 };
export function renderStatistics(yearly, stations, layout = DEFAULT_LAYOUT) {
    if (yearly === null || stations === null) {
        return group([
            {
                kind: "text",
                x: 8,
                y: 20,
                text: "statistics unavailable: API request failed",
                cls: "error-banner",
            },
        ], { cls: "statistics-view" });
    }
    const years = Object.keys(yearly).sort();
    const children = [];
    if (years.length === 0) {
        children.push({
            kind: "text",
            x: 8,
            y: 20,
            text: "no fire records in the selected period",
            cls: "empty-state",
        });
    }
    else {
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
    const rows = stations.stations.map((s, n) => ({
        kind: "text",
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
