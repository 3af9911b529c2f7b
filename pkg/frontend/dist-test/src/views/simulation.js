// Simulation & comparison view: per-solution transfer lines over time with
// node-link glyphs at the connection points. Blue nodes are simulated new
// stations sized by assigned rescues; red existing nodes draw the real
// before-count as the outer circle and the post-reassignment count as the
// inner one; edge thickness carries the transferred count. Row mode lays each
// solution out as its own timeline; column mode aligns all solutions on a
// shared period column.
import { group } from "../scene.js";
import { extent, linearScale, maxOf } from "../scale.js";
const DEFAULT_LAYOUT = { width: 760, lineHeight: 120, glyphSize: 88 };
export function renderSimulation(result, mode, selected = null, layout = DEFAULT_LAYOUT) {
    if (result === null) {
        return group([{ kind: "text", x: 8, y: 20, text: "simulation unavailable: API request failed", cls: "error-banner" }], { cls: "simulation-view" });
    }
    const ids = (selected ?? Object.keys(result.reports)).filter((id) => id in result.reports).sort();
    const periods = result.comparison.periods;
    const worstTotal = maxOf(ids.flatMap((id) => result.comparison.totals[id] ?? []));
    const children = [];
    const x = linearScale([0, Math.max(1, periods.length - 1)], [70, layout.width - 30]);
    const transferLine = (id, row, top) => {
        const y = linearScale([0, worstTotal], [top + layout.lineHeight, top + 8]);
        const totals = result.comparison.totals[id];
        const marks = [
            {
                kind: "polyline",
                points: totals.map((v, n) => [x(n), y(v)]),
                stroke: lineColor(row),
                width: 2,
                fill: "none",
                cls: "transfer-line",
                data: { solution: id, totals },
            },
        ];
        totals.forEach((v, n) => {
            marks.push({
                kind: "circle",
                cx: x(n),
                cy: y(v),
                r: 3,
                fill: lineColor(row),
                cls: "transfer-point",
                data: { solution: id, period: periods[n], total: v },
                title: `${id} ${periods[n]}: ${v} transferred`,
            });
        });
        return marks;
    };
    const glyphFor = (id, periodName) => result.reports[id].periods.find((p) => p.period === periodName);
    if (mode === "row") {
        // One row per solution: its line with glyphs under its own timeline.
        ids.forEach((id, row) => {
            const rowTop = row * (layout.lineHeight + layout.glyphSize + 16);
            children.push(...transferLine(id, row, rowTop));
            children.push({
                kind: "text",
                x: 4,
                y: rowTop + 16,
                text: id,
                cls: "solution-line-label",
                data: { solution: id },
            });
            periods.forEach((periodName, n) => {
                const period = glyphFor(id, periodName);
                if (!period)
                    return;
                children.push(renderPeriodGlyph(period, id, layout.glyphSize, {
                    cls: "period-glyph",
                    translate: [x(n), rowTop + layout.lineHeight + layout.glyphSize / 2],
                    data: { solution: id, period: periodName, column: n },
                }));
            });
        });
    }
    else {
        // Column mode: all lines share one chart; below it, one column per
        // period with every solution's glyph stacked at the same x.
        ids.forEach((id, row) => {
            children.push(...transferLine(id, row, 0));
            children.push({
                kind: "text",
                x: 4,
                y: 16 + row * 14,
                text: id,
                cls: "solution-line-label",
                data: { solution: id },
            });
        });
        const stackTop = layout.lineHeight + 16;
        periods.forEach((periodName, n) => {
            ids.forEach((id, row) => {
                const period = glyphFor(id, periodName);
                if (!period)
                    return;
                children.push(renderPeriodGlyph(period, id, layout.glyphSize, {
                    cls: "period-glyph column-aligned",
                    translate: [x(n), stackTop + layout.glyphSize / 2 + row * (layout.glyphSize + 6)],
                    data: { solution: id, period: periodName, column: n },
                }));
            });
        });
    }
    return group(children, {
        cls: "simulation-view",
        data: { mode, periods, solutions: ids },
    });
}
function lineColor(row) {
    const palette = ["#2d6cc2", "#c2452d", "#3e8e5a", "#8a56b0", "#b8860b"];
    return palette[row % palette.length];
}
/** One node-link glyph: stations placed by their real relative geography. */
export function renderPeriodGlyph(period, solution, size, extra) {
    const children = [];
    const located = period.nodes.filter((n) => n.geo);
    const lats = located.map((n) => n.geo.lat);
    const lngs = located.map((n) => n.geo.lng);
    const [latLo, latHi] = extent(lats);
    const [lngLo, lngHi] = extent(lngs);
    const px = linearScale([lngLo, lngHi], [-size / 2 + 10, size / 2 - 10]);
    const py = linearScale([latLo, latHi], [size / 2 - 10, -size / 2 + 10]);
    const positions = new Map();
    for (const node of period.nodes) {
        const pos = node.geo ? [px(node.geo.lng), py(node.geo.lat)] : [0, 0];
        positions.set(node.id, pos);
    }
    const counts = period.nodes.map((n) => n.kind === "existing" ? n.before ?? 0 : n.assigned ?? 0);
    const worst = maxOf(counts);
    const rOf = (v) => (worst > 0 ? Math.sqrt(v / worst) * (size / 6) : 0);
    const worstEdge = maxOf(period.edges.map((e) => e.weight));
    for (const edge of period.edges) {
        const from = positions.get(edge.from);
        const to = positions.get(edge.to);
        if (!from || !to)
            continue;
        children.push({
            kind: "line",
            x1: from[0],
            y1: from[1],
            x2: to[0],
            y2: to[1],
            stroke: "rgba(60,60,60,0.6)",
            width: worstEdge > 0 ? 0.5 + (edge.weight / worstEdge) * 4.5 : 0.5,
            cls: "transfer-edge",
            data: { solution, period: period.period, from: edge.from, to: edge.to, weight: edge.weight },
            title: `${edge.from} -> ${edge.to}: ${edge.weight}`,
        });
    }
    for (const node of period.nodes) {
        const [nx, ny] = positions.get(node.id);
        if (node.kind === "existing") {
            children.push({
                kind: "circle",
                cx: nx,
                cy: ny,
                r: rOf(node.before ?? 0),
                fill: "rgba(194,69,45,0.35)",
                stroke: "#c2452d",
                cls: "node-outer",
                data: { solution, period: period.period, id: node.id, before: node.before },
            });
            children.push({
                kind: "circle",
                cx: nx,
                cy: ny,
                r: rOf(node.after ?? 0),
                fill: "#c2452d",
                cls: "node-inner",
                data: { solution, period: period.period, id: node.id, after: node.after },
                title: `${node.id}: ${node.before} before, ${node.after} after`,
            });
        }
        else {
            children.push({
                kind: "circle",
                cx: nx,
                cy: ny,
                r: rOf(node.assigned ?? 0),
                fill: "#2d6cc2",
                cls: "node-new",
                data: { solution, period: period.period, id: node.id, assigned: node.assigned },
                title: `${node.id}: ${node.assigned} assigned`,
            });
        }
    }
    return group(children, extra);
}
