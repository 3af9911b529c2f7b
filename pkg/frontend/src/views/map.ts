// Spatiotemporal view: hierarchical grid layer (glyphs at low zoom, per-fire
// dots at high zoom), dashed k-minute reachability boundaries, stacked-rose
// station glyphs, and per-cell attribution sector charts for tooltips.

import { GroupNode, SceneNode, group } from "../scene.js";
import { linearScale, maxOf, responseColor } from "../scale.js";
import type {
  GridPayload,
  ProfilePayload,
  ReachabilityPayload,
  StationRow,
  GridCell,
} from "../types.js";

export interface MapLayout {
  width: number;
  height: number;
  /** Zoom at which grid glyphs give way to individual fire dots. */
  dotZoomThreshold: number;
}

const DEFAULT_LAYOUT: MapLayout = { width: 640, height: 640, dotZoomThreshold: 3 };

interface Projection {
  x(lng: number): number;
  y(lat: number): number;
  cellW: number;
  cellH: number;
}

function projection(grid: GridPayload["grid"], layout: MapLayout): Projection {
  const degPerCellLat = grid.cell_size_km / 111.32;
  const degPerCellLng =
    grid.cell_size_km / (111.32 * Math.cos((grid.origin_lat * Math.PI) / 180));
  const latMax = grid.origin_lat + grid.rows * degPerCellLat;
  const lngMax = grid.origin_lng + grid.cols * degPerCellLng;
  const x = linearScale([grid.origin_lng, lngMax], [0, layout.width]);
  const y = linearScale([grid.origin_lat, latMax], [layout.height, 0]); // north up
  return {
    x,
    y,
    cellW: layout.width / grid.cols,
    cellH: layout.height / grid.rows,
  };
}

export function renderMap(
  gridPayload: GridPayload | null,
  reach: ReachabilityPayload | null,
  stations: StationRow[],
  profiles: Record<string, ProfilePayload>,
  zoom: number,
  layout: MapLayout = DEFAULT_LAYOUT,
): GroupNode {
  if (gridPayload === null) {
    return group(
      [{ kind: "text", x: 8, y: 20, text: "map unavailable: API request failed", cls: "error-banner" }],
      { cls: "map-view" },
    );
  }
  const children: SceneNode[] = [];
  const proj = projection(gridPayload.grid, layout);
  const worstResponse = maxOf(gridPayload.cells.map((c) => c.avg_response_min));
  const maxCount = maxOf(gridPayload.cells.map((c) => c.fire_count));

  if (zoom < layout.dotZoomThreshold) {
    // Grid glyphs: square cell, inner circle area ~ fire count, color ~ response.
    for (const cell of gridPayload.cells) {
      const cx = proj.x(cell.lng);
      const cy = proj.y(cell.lat);
      children.push({
        kind: "rect",
        x: cx - proj.cellW / 2,
        y: cy - proj.cellH / 2,
        width: proj.cellW,
        height: proj.cellH,
        fill: "rgba(160,160,160,0.08)",
        cls: "grid-cell",
        data: { i: cell.i, j: cell.j, fire_count: cell.fire_count, avg_response_min: cell.avg_response_min },
      });
      if (cell.fire_count > 0) {
        const r = Math.sqrt(cell.fire_count / maxCount) * (Math.min(proj.cellW, proj.cellH) / 2 - 2);
        children.push({
          kind: "circle",
          cx,
          cy,
          r,
          fill: responseColor(cell.avg_response_min, worstResponse),
          cls: "grid-circle",
          data: { i: cell.i, j: cell.j, fire_count: cell.fire_count, avg_response_min: cell.avg_response_min },
          title: `cell (${cell.i}, ${cell.j}): ${cell.fire_count} fires, avg ${cell.avg_response_min.toFixed(1)} min`,
        });
      }
    }
  } else {
    // Dot mode: one mark per fire, colored by its own response time.
    for (const fire of gridPayload.fires) {
      children.push({
        kind: "circle",
        cx: proj.x(fire.lng),
        cy: proj.y(fire.lat),
        r: 3,
        fill: responseColor(fire.response_time_min, worstResponse),
        cls: "fire-dot",
        data: { id: fire.id, response_time_min: fire.response_time_min, station_id: fire.station_id },
      });
    }
  }

  // Black dashed reachability boundaries (k-minute region).
  if (reach) {
    for (const polygon of reach.boundaries.coordinates) {
      for (const ring of polygon) {
        children.push({
          kind: "polyline",
          points: ring.map(([lng, lat]) => [proj.x(lng), proj.y(lat)] as [number, number]),
          stroke: "#111",
          dash: "6,4",
          fill: "none",
          cls: "reach-boundary",
          data: { k: reach.k },
        });
      }
    }
    children.push({
      kind: "text",
      x: 8,
      y: 16,
      text: `${reach.reachable_cells}/${reach.total_cells} cells within ${reach.k} min`,
      cls: "reach-label",
      data: { k: reach.k, reachable_cells: reach.reachable_cells, total_cells: reach.total_cells },
    });
  }

  for (const station of stations) {
    const profile = profiles[station.id];
    children.push(
      renderStationGlyph(station, profile ?? null, proj.x(station.lng), proj.y(station.lat)),
    );
  }

  return group(children, { cls: "map-view", data: { month: gridPayload.month, zoom } });
}

/** Stacked-rose station glyph: outer role arcs, six-direction area chart,
 * and per-time-of-day sectors split at the k threshold (darker = slower). */
export function renderStationGlyph(
  station: StationRow,
  profile: ProfilePayload | null,
  cx: number,
  cy: number,
  radius = 26,
): GroupNode {
  const children: SceneNode[] = [];
  children.push({
    kind: "circle",
    cx: 0,
    cy: 0,
    r: 4,
    fill: "#7a1f1f",
    cls: "station-marker",
    data: { id: station.id },
    title: station.id,
  });
  if (profile) {
    const total = Math.max(1, profile.total_actions);
    // Right half-arc length encodes primary actions, left half backup.
    const primary = profile.roles["primary"] ?? 0;
    const backup = profile.roles["backup"] ?? 0;
    children.push(arcNode(radius + 5, -90, -90 + 180 * (primary / total), "#e0903f", "role-arc-primary", {
      id: station.id,
      primary,
    }));
    children.push(arcNode(radius + 5, 90, 90 + 180 * (backup / total), "#4d9de0", "role-arc-backup", {
      id: station.id,
      backup,
    }));

    // Six-direction service area silhouette.
    const worstDir = maxOf(profile.directions);
    const pts: [number, number][] = profile.directions.map((count, n) => {
      const angle = ((n * 60 - 90) * Math.PI) / 180; // sector 0 faces north
      const r = (count / worstDir) * radius;
      return [r * Math.cos(angle), r * Math.sin(angle)];
    });
    children.push({
      kind: "polyline",
      points: pts,
      closed: true,
      fill: "rgba(122,31,31,0.25)",
      stroke: "#7a1f1f",
      cls: "direction-area",
      data: { id: station.id, directions: profile.directions },
    });

    // Stacked rose: per time-of-day bucket, slow share (>= k) darker on top.
    const worstBucket = maxOf(profile.time_sectors.map((s) => s.below_k + s.at_or_above_k));
    const step = 360 / profile.time_sectors.length;
    profile.time_sectors.forEach((sector, n) => {
      const a0 = n * step - 90;
      const a1 = (n + 1) * step - 90;
      const totalLen = ((sector.below_k + sector.at_or_above_k) / worstBucket) * radius;
      const fastLen = ((sector.below_k) / worstBucket) * radius;
      if (totalLen <= 0) return;
      children.push(wedgeNode(fastLen, a0, a1, "rgba(224,144,63,0.55)", "rose-fast", {
        id: station.id,
        start_hour: sector.start_hour,
        below_k: sector.below_k,
      }));
      if (sector.at_or_above_k > 0) {
        children.push(
          wedgeNode(totalLen, a0, a1, "rgba(140,60,20,0.65)", "rose-slow", {
            id: station.id,
            start_hour: sector.start_hour,
            at_or_above_k: sector.at_or_above_k,
          }, fastLen),
        );
      }
    });
  }
  return group(children, {
    cls: "station-glyph",
    translate: [cx, cy],
    data: { id: station.id },
  });
}

function polar(r: number, deg: number): [number, number] {
  const rad = (deg * Math.PI) / 180;
  return [r * Math.cos(rad), r * Math.sin(rad)];
}

function arcNode(
  r: number,
  a0: number,
  a1: number,
  stroke: string,
  cls: string,
  data: Record<string, unknown>,
): SceneNode {
  const [x0, y0] = polar(r, a0);
  const [x1, y1] = polar(r, a1);
  const large = Math.abs(a1 - a0) > 180 ? 1 : 0;
  const sweep = a1 > a0 ? 1 : 0;
  return {
    kind: "path",
    d: `M ${x0.toFixed(2)} ${y0.toFixed(2)} A ${r} ${r} 0 ${large} ${sweep} ${x1.toFixed(2)} ${y1.toFixed(2)}`,
    fill: "none",
    stroke,
    cls,
    data,
  };
}

function wedgeNode(
  rOuter: number,
  a0: number,
  a1: number,
  fill: string,
  cls: string,
  data: Record<string, unknown>,
  rInner = 0,
): SceneNode {
  const [ox0, oy0] = polar(rOuter, a0);
  const [ox1, oy1] = polar(rOuter, a1);
  const [ix1, iy1] = polar(rInner, a1);
  const [ix0, iy0] = polar(rInner, a0);
  return {
    kind: "path",
    d:
      `M ${ix0.toFixed(2)} ${iy0.toFixed(2)} L ${ox0.toFixed(2)} ${oy0.toFixed(2)} ` +
      `A ${rOuter} ${rOuter} 0 0 1 ${ox1.toFixed(2)} ${oy1.toFixed(2)} ` +
      `L ${ix1.toFixed(2)} ${iy1.toFixed(2)} A ${rInner} ${rInner} 0 0 0 ${ix0.toFixed(2)} ${iy0.toFixed(2)} Z`,
    fill,
    cls,
    data,
  };
}

/** Per-cell tooltip sector chart: total size encodes the sum of absolute
 * attribution values; each sector's angle its feature's share; negative
 * contributions get the shading-mask class. */
export function renderCellSectorChart(cell: GridCell, maxAbsPhi: number, radiusMax = 40): GroupNode {
  const children: SceneNode[] = [];
  const phi = cell.phi ?? {};
  const absTotal = cell.abs_phi_sum ?? 0;
  const features = Object.keys(phi).sort();
  const radius = maxAbsPhi > 0 ? Math.sqrt(absTotal / maxAbsPhi) * radiusMax : 0;
  let angle = -90;
  features.forEach((feature, f) => {
    const value = phi[feature];
    const share = absTotal > 0 ? Math.abs(value) / absTotal : 0;
    if (share <= 0) return;
    const a1 = angle + share * 360;
    children.push(
      wedgeNode(radius, angle, a1, featurePalette(f), value < 0 ? "phi-sector negative" : "phi-sector", {
        feature,
        phi: value,
        share,
        abs_phi_sum: absTotal,
      }),
    );
    angle = a1;
  });
  return group(children, {
    cls: "cell-sector-chart",
    data: { i: cell.i, j: cell.j, abs_phi_sum: absTotal },
  });
}

function featurePalette(index: number): string {
  const palette = ["#e0903f", "#4d9de0", "#7bb661", "#b06ab3", "#c96567"];
  return palette[index % palette.length];
}
