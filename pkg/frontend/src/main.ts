// App bootstrap: fetch payloads, keep the shared ViewState, mount the five
// views, and wire interactions (k slider, month picker, brush, optimize,
// pin modify/remove, simulate, row/column toggle).

import { ApiClient } from "./api.js";
import { mount } from "./render/svg.js";
import { ViewState, monthsInWindow } from "./state.js";
import type {
  AreaPayloadBody,
  GridPayload,
  ParetoPayload,
  ProfilePayload,
  ReachabilityPayload,
  SdPayload,
  SimulationResult,
  StationsPayload,
  YearlyCounts,
} from "./types.js";
import { renderStatistics } from "./views/statistics.js";
import { monthAtX, renderSdView } from "./views/sd.js";
import { renderMap } from "./views/map.js";
import {
  OptimizationController,
  renderCorrelationMatrix,
  renderSolutionBoxes,
} from "./views/optimization.js";
import { renderSimulation } from "./views/simulation.js";

const api = new ApiClient("");
const state = new ViewState();

interface Loaded {
  yearly: YearlyCounts | null;
  stations: StationsPayload | null;
  sd: SdPayload | null;
  grid: GridPayload | null;
  reach: ReachabilityPayload | null;
  profiles: Record<string, ProfilePayload>;
  pareto: ParetoPayload | null;
  simulation: SimulationResult | null;
}

const loaded: Loaded = {
  yearly: null,
  stations: null,
  sd: null,
  grid: null,
  reach: null,
  profiles: {},
  pareto: null,
  simulation: null,
};

const optimization = new OptimizationController(api, state);

function panel(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing panel #${id}`);
  return el;
}

function redrawStatistics(): void {
  mount(panel("statistics"), renderStatistics(loaded.yearly, loaded.stations), 440, 400);
}

function redrawSd(): void {
  mount(panel("sd"), renderSdView(loaded.sd, state.get().window), 740, 410);
}

function redrawMap(): void {
  mount(
    panel("map"),
    renderMap(loaded.grid, loaded.reach, loaded.stations?.stations ?? [], loaded.profiles, state.get().zoom),
    660,
    670,
  );
}

function redrawOptimization(): void {
  const boxes = renderSolutionBoxes(
    optimization.criteria,
    optimization.solutions,
    state.get().selectedSolutions,
  );
  mount(panel("solutions"), boxes, 720, 130);
  const matrix = loaded.pareto
    ? renderCorrelationMatrix(
        loaded.pareto.criteria,
        loaded.pareto.correlation,
        loaded.pareto.zero_variance_criteria,
      )
    : renderCorrelationMatrix([], null);
  mount(panel("matrix"), matrix, 300, 220);
}

function redrawSimulation(): void {
  mount(
    panel("simulation"),
    renderSimulation(loaded.simulation, state.get().comparisonMode, state.get().selectedSolutions),
    780,
    720,
  );
}

async function refreshReachability(): Promise<void> {
  const k = state.get().k;
  loaded.reach = await api.reachability(k).catch(() => null);
  redrawMap();
}

async function refreshGrid(): Promise<void> {
  const month = state.get().month;
  if (!month) return;
  loaded.grid = await api.grid(month).catch(() => null);
  redrawMap();
}

function statusLine(text: string): void {
  panel("status").textContent = text;
}

async function boot(): Promise<void> {
  loaded.yearly = await api.yearly().catch(() => null);
  loaded.stations = await api.stations().catch(() => null);
  loaded.sd = await api.sdSeries().catch(() => null);
  if (loaded.sd && loaded.sd.series.length > 0) {
    state.set({ month: loaded.sd.series[loaded.sd.series.length - 1].month });
  }
  const k = state.get().k;
  loaded.reach = await api.reachability(k).catch(() => null);
  if (loaded.stations) {
    for (const s of loaded.stations.stations) {
      try {
        loaded.profiles[s.id] = await api.stationProfile(s.id, k);
      } catch {
        // glyph degrades to a bare marker
      }
    }
  }
  await refreshGrid();
  redrawStatistics();
  redrawSd();
  redrawMap();
  redrawOptimization();
  redrawSimulation();
  wireControls();
  statusLine("ready");
}

function selectedArea(): AreaPayloadBody {
  const raw = (document.getElementById("area-input") as HTMLTextAreaElement).value.trim();
  if (raw) return JSON.parse(raw) as AreaPayloadBody;
  // Default: the middle of the grid extent as a small polygon.
  const grid = loaded.grid?.grid;
  if (!grid) throw new Error("no grid loaded");
  const degPerCellLat = grid.cell_size_km / 111.32;
  const degPerCellLng = grid.cell_size_km / (111.32 * Math.cos((grid.origin_lat * Math.PI) / 180));
  const lat0 = grid.origin_lat + degPerCellLat;
  const lat1 = grid.origin_lat + degPerCellLat * (grid.rows - 1);
  const lng0 = grid.origin_lng + degPerCellLng;
  const lng1 = grid.origin_lng + degPerCellLng * (grid.cols - 1);
  return { polygon: [[lat0, lng0], [lat0, lng1], [lat1, lng1], [lat1, lng0]] };
}

function wireControls(): void {
  const kSlider = document.getElementById("k-slider") as HTMLInputElement;
  const kLabel = document.getElementById("k-label")!;
  kSlider.addEventListener("input", async () => {
    const k = Number(kSlider.value);
    kLabel.textContent = `${k} min`;
    state.set({ k });
    await refreshReachability();
  });

  const monthInput = document.getElementById("month-input") as HTMLInputElement;
  monthInput.addEventListener("change", async () => {
    state.set({ month: monthInput.value });
    await refreshGrid();
  });

  const zoomInput = document.getElementById("zoom-input") as HTMLInputElement;
  zoomInput.addEventListener("input", () => {
    state.set({ zoom: Number(zoomInput.value) });
    redrawMap();
  });

  // Brush on the S&D chart: drag horizontally to pick the shared time window.
  const sdPanel = panel("sd");
  let brushStart: string | null = null;
  sdPanel.addEventListener("pointerdown", (ev) => {
    if (!loaded.sd) return;
    brushStart = monthAtX(loaded.sd, svgX(sdPanel, ev));
  });
  sdPanel.addEventListener("pointerup", (ev) => {
    if (!loaded.sd || brushStart === null) return;
    const end = monthAtX(loaded.sd, svgX(sdPanel, ev));
    const [a, b] = [brushStart, end].sort();
    state.setWindow(a, b);
    brushStart = null;
  });
  state.subscribe(() => {
    redrawSd();
    // The map shows the last month of the brushed window.
    const months = loaded.sd?.series.map((p) => p.month) ?? [];
    const visible = monthsInWindow(months, state.get().window);
    const month = visible[visible.length - 1];
    if (month && month !== state.get().month) {
      state.set({ month });
      void refreshGrid();
    }
  });

  document.getElementById("optimize-btn")!.addEventListener("click", async () => {
    try {
      statusLine("optimizing...");
      const criteria = state.get().criteria;
      const area = selectedArea();
      const job = await api.optimize({
        area,
        criteria,
        k_new: Number((document.getElementById("k-new") as HTMLInputElement).value || "1"),
        ga: { population: 40, generations: 60 },
        seed: Number((document.getElementById("seed") as HTMLInputElement).value || "0"),
      });
      const done = await api.waitForJob(job.id);
      if (done.state === "failed") throw new Error(done.error ?? "job failed");
      loaded.pareto = await api.pareto(job.id);
      optimization.load(loaded.pareto, area);
      redrawOptimization();
      statusLine(`optimization done: ${loaded.pareto.solutions.length} solutions`);
    } catch (err) {
      statusLine(`optimize failed: ${String(err)}`);
    }
  });

  document.getElementById("simulate-btn")!.addEventListener("click", async () => {
    try {
      statusLine("simulating...");
      const job = await api.simulate({
        solutions: optimization.simulateRequestSolutions(),
        bucketing: "quarter",
      });
      const done = await api.waitForJob(job.id);
      if (done.state === "failed") throw new Error(done.error ?? "job failed");
      loaded.simulation = done.result as SimulationResult;
      redrawSimulation();
      statusLine("simulation done");
    } catch (err) {
      statusLine(`simulate failed: ${String(err)}`);
    }
  });

  const modeToggle = document.getElementById("mode-toggle") as HTMLSelectElement;
  modeToggle.addEventListener("change", () => {
    state.set({ comparisonMode: modeToggle.value as "row" | "column" });
    redrawSimulation();
  });

  // Pin modify/remove: pick a solution, then drag its pin on the map panel.
  const solutionsPanel = panel("solutions");
  solutionsPanel.addEventListener("click", (ev) => {
    const box = (ev.target as Element).closest(".solution-box");
    if (!box) return;
    const id = box.getAttribute("data-solution");
    if (id) {
      (document.getElementById("active-solution") as HTMLInputElement).value = id;
    }
  });
  document.getElementById("remove-btn")!.addEventListener("click", () => {
    const id = (document.getElementById("active-solution") as HTMLInputElement).value;
    if (!id) return;
    optimization.remove(id);
    redrawOptimization();
    statusLine(`removed ${id}`);
  });
  const mapPanel = panel("map");
  mapPanel.addEventListener("click", async (ev) => {
    const modify = (document.getElementById("modify-toggle") as HTMLInputElement).checked;
    const id = (document.getElementById("active-solution") as HTMLInputElement).value;
    if (!modify || !id || !loaded.grid) return;
    const point = clientToLatLng(mapPanel, ev, loaded.grid);
    try {
      await optimization.movePin(id, [point]);
      redrawOptimization();
      statusLine(`re-evaluated ${id} at ${point[0].toFixed(4)}, ${point[1].toFixed(4)}`);
    } catch (err) {
      statusLine(`re-evaluate failed: ${String(err)}`);
    }
  });
}

function svgX(panelEl: HTMLElement, ev: PointerEvent | MouseEvent): number {
  const svg = panelEl.querySelector("svg");
  if (!svg) return 0;
  const rect = svg.getBoundingClientRect();
  const viewBox = (svg.getAttribute("viewBox") ?? "0 0 740 410").split(" ").map(Number);
  return ((ev.clientX - rect.left) / rect.width) * viewBox[2];
}

function clientToLatLng(
  panelEl: HTMLElement,
  ev: MouseEvent,
  grid: GridPayload,
): [number, number] {
  const svg = panelEl.querySelector("svg")!;
  const rect = svg.getBoundingClientRect();
  const fx = (ev.clientX - rect.left) / rect.width;
  const fy = (ev.clientY - rect.top) / rect.height;
  const g = grid.grid;
  const degPerCellLat = g.cell_size_km / 111.32;
  const degPerCellLng = g.cell_size_km / (111.32 * Math.cos((g.origin_lat * Math.PI) / 180));
  const lng = g.origin_lng + fx * g.cols * degPerCellLng;
  const lat = g.origin_lat + (1 - fy) * g.rows * degPerCellLat;
  return [lat, lng];
}

boot().catch((err) => statusLine(`startup failed: ${String(err)}`));
