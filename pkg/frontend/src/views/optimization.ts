// Optimization view: candidate solution boxes whose vertical bars show each
// criterion's optimization level (1 = best across the returned set), plus the
// criteria correlation matrix (dot size = |r|, red positive, blue negative).
// The controller owns pin modify/remove: dragging a pin re-evaluates the
// genome through the API and updates that solution's bars in place.

import { GroupNode, SceneNode, group } from "../scene.js";
import type { ApiClient } from "../api.js";
import type { ViewState } from "../state.js";
import type { AreaPayloadBody, ParetoPayload } from "../types.js";

export interface SolutionView {
  id: string;
  genome: [number, number][];
  objectives: Record<string, number>;
  /** 1 = best across the current solution set; presentation min-max of payload values. */
  normalized: Record<string, number>;
}

const BAR_MAX = 70;
const BOX_W = 120;
const BOX_H = 110;

export function renderSolutionBoxes(
  criteria: string[],
  solutions: SolutionView[],
  selected: string[] = [],
): GroupNode {
  const children: SceneNode[] = [];
  solutions.forEach((sol, n) => {
    const barW = (BOX_W - 16) / criteria.length;
    const bars: SceneNode[] = criteria.map((criterion, c) => {
      const level = sol.normalized[criterion] ?? 0;
      const h = level * BAR_MAX;
      return {
        kind: "rect",
        x: 8 + c * barW + 1,
        y: BOX_H - 24 - h,
        width: barW - 2,
        height: h,
        fill: "#4d9de0",
        cls: "criterion-bar",
        data: {
          solution: sol.id,
          criterion,
          normalized: level,
          value: sol.objectives[criterion],
        },
        title: `${criterion}: ${sol.objectives[criterion]?.toFixed(3)} (level ${level.toFixed(2)})`,
      } as SceneNode;
    });
    children.push(
      group(
        [
          {
            kind: "rect",
            x: 0,
            y: 0,
            width: BOX_W,
            height: BOX_H,
            fill: selected.includes(sol.id) ? "rgba(77,157,224,0.15)" : "rgba(0,0,0,0.03)",
            cls: "solution-frame",
            data: { solution: sol.id },
          },
          ...bars,
          { kind: "text", x: 8, y: BOX_H - 8, text: sol.id, cls: "solution-label", data: { solution: sol.id } },
        ],
        {
          cls: "solution-box",
          translate: [n * (BOX_W + 10), 0],
          data: { solution: sol.id, genome: sol.genome },
        },
      ),
    );
  });
  return group(children, { cls: "solution-panel" });
}

export function renderCorrelationMatrix(
  criteria: string[],
  correlation: number[][] | null,
  zeroVariance: string[] = [],
  cell = 34,
): GroupNode {
  if (correlation === null) {
    return group(
      [{ kind: "text", x: 4, y: 16, text: "correlation needs at least two solutions", cls: "empty-state" }],
      { cls: "correlation-matrix" },
    );
  }
  const children: SceneNode[] = [];
  const rMax = cell * 0.42;
  criteria.forEach((rowName, i) => {
    children.push({
      kind: "text",
      x: -6,
      y: i * cell + cell / 2 + 4,
      text: rowName,
      anchor: "end",
      cls: "matrix-row-label",
    });
    criteria.forEach((colName, j) => {
      const r = correlation[i][j];
      const flagged = zeroVariance.includes(rowName) || zeroVariance.includes(colName);
      children.push({
        kind: "circle",
        cx: j * cell + cell / 2,
        cy: i * cell + cell / 2,
        r: Math.abs(r) * rMax,
        fill: r >= 0 ? "#c2452d" : "#2d6cc2",
        cls: flagged ? "corr-dot corr-flagged" : "corr-dot",
        data: { row: rowName, col: colName, r },
        title: `${rowName} vs ${colName}: r = ${r.toFixed(3)}${flagged ? " (zero variance)" : ""}`,
      });
    });
  });
  return group(children, { cls: "correlation-matrix", data: { criteria } });
}

/** Presentation min-max across the current solution set, inverted so 1 = best
 * (minimization). All inputs are payload objective values. */
export function normalizeLevels(
  criteria: string[],
  solutions: { id: string; objectives: Record<string, number> }[],
): Record<string, Record<string, number>> {
  const levels: Record<string, Record<string, number>> = {};
  for (const sol of solutions) levels[sol.id] = {};
  for (const criterion of criteria) {
    const values = solutions.map((s) => s.objectives[criterion]);
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    for (const sol of solutions) {
      levels[sol.id][criterion] =
        hi > lo ? (hi - sol.objectives[criterion]) / (hi - lo) : 1.0;
    }
  }
  return levels;
}

export class OptimizationController {
  solutions: SolutionView[] = [];
  criteria: string[] = [];
  area: AreaPayloadBody | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly state: ViewState,
  ) {}

  load(pareto: ParetoPayload, area: AreaPayloadBody | null = null): void {
    this.criteria = pareto.criteria;
    this.area = area;
    const base = pareto.solutions.map((sol, n) => ({
      id: `sol-${n + 1}`,
      genome: sol.genome,
      objectives: sol.objectives,
      normalized: sol.normalized_objectives,
    }));
    this.solutions = base;
    this.state.set({ selectedSolutions: base.map((s) => s.id) });
  }

  find(id: string): SolutionView {
    const sol = this.solutions.find((s) => s.id === id);
    if (!sol) throw new Error(`unknown solution ${id}`);
    return sol;
  }

  /** Drag-to-modify: re-evaluate the moved genome through the API and update
   * that solution's objectives and everyone's displayed levels. */
  async movePin(id: string, genome: [number, number][]): Promise<SolutionView> {
    const sol = this.find(id);
    const payload = await this.api.evaluate({
      genome,
      criteria: this.criteria,
      area: this.area ?? undefined,
    });
    sol.genome = genome;
    sol.objectives = payload.objectives;
    const levels = normalizeLevels(this.criteria, this.solutions);
    for (const s of this.solutions) s.normalized = levels[s.id];
    return sol;
  }

  /** Remove discards the solution from the set and from future simulate calls. */
  remove(id: string): void {
    this.solutions = this.solutions.filter((s) => s.id !== id);
    this.state.set({
      selectedSolutions: this.state.get().selectedSolutions.filter((s) => s !== id),
    });
    if (this.solutions.length > 0) {
      const levels = normalizeLevels(this.criteria, this.solutions);
      for (const s of this.solutions) s.normalized = levels[s.id];
    }
  }

  /** Solutions body for POST /api/simulate, honoring removals/selection. */
  simulateRequestSolutions(): Record<string, [number, number][]> {
    const selected = new Set(this.state.get().selectedSolutions);
    const body: Record<string, [number, number][]> = {};
    for (const sol of this.solutions) {
      if (selected.has(sol.id)) body[sol.id] = sol.genome;
    }
    return body;
  }
}
