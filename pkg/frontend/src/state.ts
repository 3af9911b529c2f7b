// Shared view state: the single source of truth every view reads, so a brush
// in one view stays consistent everywhere.

export type ComparisonMode = "row" | "column";

export interface TimeWindow {
  start: string; // "YYYY-MM" inclusive
  end: string;
}

export interface ViewStateData {
  window: TimeWindow | null;
  zoom: number;
  k: number;
  criteria: string[];
  selectedSolutions: string[];
  comparisonMode: ComparisonMode;
  month: string | null; // month shown on the map
}

export type Listener = (state: ViewStateData) => void;

const VALID_MODES: ComparisonMode[] = ["row", "column"];

export class ViewState {
  private data: ViewStateData;
  private listeners = new Set<Listener>();

  constructor(initial?: Partial<ViewStateData>) {
    this.data = {
      window: null,
      zoom: 1,
      k: 9,
      criteria: ["ART", "MRT", "ATD", "MTD", "SO"],
      selectedSolutions: [],
      comparisonMode: "row",
      month: null,
      ...initial,
    };
    this.validate(this.data);
  }

  private validate(data: ViewStateData): void {
    if (!(data.k > 0)) throw new RangeError(`k must be positive: ${data.k}`);
    if (!VALID_MODES.includes(data.comparisonMode)) {
      throw new RangeError(`bad comparison mode: ${data.comparisonMode}`);
    }
    if (data.window && data.window.start > data.window.end) {
      throw new RangeError(`empty time window: ${data.window.start}..${data.window.end}`);
    }
  }

  get(): ViewStateData {
    return { ...this.data, window: this.data.window ? { ...this.data.window } : null };
  }

  set(partial: Partial<ViewStateData>): void {
    const next = { ...this.data, ...partial };
    this.validate(next);
    this.data = next;
    for (const listener of this.listeners) listener(this.get());
  }

  setWindow(start: string, end: string): void {
    this.set({ window: { start, end } });
  }

  clearWindow(): void {
    this.set({ window: null });
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }
}

/** Months inside the brushed window, or all months when nothing is brushed. */
export function monthsInWindow(months: string[], window: TimeWindow | null): string[] {
  if (!window) return months;
  return months.filter((m) => m >= window.start && m <= window.end);
}
