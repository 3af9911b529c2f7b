// Shared view state: the single source of truth every view reads, so a brush
// in one view stays consistent everywhere.
const VALID_MODES = ["row", "column"];
export class ViewState {
    data;
    listeners = new Set();
    constructor(initial) {
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
    validate(data) {
        if (!(data.k > 0))
            throw new RangeError(`k must be positive: ${data.k}`);
        if (!VALID_MODES.includes(data.comparisonMode)) {
            throw new RangeError(`bad comparison mode: ${data.comparisonMode}`);
        }
        if (data.window && data.window.start > data.window.end) {
            throw new RangeError(`empty time window: ${data.window.start}..${data.window.end}`);
        }
    }
    get() {
        return { ...this.data, window: this.data.window ? { ...this.data.window } : null };
    }
    set(partial) {
        const next = { ...this.data, ...partial };
        this.validate(next);
        this.data = next;
        for (const listener of this.listeners)
            listener(this.get());
    }
    setWindow(start, end) {
        this.set({ window: { start, end } });
    }
    clearWindow() {
        this.set({ window: null });
    }
    subscribe(listener) {
        this.listeners.add(listener);
        return () => this.listeners.delete(listener);
    }
}
/** Months inside the brushed window, or all months when nothing is brushed. */
export function monthsInWindow(months, window) {
    if (!window)
        return months;
    return months.filter((m) => m >= window.start && m <= window.end);
}
