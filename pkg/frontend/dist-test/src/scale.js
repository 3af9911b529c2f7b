// Presentation scales: the only arithmetic the UI applies to payload numbers.
export function linearScale(domain, range) {
    const [d0, d1] = domain;
    const [r0, r1] = range;
    const span = d1 - d0;
    const fn = ((value) => span === 0 ? (r0 + r1) / 2 : r0 + ((value - d0) / span) * (r1 - r0));
    fn.domain = domain;
    fn.range = range;
    return fn;
}
export function extent(values) {
    if (values.length === 0)
        return [0, 1];
    let lo = values[0];
    let hi = values[0];
    for (const v of values) {
        if (v < lo)
            lo = v;
        if (v > hi)
            hi = v;
    }
    return [lo, hi];
}
export function maxOf(values, fallback = 1) {
    let hi = -Infinity;
    for (const v of values)
        if (v > hi)
            hi = v;
    return Number.isFinite(hi) && hi > 0 ? hi : fallback;
}
/** Blue (fast) to red (slow) ramp for response times; presentation only. */
export function responseColor(minutes, worst) {
    const t = Math.max(0, Math.min(1, worst > 0 ? minutes / worst : 0));
    const r = Math.round(40 + 215 * t);
    const b = Math.round(220 - 170 * t);
    return `rgb(${r},80,${b})`;
}
