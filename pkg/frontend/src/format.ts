import { Metrics } from "./api.js";

/** Server metrics arrive as fractions; the UI shows percentages with two
 *  decimals, e.g. 0.8125 -> "81.25". */
export function asPercent(fraction: number): string {
    return (fraction * 100).toFixed(2);
}

export function metricsSummary(metrics: Metrics): string {
    const beta = metrics.beta === 1 ? "1" : String(metrics.beta);
    return (
        `P ${asPercent(metrics.precision)} / R ${asPercent(metrics.recall)}` +
        ` / F${beta} ${asPercent(metrics.f)}`
    );
}
