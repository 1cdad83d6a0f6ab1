/**
 * Analysis charts as SVG strings: a bar chart for the T-gate histogram
 * and a step line for the availability series.  SVG keeps the charts
 * dependency-free and assertable in DOM-less tests.
 */

import type { ReportDoc } from "./types";

const W = 420;
const H = 140;
const PAD = 24;

function svg(inner: string, title: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" class="chart" role="img">` +
    `<title>${title}</title>` +
    `<rect x="0" y="0" width="${W}" height="${H}" fill="#fafafa"/>` +
    inner +
    `</svg>`
  );
}

export function histogramSvg(report: ReportDoc): string {
  const bins = report.histogram?.bins ?? [];
  if (bins.length === 0) return svg("", "T-gate histogram (empty)");
  const max = Math.max(1, ...bins.map(([, count]) => count));
  const bw = (W - 2 * PAD) / bins.length;
  const bars = bins
    .map(([start, count], i) => {
      const h = ((H - 2 * PAD) * count) / max;
      const x = PAD + i * bw;
      const y = H - PAD - h;
      return (
        `<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${Math.max(1, bw - 2).toFixed(1)}"` +
        ` height="${h.toFixed(1)}" fill="#2e6fd8" data-start="${start}" data-count="${count}"/>`
      );
    })
    .join("");
  return svg(bars, `T gates per window of ${report.histogram?.window}`);
}

export function availabilitySvg(report: ReportDoc): string {
  const series = report.availability?.series.available ?? [];
  if (series.length === 0) return svg("", "T-state availability (empty)");
  const max = Math.max(1, ...series);
  const dx = (W - 2 * PAD) / series.length;
  const points = series
    .map((level, i) => {
      const x = PAD + (i + 0.5) * dx;
      const y = H - PAD - ((H - 2 * PAD) * level) / max;
      return `${x.toFixed(1)},${y.toFixed(1)}`;
    })
    .join(" ");
  const line = `<polyline points="${points}" fill="none" stroke="#27a05d" stroke-width="2"/>`;
  return svg(line, "Number of T states available over time");
}
