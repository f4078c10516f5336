/** Minimal deterministic SVG plotting helpers (no DOM, no dependencies). */

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number],
                            range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const scale = ((value: number) =>
    r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

export function ticks(domain: [number, number], count = 5): number[] {
  const [lo, hi] = domain;
  if (lo === hi) return [lo];
  const rawStep = (hi - lo) / count;
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 5, 10].map((m) => m * power);
  const step = candidates.find((s) => (hi - lo) / s <= count) ??
    candidates[candidates.length - 1];
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let t = start; t <= hi + 1e-12; t += step) {
    out.push(Number(t.toPrecision(12)));
  }
  return out;
}

export function fmt(value: number): string {
  return Number.isInteger(value) ? String(value) :
    String(Number(value.toPrecision(6)));
}

export function polyline(xs: number[], ys: number[], x: Scale, y: Scale,
                         stroke: string, dash?: string): string {
  const points = xs.map((v, i) => `${fmt(x(v))},${fmt(y(ys[i]))}`).join(" ");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline fill="none" stroke="${stroke}" stroke-width="1.5"` +
    `${dashAttr} points="${points}"/>`;
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                        "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

export interface Panel {
  title: string;
  xLabel: string;
  yLabel: string;
  body: (x: Scale, y: Scale) => string[];
  xDomain: [number, number];
  yDomain: [number, number];
}

const PANEL_W = 420;
const PANEL_H = 300;
const MARGIN = { top: 34, right: 16, bottom: 42, left: 56 };

function renderPanel(panel: Panel, xOffset: number): string {
  const left = xOffset + MARGIN.left;
  const right = xOffset + PANEL_W - MARGIN.right;
  const top = MARGIN.top;
  const bottom = PANEL_H - MARGIN.bottom;
  const x = linearScale(panel.xDomain, [left, right]);
  const y = linearScale(panel.yDomain, [bottom, top]);
  const parts: string[] = [];
  parts.push(`<rect x="${left}" y="${top}" width="${right - left}" ` +
    `height="${bottom - top}" fill="none" stroke="#999"/>`);
  for (const t of ticks(panel.xDomain)) {
    const px = fmt(x(t));
    parts.push(`<line x1="${px}" y1="${bottom}" x2="${px}" ` +
      `y2="${bottom + 4}" stroke="#555"/>`);
    parts.push(`<text x="${px}" y="${bottom + 16}" font-size="10" ` +
      `text-anchor="middle">${fmt(t)}</text>`);
  }
  for (const t of ticks(panel.yDomain)) {
    const py = fmt(y(t));
    parts.push(`<line x1="${left - 4}" y1="${py}" x2="${left}" ` +
      `y2="${py}" stroke="#555"/>`);
    parts.push(`<text x="${left - 6}" y="${py}" font-size="10" ` +
      `text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`);
  }
  parts.push(`<text x="${(left + right) / 2}" y="${top - 14}" ` +
    `font-size="12" text-anchor="middle" font-weight="bold">` +
    `${panel.title}</text>`);
  parts.push(`<text x="${(left + right) / 2}" y="${PANEL_H - 8}" ` +
    `font-size="11" text-anchor="middle">${panel.xLabel}</text>`);
  parts.push(`<text x="${xOffset + 14}" y="${(top + bottom) / 2}" ` +
    `font-size="11" text-anchor="middle" transform="rotate(-90 ` +
    `${xOffset + 14} ${(top + bottom) / 2})">${panel.yLabel}</text>`);
  parts.push(...panel.body(x, y));
  return parts.join("\n");
}

export function renderFigure(panels: Panel[],
                             legend: { label: string; color: string;
                                       dash?: string }[]): string {
  const width = PANEL_W * panels.length;
  // panel bodies may append legend entries, so render them before sizing
  const panelMarkup = panels.map((panel, i) => renderPanel(panel, i * PANEL_W));
  const legendHeight = legend.length > 0 ? 18 + 14 * legend.length : 0;
  const height = PANEL_H + legendHeight;
  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}">`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(...panelMarkup);
  legend.forEach((entry, i) => {
    const ly = PANEL_H + 12 + 14 * i;
    const dashAttr = entry.dash ? ` stroke-dasharray="${entry.dash}"` : "";
    parts.push(`<line x1="${MARGIN.left}" y1="${ly}" ` +
      `x2="${MARGIN.left + 24}" y2="${ly}" stroke="${entry.color}" ` +
      `stroke-width="2"${dashAttr}/>`);
    parts.push(`<text x="${MARGIN.left + 30}" y="${ly + 3}" ` +
      `font-size="11">${entry.label}</text>`);
  });
  parts.push("</svg>");
  return parts.join("\n");
}
