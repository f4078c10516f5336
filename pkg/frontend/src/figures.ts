import { basename } from "path";

import { readCsv, requireColumns } from "./csv.js";
import { PALETTE, Panel, extent, fmt, polyline, renderFigure } from "./svg.js";

export type FigureKind =
  | "trajectories"
  | "kn_polygon"
  | "density_overlay"
  | "param_posterior";

export interface FigureRequest {
  kind: FigureKind;
  inputs: string[];
  labels?: string[];
}

export interface Series {
  label: string;
  x: number[];
  y: number[];
}

export interface Bars {
  /** bar centers */
  x: number[];
  /** bar heights on the y axis */
  height: number[];
  width: number;
  label: string;
}

export interface PanelData {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  bars?: Bars;
}

export interface Markers {
  mean: number;
  mode: number;
}

/** Pure, renderer-independent figure content extracted from the inputs. */
export interface FigureData {
  kind: FigureKind;
  panels: PanelData[];
  markers?: Markers;
}

function pickLabels(inputs: string[], labels?: string[]): string[] {
  if (labels !== undefined && labels.length > 0) {
    if (labels.length !== inputs.length) {
      throw new Error(
        `got ${labels.length} labels for ${inputs.length} inputs`);
    }
    return labels;
  }
  return inputs.map((p) => basename(p).replace(/\.[^.]+$/, ""));
}

function buildTrajectories(inputs: string[], labels: string[]): FigureData {
  const variables: Series[] = [];
  const weights: Series[] = [];
  inputs.forEach((path, i) => {
    const [j, v, w] = requireColumns(readCsv(path), ["j", "v", "w"]);
    variables.push({ label: labels[i], x: j, y: v });
    weights.push({ label: labels[i], x: j, y: w });
  });
  return {
    kind: "trajectories",
    panels: [
      { title: "length variables", xLabel: "stick index", yLabel: "v",
        series: variables },
      { title: "stick-breaking weights", xLabel: "stick index", yLabel: "w",
        series: weights },
    ],
  };
}

function buildKnPolygon(inputs: string[], labels: string[]): FigureData {
  const series = inputs.map((path, i) => {
    const [m, proportion] = requireColumns(readCsv(path),
                                           ["m", "proportion"]);
    return { label: labels[i], x: m, y: proportion };
  });
  return {
    kind: "kn_polygon",
    panels: [{ title: "number of groups", xLabel: "groups",
               yLabel: "proportion", series }],
  };
}

function histogramDensity(values: number[], bins: number): Bars {
  const [lo, hi] = extent(values);
  const width = (hi - lo) / bins || 1;
  const counts = new Array<number>(bins).fill(0);
  for (const v of values) {
    let b = Math.floor((v - lo) / width);
    if (b >= bins) b = bins - 1;
    counts[b] += 1;
  }
  const norm = values.length * width;
  return {
    x: counts.map((_, b) => lo + (b + 0.5) * width),
    height: counts.map((c) => c / norm),
    width,
    label: "data histogram",
  };
}

function buildDensityOverlay(inputs: string[], labels: string[]): FigureData {
  if (inputs.length !== 2) {
    throw new Error("density_overlay needs exactly two inputs: the density " +
      "CSV and the data CSV");
  }
  const [grid, density] = requireColumns(readCsv(inputs[0]),
                                         ["grid", "density"]);
  const [y] = requireColumns(readCsv(inputs[1]), ["y"]);
  return {
    kind: "density_overlay",
    panels: [{
      title: "estimated density", xLabel: "y", yLabel: "density",
      series: [{ label: labels[0], x: grid, y: density }],
      bars: histogramDensity(y, 30),
    }],
  };
}

function buildParamPosterior(inputs: string[], labels: string[]): FigureData {
  if (inputs.length !== 1) {
    throw new Error("param_posterior takes exactly one histogram CSV");
  }
  const table = readCsv(inputs[0]);
  const param = table.header[0];
  const [values, counts, proportions] = requireColumns(
    table, [param, "count", "proportion"]);
  let total = 0;
  let mean = 0;
  let modeIdx = 0;
  counts.forEach((c, i) => {
    total += c;
    mean += values[i] * c;
    if (c > counts[modeIdx]) modeIdx = i;
  });
  const barWidth = values.length > 1
    ? Math.min(...values.slice(1).map((v, i) => v - values[i]))
    : 1;
  return {
    kind: "param_posterior",
    panels: [{
      title: `posterior of ${param}`, xLabel: param, yLabel: "proportion",
      series: [],
      bars: { x: values, height: proportions, width: barWidth,
              label: labels[0] },
    }],
    markers: { mean: mean / total, mode: values[modeIdx] },
  };
}

export function buildFigure(request: FigureRequest): FigureData {
  if (request.inputs.length === 0) {
    throw new Error("at least one input file is required");
  }
  const labels = pickLabels(request.inputs, request.labels);
  switch (request.kind) {
    case "trajectories":
      return buildTrajectories(request.inputs, labels);
    case "kn_polygon":
      return buildKnPolygon(request.inputs, labels);
    case "density_overlay":
      return buildDensityOverlay(request.inputs, labels);
    case "param_posterior":
      return buildParamPosterior(request.inputs, labels);
    default:
      throw new Error(`unknown figure kind '${request.kind}'`);
  }
}

function panelDomains(panel: PanelData): { x: [number, number];
                                           y: [number, number] } {
  const xs: number[] = [];
  const ys: number[] = [0];
  for (const s of panel.series) {
    xs.push(...s.x);
    ys.push(...s.y);
  }
  if (panel.bars) {
    xs.push(...panel.bars.x.map((c) => c - panel.bars!.width / 2));
    xs.push(...panel.bars.x.map((c) => c + panel.bars!.width / 2));
    ys.push(...panel.bars.height);
  }
  const [xLo, xHi] = extent(xs);
  const [yLo, yHi] = extent(ys);
  const pad = (yHi - yLo) * 0.05 || 0.5;
  return { x: [xLo, xHi], y: [Math.min(yLo, 0), yHi + pad] };
}

export function renderSvg(figure: FigureData): string {
  const legend: { label: string; color: string; dash?: string }[] = [];
  const seen = new Set<string>();
  const panels: Panel[] = figure.panels.map((panel) => {
    const domains = panelDomains(panel);
    return {
      title: panel.title,
      xLabel: panel.xLabel,
      yLabel: panel.yLabel,
      xDomain: domains.x,
      yDomain: domains.y,
      body: (x, y) => {
        const parts: string[] = [];
        if (panel.bars) {
          const { x: centers, height, width } = panel.bars;
          centers.forEach((c, i) => {
            const x0 = x(c - width / 2);
            const x1 = x(c + width / 2);
            parts.push(`<rect x="${fmt(x0)}" y="${fmt(y(height[i]))}" ` +
              `width="${fmt(x1 - x0)}" ` +
              `height="${fmt(y(0) - y(height[i]))}" fill="#cfd8e3" ` +
              `stroke="#8899aa" stroke-width="0.5"/>`);
          });
          if (!seen.has(panel.bars.label)) {
            legend.push({ label: panel.bars.label, color: "#cfd8e3" });
            seen.add(panel.bars.label);
          }
        }
        panel.series.forEach((s, i) => {
          const color = PALETTE[i % PALETTE.length];
          parts.push(polyline(s.x, s.y, x, y, color));
          if (!seen.has(s.label)) {
            legend.push({ label: s.label, color });
            seen.add(s.label);
          }
        });
        if (figure.markers) {
          const { mean, mode } = figure.markers;
          parts.push(`<line x1="${fmt(x(mean))}" y1="${fmt(y.range[0])}" ` +
            `x2="${fmt(x(mean))}" y2="${fmt(y.range[1])}" stroke="#333" ` +
            `stroke-dasharray="2 3" data-marker="mean" ` +
            `data-value="${mean}"/>`);
          parts.push(`<line x1="${fmt(x(mode))}" y1="${fmt(y.range[0])}" ` +
            `x2="${fmt(x(mode))}" y2="${fmt(y.range[1])}" stroke="#333" ` +
            `stroke-dasharray="7 4" data-marker="mode" ` +
            `data-value="${mode}"/>`);
          if (!seen.has("posterior mean (dotted)")) {
            legend.push({ label: "posterior mean (dotted)", color: "#333",
                          dash: "2 3" });
            legend.push({ label: "posterior mode (dashed)", color: "#333",
                          dash: "7 4" });
            seen.add("posterior mean (dotted)");
          }
        }
        return parts;
      },
    };
  });
  return renderFigure(panels, legend);
}
