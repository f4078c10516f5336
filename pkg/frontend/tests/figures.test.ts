import { readFileSync } from "fs";
import { join } from "path";

import { describe, expect, it } from "vitest";

import { readCsv, requireColumns } from "../src/csv.js";
import { buildFigure, renderSvg } from "../src/figures.js";

const FIXTURES = join(__dirname, "fixtures");
const fx = (name: string) => join(FIXTURES, name);

const CHAIN_FILES = ["chain_kappa_0.csv", "chain_kappa_10.csv",
                     "chain_kappa_100.csv", "chain_kappa_inf.csv"].map(fx);
const KN_FILES = ["kn_kappa_0_theta_1.csv", "kn_kappa_10_theta_1.csv",
                  "kn_kappa_inf_theta_1.csv"].map(fx);

describe("figure kinds render from golden CLI outputs", () => {
  it("trajectories", () => {
    const svg = renderSvg(buildFigure({ kind: "trajectories",
                                        inputs: CHAIN_FILES }));
    expect(svg).toContain("<svg");
    expect(svg).toContain("length variables");
    expect(svg).toContain("stick-breaking weights");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(8);
  });

  it("kn_polygon with custom labels", () => {
    const svg = renderSvg(buildFigure({
      kind: "kn_polygon", inputs: KN_FILES,
      labels: ["independent", "kappa=10", "geometric"],
    }));
    expect(svg).toContain("geometric");
    expect((svg.match(/<polyline/g) ?? []).length).toBe(3);
    // the canvas leaves room for the legend below the panel
    const height = Number(svg.match(/height="(\d+)"/)![1]);
    expect(height).toBeGreaterThan(300);
  });

  it("density_overlay", () => {
    const svg = renderSvg(buildFigure({
      kind: "density_overlay",
      inputs: [fx("density.csv"), fx("data.csv")],
    }));
    expect(svg).toContain("<rect");
    expect(svg).toContain("estimated density");
  });

  it("param_posterior for both parameter kinds", () => {
    for (const file of ["kappa_hist.csv", "sigma_hist.csv"]) {
      const svg = renderSvg(buildFigure({ kind: "param_posterior",
                                          inputs: [fx(file)] }));
      expect(svg).toContain('data-marker="mode"');
      expect(svg).toContain('data-marker="mean"');
    }
  });
});

describe("figure content contracts", () => {
  it("param_posterior marks the mode at the argmax bin exactly", () => {
    const table = readCsv(fx("kappa_hist.csv"));
    const [values, counts] = requireColumns(table, ["kappa", "count"]);
    let argmax = 0;
    counts.forEach((c, i) => { if (c > counts[argmax]) argmax = i; });
    const figure = buildFigure({ kind: "param_posterior",
                                 inputs: [fx("kappa_hist.csv")] });
    expect(figure.markers!.mode).toBe(values[argmax]);
    const svg = renderSvg(figure);
    expect(svg).toContain(`data-marker="mode" data-value="${values[argmax]}"`);
  });

  it("param_posterior mean is the count-weighted average", () => {
    const table = readCsv(fx("kappa_hist.csv"));
    const [values, counts] = requireColumns(table, ["kappa", "count"]);
    const total = counts.reduce((a, b) => a + b, 0);
    const mean = values.reduce((a, v, i) => a + v * counts[i], 0) / total;
    const figure = buildFigure({ kind: "param_posterior",
                                 inputs: [fx("kappa_hist.csv")] });
    expect(figure.markers!.mean).toBeCloseTo(mean, 12);
  });

  it("density_overlay curve matches the input CSV pointwise", () => {
    const [grid, density] = requireColumns(readCsv(fx("density.csv")),
                                           ["grid", "density"]);
    const figure = buildFigure({
      kind: "density_overlay",
      inputs: [fx("density.csv"), fx("data.csv")],
    });
    const curve = figure.panels[0].series[0];
    expect(curve.x).toEqual(grid);
    expect(curve.y).toEqual(density);
  });

  it("density_overlay histogram integrates to one on the density scale", () => {
    const figure = buildFigure({
      kind: "density_overlay",
      inputs: [fx("density.csv"), fx("data.csv")],
    });
    const bars = figure.panels[0].bars!;
    const integral = bars.height.reduce((a, h) => a + h * bars.width, 0);
    expect(integral).toBeCloseTo(1.0, 9);
  });

  it("trajectory weights satisfy the stick identity against variables", () => {
    const figure = buildFigure({ kind: "trajectories",
                                 inputs: [fx("chain_kappa_10.csv")] });
    const v = figure.panels[0].series[0].y;
    const w = figure.panels[1].series[0].y;
    let residual = 1.0;
    v.forEach((vi, i) => {
      expect(w[i]).toBeCloseTo(residual * vi, 12);
      residual *= 1 - vi;
    });
  });
});

describe("rendering invariants", () => {
  it("identical inputs give identical figure data and markup", () => {
    const request = { kind: "kn_polygon" as const, inputs: KN_FILES };
    const one = buildFigure(request);
    const two = buildFigure(request);
    expect(two).toEqual(one);
    expect(renderSvg(two)).toBe(renderSvg(one));
  });

  it("rendering does not mutate its inputs", () => {
    const before = CHAIN_FILES.map((p) => readFileSync(p, "utf8"));
    renderSvg(buildFigure({ kind: "trajectories", inputs: CHAIN_FILES }));
    const after = CHAIN_FILES.map((p) => readFileSync(p, "utf8"));
    expect(after).toEqual(before);
  });

  it("rejects mismatched label counts", () => {
    expect(() => buildFigure({ kind: "kn_polygon", inputs: KN_FILES,
                               labels: ["only-one"] }))
      .toThrow(/labels/);
  });

  it("rejects wrong-schema inputs with the offending column named", () => {
    expect(() => buildFigure({ kind: "trajectories",
                               inputs: [fx("kn_hist.csv")] }))
      .toThrow(/missing column 'j'/);
  });

  it("density_overlay arity is enforced", () => {
    expect(() => buildFigure({ kind: "density_overlay",
                               inputs: [fx("density.csv")] }))
      .toThrow(/exactly two inputs/);
  });
});
