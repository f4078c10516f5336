import { existsSync, mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

const FIXTURES = join(__dirname, "fixtures");
const fx = (name: string) => join(FIXTURES, name);

describe("render command", () => {
  it("writes an SVG for every figure kind", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const jobs: [string, string][] = [
      ["trajectories", [fx("chain_kappa_0.csv"),
                        fx("chain_kappa_inf.csv")].join(",")],
      ["kn_polygon", fx("kn_kappa_0_theta_1.csv")],
      ["density_overlay", [fx("density.csv"), fx("data.csv")].join(",")],
      ["param_posterior", fx("kappa_hist.csv")],
    ];
    for (const [kind, inputs] of jobs) {
      const out = join(dir, `${kind}.svg`);
      const code = main(["render", "--kind", kind, "--in", inputs,
                         "--out", out]);
      expect(code).toBe(0);
      expect(existsSync(out)).toBe(true);
      expect(readFileSync(out, "utf8")).toContain("</svg>");
    }
  });

  it("honors labels", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const out = join(dir, "kn.svg");
    const code = main(["render", "--kind", "kn_polygon", "--in",
                       [fx("kn_kappa_0_theta_1.csv"),
                        fx("kn_kappa_inf_theta_1.csv")].join(","),
                       "--out", out, "--labels", "independent,geometric"]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("independent");
  });

  it("fails with a diagnostic on unknown kinds and missing flags", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    expect(main(["render", "--kind", "pie", "--in", fx("kn_hist.csv"),
                 "--out", join(dir, "x.svg")])).toBe(1);
    expect(main(["render", "--kind", "kn_polygon"])).toBe(1);
    expect(main(["paint"])).toBe(1);
  });

  it("fails cleanly on schema mismatches", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    expect(main(["render", "--kind", "trajectories", "--in",
                 fx("density.csv"), "--out", join(dir, "x.svg")])).toBe(1);
  });
});
