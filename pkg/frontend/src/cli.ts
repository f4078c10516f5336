#!/usr/bin/env node
import { writeFileSync } from "fs";
import { parseArgs } from "util";

import { FigureKind, FigureRequest, buildFigure, renderSvg } from "./figures.js";

const KINDS: FigureKind[] = ["trajectories", "kn_polygon", "density_overlay",
                             "param_posterior"];

const USAGE = `usage: bbsb-figures render --kind KIND --in A.csv[,B.csv...] \
--out FIGURE.svg [--labels a,b,...]

kinds: ${KINDS.join(", ")}
inputs consume the CSV/JSON files written by the bbsb CLI.`;

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    process.stderr.write(`error: unknown command '${argv[0] ?? ""}'\n${USAGE}\n`);
    return 1;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: argv.slice(1),
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
        labels: { type: "string" },
      },
    });
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${USAGE}\n`);
    return 1;
  }
  const { kind, in: inputs, out, labels } = parsed.values;
  if (!kind || !inputs || !out) {
    process.stderr.write(`error: --kind, --in and --out are required\n${USAGE}\n`);
    return 1;
  }
  if (!KINDS.includes(kind as FigureKind)) {
    process.stderr.write(
      `error: unknown kind '${kind}' (expected one of ${KINDS.join(", ")})\n`);
    return 1;
  }
  const request: FigureRequest = {
    kind: kind as FigureKind,
    inputs: inputs.split(",").filter((p) => p.length > 0),
    labels: labels ? labels.split(",") : undefined,
  };
  try {
    const svg = renderSvg(buildFigure(request));
    writeFileSync(out, svg + "\n");
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
  return 0;
}

const invokedDirectly = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
