/**
 * Render figures from report documents.
 *
 *   node dist/src/cli.js --kind density      --input sweep.json [--metric garbe] [--alpha 0.5]
 *   node dist/src/cli.js --kind boxplot      --input sweep.json [--metric fdr]
 *   node dist/src/cli.js --kind metric-curve --input sweep.json|curve.json [--alpha 0.5]
 *   node dist/src/cli.js --kind det          --input det.json
 *
 * --input and --label repeat; labels default to file stems. Output goes to
 * --out (SVG). Exit 1 on bad arguments, unreadable input, or a report
 * schema the renderer does not support; exit 2 when the figure had no
 * drawable data (an annotated empty panel is still written).
 */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";
import { parseArgs } from "node:util";

import {
  FigureResult,
  boxplotFigure,
  densityFigure,
  detFigure,
  metricCurveFigure,
} from "./figures.js";
import { parseCurveReport, parseDetReport, parseSweepReport } from "./types.js";

const KINDS = ["density", "boxplot", "metric-curve", "det"] as const;
type Kind = (typeof KINDS)[number];

function fail(message: string): never {
  process.stderr.write(`error: ${message}\n`);
  process.exit(1);
}

export function main(argv: string[]): number {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        input: { type: "string", multiple: true },
        label: { type: "string", multiple: true },
        metric: { type: "string", default: "garbe" },
        alpha: { type: "string", default: "0.5" },
        out: { type: "string" },
      },
    }));
  } catch (err) {
    fail((err as Error).message);
  }
  const kind = values.kind as Kind | undefined;
  if (!kind || !KINDS.includes(kind)) {
    fail(`--kind must be one of: ${KINDS.join(", ")}`);
  }
  const inputs = values.input ?? [];
  if (inputs.length === 0) fail("at least one --input report is required");
  const out = values.out;
  if (!out) fail("--out is required");
  const metric = values.metric as string;
  const alpha = Number(values.alpha);
  if (!Number.isFinite(alpha) || alpha < 0 || alpha > 1) {
    fail(`--alpha must be in [0, 1], got ${values.alpha}`);
  }
  const labels =
    values.label && values.label.length === inputs.length
      ? values.label
      : inputs.map((p) => basename(p).replace(/\.[^.]+$/, ""));

  const texts = inputs.map((path) => {
    try {
      return readFileSync(path, "utf-8");
    } catch (err) {
      fail(`cannot read ${path}: ${(err as NodeJS.ErrnoException).code ?? err}`);
    }
  });

  let figure: FigureResult;
  try {
    switch (kind) {
      case "density":
        figure = densityFigure(texts.map(parseSweepReport), labels, metric, alpha);
        break;
      case "boxplot":
        figure = boxplotFigure(texts.map(parseSweepReport), labels, metric);
        break;
      case "metric-curve": {
        // accept either sweep reports (sliced at --alpha) or curve reports
        const first = JSON.parse(texts[0]) as { command?: string };
        if (first.command === "curve") {
          figure = metricCurveFigure(null, texts.map(parseCurveReport), labels, metric, alpha);
        } else {
          figure = metricCurveFigure(texts.map(parseSweepReport), null, labels, metric, alpha);
        }
        break;
      }
      case "det":
        figure = detFigure(texts.map(parseDetReport), labels);
        break;
    }
  } catch (err) {
    fail((err as Error).message);
  }

  writeFileSync(out, figure.svg, "utf-8");
  if (figure.empty) {
    process.stderr.write("warning: no drawable data; wrote an annotated empty panel\n");
    return 2;
  }
  return 0;
}

process.exitCode = main(process.argv.slice(2));
