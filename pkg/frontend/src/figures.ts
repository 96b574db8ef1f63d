/**
 * Figure builders. Every builder is read-only over report documents: no
 * metric is ever recomputed, and each plotted value carries a pointer to
 * the exact report field it came from, so rendering is auditable.
 */

import {
  Cell,
  CurveReport,
  DetReport,
  SweepReport,
  detThreshold,
} from "./types.js";
import { gaussianKde } from "./stats.js";
import {
  PALETTE,
  Scale,
  axes,
  document,
  emptyPanel,
  fmt,
  fmtLabel,
  legend,
  linearScale,
  logScale,
  plotFrame,
  polyline,
  probitScale,
  tag,
} from "./svg.js";

/** A value drawn on a figure, traceable to a field of an input report. */
export interface PlottedValue {
  value: number;
  input: number;
  pointer: string;
}

export interface FigureResult {
  svg: string;
  plotted: PlottedValue[];
  empty: boolean;
}

const METRIC_RANGE: Record<string, [number, number] | null> = {
  fdr: [0, 1],
  garbe: [0, 1],
  ir: null, // unbounded above; range is data-driven
};

function nearestAlpha(report: SweepReport, alpha: number): number {
  let best = report.grid.alphas[0];
  for (const a of report.grid.alphas) {
    if (Math.abs(a - alpha) < Math.abs(best - alpha)) best = a;
  }
  return best;
}

function computableCells(report: SweepReport, metric: string): [number, Cell][] {
  const out: [number, Cell][] = [];
  report.cells.forEach((cell, i) => {
    if (cell.metric === metric && cell.computable && cell.value !== null) {
      out.push([i, cell]);
    }
  });
  return out;
}

export function densityFigure(
  reports: SweepReport[],
  labels: string[],
  metric: string,
  alpha = 0.5,
): FigureResult {
  const plotted: PlottedValue[] = [];
  const perSystem = reports.map((r, idx) => {
    const cells = computableCells(r, metric);
    for (const [i, cell] of cells) {
      plotted.push({ value: cell.value as number, input: idx, pointer: `cells/${i}/value` });
    }
    const slice = nearestAlpha(r, alpha);
    return {
      all: cells.map(([, c]) => c.value as number),
      slice: cells.filter(([, c]) => c.alpha === slice).map(([, c]) => c.value as number),
      sliceAlpha: slice,
    };
  });
  const allValues = perSystem.flatMap((s) => s.all);
  if (allValues.length === 0) {
    return {
      svg: emptyPanel(`${metric.toUpperCase()} density`, "no computable values in input reports"),
      plotted: [],
      empty: true,
    };
  }
  const range = METRIC_RANGE[metric] ?? [
    Math.min(...allValues),
    Math.max(...allValues) * 1.02,
  ];
  const frame = plotFrame();
  const x = linearScale(range[0], range[1], frame.x0, frame.x1);
  const curves = perSystem.map((s) => ({
    all: s.all.length >= 2 ? gaussianKde(s.all, range[0], range[1]) : null,
    slice: s.slice.length >= 2 ? gaussianKde(s.slice, range[0], range[1]) : null,
    sliceAlpha: s.sliceAlpha,
  }));
  const peak = Math.max(
    1e-9,
    ...curves.flatMap((c) => [
      ...(c.all ? c.all.ys : []),
      ...(c.slice ? c.slice.ys : []),
    ]),
  );
  const y = linearScale(0, peak * 1.05, frame.y0, frame.y1);
  const body: string[] = [];
  curves.forEach((c, i) => {
    const color = PALETTE[i % PALETTE.length];
    if (c.all) {
      body.push(
        polyline(
          c.all.xs.map((vx, k) => [x(vx), y(c.all!.ys[k])] as [number, number]),
          color,
          { "stroke-dasharray": "4 3", "stroke-opacity": 0.55 },
        ),
      );
    }
    if (c.slice) {
      body.push(
        polyline(
          c.slice.xs.map((vx, k) => [x(vx), y(c.slice!.ys[k])] as [number, number]),
          color,
        ),
      );
    }
  });
  body.push(...axes(frame, x, y, `${metric.toUpperCase()} value`, "density"));
  body.push(...legend(labels, frame));
  const bandwidths = curves
    .map((c, i) => (c.slice ? `${labels[i]} h=${fmt(c.slice.bandwidth)}` : null))
    .filter((s): s is string => s !== null)
    .join(", ");
  const sliceAlpha = curves[0]?.sliceAlpha ?? alpha;
  const svg = document(
    `${metric.toUpperCase()} density: solid alpha=${fmtLabel(sliceAlpha)}, dashed all alphas`,
    `Gaussian KDE, Scott's rule bandwidth (${bandwidths})`,
    body,
  );
  return { svg, plotted, empty: false };
}

export function boxplotFigure(
  reports: SweepReport[],
  labels: string[],
  metric: string,
): FigureResult {
  const plotted: PlottedValue[] = [];
  interface Box {
    label: string;
    color: string;
    summary: { min: number; q1: number; median: number; q3: number; max: number };
  }
  const boxes: Box[] = [];
  reports.forEach((r, idx) => {
    const summary = r.component_summary[metric];
    if (!summary) return;
    (["fpd", "fnd"] as const).forEach((side) => {
      const s = summary[side];
      if (!s) return;
      for (const field of ["min", "q1", "median", "q3", "max"] as const) {
        plotted.push({
          value: s[field],
          input: idx,
          pointer: `component_summary/${metric}/${side}/${field}`,
        });
      }
      boxes.push({
        label: `${labels[idx]} ${side.toUpperCase()}`,
        color: PALETTE[idx % PALETTE.length],
        summary: s,
      });
    });
  });
  if (boxes.length === 0) {
    return {
      svg: emptyPanel(`${metric.toUpperCase()} components`, "no computable component summaries"),
      plotted: [],
      empty: true,
    };
  }
  const frame = plotFrame();
  const hi = Math.max(...boxes.map((b) => b.summary.max));
  const lo = Math.min(0, ...boxes.map((b) => b.summary.min));
  const y = linearScale(lo, hi * 1.05 || 1, frame.y0, frame.y1);
  const x = linearScale(0, boxes.length, frame.x0, frame.x1, boxes.length);
  x.ticks = [];
  const body: string[] = [];
  boxes.forEach((box, i) => {
    const cx = x(i + 0.5);
    const half = Math.min(28, (frame.x1 - frame.x0) / boxes.length / 2 - 6);
    const s = box.summary;
    body.push(
      tag("line", { x1: cx, y1: y(s.min), x2: cx, y2: y(s.q1), stroke: box.color }),
      tag("line", { x1: cx, y1: y(s.q3), x2: cx, y2: y(s.max), stroke: box.color }),
      tag("rect", {
        x: cx - half,
        y: y(s.q3),
        width: 2 * half,
        height: Math.max(0.5, y(s.q1) - y(s.q3)),
        fill: box.color,
        "fill-opacity": 0.25,
        stroke: box.color,
      }),
      tag("line", {
        x1: cx - half,
        y1: y(s.median),
        x2: cx + half,
        y2: y(s.median),
        stroke: box.color,
        "stroke-width": 2,
      }),
      tag(
        "text",
        { x: cx, y: frame.y0 + 18, "text-anchor": "middle", "font-size": 10, fill: "#333" },
        [box.label.replace(/&/g, "&amp;")],
      ),
    );
  });
  body.push(...axes(frame, x, y, "", "component value", () => ""));
  const svg = document(
    `${metric.toUpperCase()} FPD/FND component distributions`,
    "boxes: q1..q3 with median; whiskers: min..max; from report summaries",
    body,
  );
  return { svg, plotted, empty: false };
}

interface CurveSeries {
  label: string;
  points: { x: number; y: number }[];
}

export function metricCurveFigure(
  sweeps: SweepReport[] | null,
  curves: CurveReport[] | null,
  labels: string[],
  metric: string,
  alpha = 0.5,
): FigureResult {
  const plotted: PlottedValue[] = [];
  const series: CurveSeries[] = [];
  let sliceAlpha = alpha;
  if (curves) {
    curves.forEach((report, idx) => {
      sliceAlpha = report.alpha;
      const pts: { x: number; y: number }[] = [];
      report.points.forEach((p, i) => {
        if (p.achieved_fmr <= 0) return; // log axis cannot place a zero rate
        pts.push({ x: p.achieved_fmr, y: p.value });
        plotted.push({ value: p.value, input: idx, pointer: `points/${i}/value` });
        plotted.push({ value: p.achieved_fmr, input: idx, pointer: `points/${i}/achieved_fmr` });
      });
      series.push({ label: labels[idx], points: pts });
    });
  }
  if (sweeps) {
    sweeps.forEach((report, idx) => {
      const slice = nearestAlpha(report, alpha);
      sliceAlpha = slice;
      const pts: { x: number; y: number }[] = [];
      report.cells.forEach((cell, i) => {
        if (cell.metric !== metric || cell.alpha !== slice || !cell.computable) return;
        if (cell.achieved_fmr === null || cell.achieved_fmr <= 0) return;
        pts.push({ x: cell.achieved_fmr, y: cell.value as number });
        plotted.push({ value: cell.value as number, input: idx, pointer: `cells/${i}/value` });
        plotted.push({
          value: cell.achieved_fmr,
          input: idx,
          pointer: `cells/${i}/achieved_fmr`,
        });
      });
      pts.sort((a, b) => a.x - b.x);
      series.push({ label: labels[idx], points: pts });
    });
  }
  const all = series.flatMap((s) => s.points);
  if (all.length === 0) {
    return {
      svg: emptyPanel(`${metric.toUpperCase()} vs FMR`, "no computable curve points"),
      plotted: [],
      empty: true,
    };
  }
  const frame = plotFrame();
  const xs = all.map((p) => p.x);
  const x = logScale(Math.min(...xs), Math.max(...xs), frame.x0, frame.x1);
  const range = METRIC_RANGE[metric] ?? [0, Math.max(...all.map((p) => p.y)) * 1.05];
  const y = linearScale(range[0], range[1], frame.y0, frame.y1);
  const body: string[] = [];
  series.forEach((s, i) => {
    if (s.points.length === 0) return;
    const color = PALETTE[i % PALETTE.length];
    body.push(polyline(s.points.map((p) => [x(p.x), y(p.y)] as [number, number]), color));
    for (const p of s.points) {
      body.push(tag("circle", { cx: x(p.x), cy: y(p.y), r: 2.2, fill: color }));
    }
  });
  body.push(...axes(frame, x, y, "achieved FMR (log scale)", `${metric.toUpperCase()} value`));
  body.push(...legend(labels, frame));
  const svg = document(
    `${metric.toUpperCase()} across operating points, alpha=${fmtLabel(sliceAlpha)}`,
    "one line per system; points are report cells",
    body,
  );
  return { svg, plotted, empty: false };
}

export function detFigure(reports: DetReport[], labels: string[]): FigureResult {
  const plotted: PlottedValue[] = [];
  const series: CurveSeries[] = [];
  reports.forEach((report, idx) => {
    report.series.forEach((s, si) => {
      const pts: { x: number; y: number }[] = [];
      s.points.forEach((p, pi) => {
        // endpoints at rate 0 or 1 sit at infinity on normal-deviate axes
        if (p.fmr <= 0 || p.fmr >= 1 || p.fnmr <= 0 || p.fnmr >= 1) return;
        if (!Number.isFinite(detThreshold(p.threshold))) return;
        pts.push({ x: p.fmr, y: p.fnmr });
        plotted.push({ value: p.fmr, input: idx, pointer: `series/${si}/points/${pi}/fmr` });
        plotted.push({ value: p.fnmr, input: idx, pointer: `series/${si}/points/${pi}/fnmr` });
      });
      const base = s.group ?? labels[idx];
      series.push({ label: reports.length > 1 ? `${labels[idx]} ${base}` : base, points: pts });
    });
  });
  const all = series.flatMap((s) => s.points);
  if (all.length === 0) {
    return {
      svg: emptyPanel("DET", "no interior operating points to draw"),
      plotted: [],
      empty: true,
    };
  }
  const frame = plotFrame();
  const lo = Math.max(1e-4, Math.min(...all.map((p) => Math.min(p.x, p.y))));
  const hi = Math.min(0.6, Math.max(...all.map((p) => Math.max(p.x, p.y))));
  const x = probitScale(lo, hi, frame.x0, frame.x1);
  const y = probitScale(lo, hi, frame.y0, frame.y1);
  const pct = (v: number) => `${fmtLabel(v * 100)}%`;
  const body: string[] = [];
  series.forEach((s, i) => {
    const pts = s.points.filter((p) => p.x >= lo && p.x <= hi && p.y >= lo && p.y <= hi);
    if (pts.length === 0) return;
    body.push(
      polyline(pts.map((p) => [x(p.x), y(p.y)] as [number, number]), PALETTE[i % PALETTE.length]),
    );
  });
  body.push(...axes(frame, x, y, "false match rate", "false non-match rate", pct, pct));
  body.push(...legend(series.map((s) => s.label), frame));
  const svg = document(
    "Detection error tradeoff",
    "normal-deviate axes; sentinel endpoints omitted",
    body,
  );
  return { svg, plotted, empty: false };
}
