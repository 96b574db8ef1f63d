/** Small statistics helpers for density panels. */

import { normalPdf } from "./normal.js";

export function mean(values: number[]): number {
  return values.reduce((a, b) => a + b, 0) / values.length;
}

export function sampleStd(values: number[]): number {
  if (values.length < 2) return 0;
  const m = mean(values);
  const ss = values.reduce((acc, v) => acc + (v - m) * (v - m), 0);
  return Math.sqrt(ss / (values.length - 1));
}

/** Scott's rule bandwidth: sigma * n^(-1/5). */
export function scottBandwidth(values: number[]): number {
  const h = sampleStd(values) * Math.pow(values.length, -0.2);
  return h > 0 ? h : 1e-9;
}

export interface DensityCurve {
  xs: number[];
  ys: number[];
  bandwidth: number;
}

/** Gaussian kernel density estimate over an even grid of `points` values. */
export function gaussianKde(
  values: number[],
  lo: number,
  hi: number,
  points = 200,
): DensityCurve {
  const bandwidth = scottBandwidth(values);
  const xs: number[] = [];
  const ys: number[] = [];
  const step = (hi - lo) / (points - 1);
  for (let i = 0; i < points; i++) {
    const x = lo + i * step;
    let acc = 0;
    for (const v of values) {
      acc += normalPdf((x - v) / bandwidth);
    }
    xs.push(x);
    ys.push(acc / (values.length * bandwidth));
  }
  return { xs, ys, bandwidth };
}
