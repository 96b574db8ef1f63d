/**
 * Deterministic SVG assembly: no timestamps, no randomness, fixed number
 * formatting, so identical inputs render byte-identical files.
 */

import { probit } from "./normal.js";

export const WIDTH = 720;
export const HEIGHT = 460;
export const MARGIN = { top: 44, right: 24, bottom: 64, left: 64 };

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
];

/** Fixed-precision coordinate formatting (trims trailing zeros). */
export function fmt(n: number): string {
  if (!Number.isFinite(n)) throw new Error(`non-finite coordinate: ${n}`);
  const s = n.toFixed(3);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

/** Tick label formatting: compact scientific for small magnitudes. */
export function fmtLabel(n: number): string {
  if (n === 0) return "0";
  const abs = Math.abs(n);
  if (abs >= 0.001 && abs < 10000) {
    return String(parseFloat(n.toPrecision(4)));
  }
  return n.toExponential(1).replace("e-", "e-").replace("e+", "e");
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function tag(
  name: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
): string {
  const rendered = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  if (children.length === 0) {
    return `<${name} ${rendered}/>`;
  }
  return `<${name} ${rendered}>${children.join("")}</${name}>`;
}

export interface Scale {
  (value: number): number;
  ticks: number[];
}

export function linearScale(d0: number, d1: number, r0: number, r1: number, tickCount = 6): Scale {
  const span = d1 - d0 || 1;
  const fn = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  fn.ticks = [];
  for (let i = 0; i <= tickCount; i++) {
    fn.ticks.push(d0 + (span * i) / tickCount);
  }
  return fn;
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const l0 = Math.log10(d0);
  const l1 = Math.log10(d1);
  const span = l1 - l0 || 1;
  const fn = ((v: number) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(l0 - 1e-9); e <= Math.floor(l1 + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length === 0 || ticks[0] > d0 * (1 + 1e-9)) ticks.unshift(d0);
  if (ticks[ticks.length - 1] < d1 * (1 - 1e-9)) ticks.push(d1);
  fn.ticks = ticks;
  return fn;
}

/** Normal-deviate scale for DET axes; domain values are rates in (0, 1). */
export function probitScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const p0 = probit(d0);
  const p1 = probit(d1);
  const span = p1 - p0 || 1;
  const fn = ((v: number) => r0 + ((probit(v) - p0) / span) * (r1 - r0)) as Scale;
  fn.ticks = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4].filter(
    (t) => t >= d0 - 1e-12 && t <= d1 + 1e-12,
  );
  return fn;
}

export function polyline(points: [number, number][], stroke: string, opts: Record<string, string | number> = {}): string {
  const d = points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join("");
  return tag("path", { d, fill: "none", stroke, "stroke-width": 1.5, ...opts });
}

export interface Frame {
  x0: number;
  x1: number;
  y0: number;
  y1: number;
}

export function plotFrame(): Frame {
  return {
    x0: MARGIN.left,
    x1: WIDTH - MARGIN.right,
    y0: HEIGHT - MARGIN.bottom,
    y1: MARGIN.top,
  };
}

export function axes(
  frame: Frame,
  xScale: Scale,
  yScale: Scale,
  xLabel: string,
  yLabel: string,
  xTickFmt: (v: number) => string = fmtLabel,
  yTickFmt: (v: number) => string = fmtLabel,
): string[] {
  const parts: string[] = [];
  parts.push(
    tag("rect", {
      x: frame.x0,
      y: frame.y1,
      width: frame.x1 - frame.x0,
      height: frame.y0 - frame.y1,
      fill: "none",
      stroke: "#333",
      "stroke-width": 1,
    }),
  );
  for (const t of xScale.ticks) {
    const x = xScale(t);
    parts.push(tag("line", { x1: x, y1: frame.y0, x2: x, y2: frame.y0 + 5, stroke: "#333" }));
    parts.push(
      tag(
        "text",
        { x, y: frame.y0 + 18, "text-anchor": "middle", "font-size": 11, fill: "#333" },
        [esc(xTickFmt(t))],
      ),
    );
  }
  for (const t of yScale.ticks) {
    const y = yScale(t);
    parts.push(tag("line", { x1: frame.x0 - 5, y1: y, x2: frame.x0, y2: y, stroke: "#333" }));
    parts.push(
      tag(
        "text",
        { x: frame.x0 - 8, y: y + 4, "text-anchor": "end", "font-size": 11, fill: "#333" },
        [esc(yTickFmt(t))],
      ),
    );
  }
  parts.push(
    tag(
      "text",
      {
        x: (frame.x0 + frame.x1) / 2,
        y: HEIGHT - 22,
        "text-anchor": "middle",
        "font-size": 13,
        fill: "#111",
      },
      [esc(xLabel)],
    ),
  );
  parts.push(
    tag(
      "text",
      {
        x: 18,
        y: (frame.y0 + frame.y1) / 2,
        "text-anchor": "middle",
        "font-size": 13,
        fill: "#111",
        transform: `rotate(-90 18 ${fmt((frame.y0 + frame.y1) / 2)})`,
      },
      [esc(yLabel)],
    ),
  );
  return parts;
}

export function legend(labels: string[], frame: Frame): string[] {
  const parts: string[] = [];
  labels.forEach((label, i) => {
    const y = frame.y1 + 14 + i * 16;
    const x = frame.x1 - 150;
    parts.push(
      tag("line", {
        x1: x,
        y1: y - 4,
        x2: x + 22,
        y2: y - 4,
        stroke: PALETTE[i % PALETTE.length],
        "stroke-width": 2,
      }),
    );
    parts.push(
      tag("text", { x: x + 28, y, "font-size": 11, fill: "#111" }, [esc(label)]),
    );
  });
  return parts;
}

export function document(title: string, footer: string, body: string[]): string {
  const parts = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
    tag("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#ffffff" }),
    tag(
      "text",
      { x: WIDTH / 2, y: 24, "text-anchor": "middle", "font-size": 15, fill: "#111" },
      [esc(title)],
    ),
    ...body,
    tag(
      "text",
      { x: WIDTH / 2, y: HEIGHT - 6, "text-anchor": "middle", "font-size": 10, fill: "#666" },
      [esc(footer)],
    ),
    "</svg>",
  ];
  return parts.join("\n") + "\n";
}

/** Annotated empty panel for inputs with nothing drawable. */
export function emptyPanel(title: string, note: string): string {
  const frame = plotFrame();
  return document(title, "no drawable data", [
    tag("rect", {
      x: frame.x0,
      y: frame.y1,
      width: frame.x1 - frame.x0,
      height: frame.y0 - frame.y1,
      fill: "none",
      stroke: "#333",
    }),
    tag(
      "text",
      {
        x: (frame.x0 + frame.x1) / 2,
        y: (frame.y0 + frame.y1) / 2,
        "text-anchor": "middle",
        "font-size": 13,
        fill: "#888",
      },
      [esc(note)],
    ),
  ]);
}
