/**
 * Report document types mirroring the evaluation service's JSON schema
 * (schema_version 1). The renderer consumes these documents read-only.
 */

export const SUPPORTED_SCHEMA_VERSION = 1;

export interface ToolInfo {
  name: string;
  version: string;
}

export interface ReportEnvelope {
  schema_version: number;
  tool: ToolInfo;
  command: string;
  config: Record<string, unknown>;
}

export interface Cell {
  metric: "fdr" | "ir" | "garbe";
  fmr_target: number | null;
  achieved_fmr: number | null;
  threshold: number;
  quantized_to_zero: boolean;
  alpha: number;
  value: number | null;
  fpd: number | null;
  fnd: number | null;
  computable: boolean;
}

export interface FiveNumberSummary {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  count: number;
}

export interface ComponentSummary {
  fpd: FiveNumberSummary | null;
  fnd: FiveNumberSummary | null;
}

export interface SweepReport extends ReportEnvelope {
  grid: { fmr_targets: number[]; alphas: number[] };
  resolved_targets: {
    target: number;
    threshold: number;
    achieved_fmr: number;
    quantized_to_zero: boolean;
  }[];
  cells: Cell[];
  component_summary: Record<string, ComponentSummary>;
}

/** Sentinel thresholds arrive as the strings "inf" / "-inf". */
export interface DetPoint {
  threshold: number | "inf" | "-inf";
  fmr: number;
  fnmr: number;
}

export interface DetReport extends ReportEnvelope {
  scope: "pooled" | "group";
  series: { group: string | null; points: DetPoint[] }[];
}

export interface CurvePoint {
  fmr_target: number;
  achieved_fmr: number;
  threshold: number;
  quantized_to_zero: boolean;
  value: number;
}

export interface CurveReport extends ReportEnvelope {
  metric: string;
  alpha: number;
  points: CurvePoint[];
}

export class SchemaMismatchError extends Error {
  constructor(found: unknown) {
    super(
      `unsupported report schema_version ${String(found)}; this renderer supports ${SUPPORTED_SCHEMA_VERSION}`,
    );
    this.name = "SchemaMismatchError";
  }
}

function checkEnvelope(doc: unknown): asserts doc is ReportEnvelope {
  if (typeof doc !== "object" || doc === null) {
    throw new Error("report is not a JSON object");
  }
  const version = (doc as { schema_version?: unknown }).schema_version;
  if (version !== SUPPORTED_SCHEMA_VERSION) {
    throw new SchemaMismatchError(version);
  }
}

export function parseSweepReport(json: string): SweepReport {
  const doc: unknown = JSON.parse(json);
  checkEnvelope(doc);
  const report = doc as SweepReport;
  if (!Array.isArray(report.cells)) {
    throw new Error(`expected a sweep report, got command ${report.command}`);
  }
  return report;
}

export function parseDetReport(json: string): DetReport {
  const doc: unknown = JSON.parse(json);
  checkEnvelope(doc);
  const report = doc as DetReport;
  if (!Array.isArray(report.series)) {
    throw new Error(`expected a det report, got command ${report.command}`);
  }
  return report;
}

export function parseCurveReport(json: string): CurveReport {
  const doc: unknown = JSON.parse(json);
  checkEnvelope(doc);
  const report = doc as CurveReport;
  if (!Array.isArray(report.points)) {
    throw new Error(`expected a curve report, got command ${report.command}`);
  }
  return report;
}

export function detThreshold(t: DetPoint["threshold"]): number {
  if (t === "inf") return Infinity;
  if (t === "-inf") return -Infinity;
  return t;
}
