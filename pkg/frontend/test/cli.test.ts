import assert from "node:assert/strict";
import { execFileSync, spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { test } from "node:test";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));
const cliPath = join(here, "..", "src", "cli.js");
const fixtures = join(here, "..", "..", "test", "fixtures");

function run(args: string[]) {
  return spawnSync(process.execPath, [cliPath, ...args], { encoding: "utf-8" });
}

test("cli renders byte-identical files for identical inputs", () => {
  const dir = mkdtempSync(join(tmpdir(), "vf-fig-"));
  const a = join(dir, "a.svg");
  const b = join(dir, "b.svg");
  const sweep = join(fixtures, "sweep_a.json");
  for (const out of [a, b]) {
    const res = run(["--kind", "density", "--input", sweep, "--metric", "garbe", "--out", out]);
    assert.equal(res.status, 0, res.stderr);
  }
  assert.deepEqual(readFileSync(a), readFileSync(b));
});

test("cli renders every figure kind", () => {
  const dir = mkdtempSync(join(tmpdir(), "vf-fig-"));
  const cases: [string, string][] = [
    ["density", "sweep_a.json"],
    ["boxplot", "sweep_a.json"],
    ["metric-curve", "curve.json"],
    ["det", "det.json"],
  ];
  for (const [kind, fixture] of cases) {
    const out = join(dir, `${kind}.svg`);
    const res = run(["--kind", kind, "--input", join(fixtures, fixture), "--out", out]);
    assert.equal(res.status, 0, `${kind}: ${res.stderr}`);
    const svg = readFileSync(out, "utf-8");
    assert.ok(svg.startsWith("<svg"), kind);
    assert.ok(svg.trimEnd().endsWith("</svg>"), kind);
  }
});

test("cli rejects unsupported schema versions", () => {
  const dir = mkdtempSync(join(tmpdir(), "vf-fig-"));
  const doc = JSON.parse(readFileSync(join(fixtures, "sweep_a.json"), "utf-8"));
  doc.schema_version = 99;
  const badPath = join(dir, "bad.json");
  writeFileSync(badPath, JSON.stringify(doc));
  const res = run(["--kind", "density", "--input", badPath, "--out", join(dir, "x.svg")]);
  assert.equal(res.status, 1);
  assert.match(res.stderr, /schema_version/);
});

test("cli exits nonzero but writes a panel when nothing is drawable", () => {
  const dir = mkdtempSync(join(tmpdir(), "vf-fig-"));
  const doc = JSON.parse(readFileSync(join(fixtures, "sweep_a.json"), "utf-8"));
  for (const cell of doc.cells) {
    cell.computable = false;
    cell.value = null;
  }
  const emptyPath = join(dir, "empty.json");
  writeFileSync(emptyPath, JSON.stringify(doc));
  const out = join(dir, "empty.svg");
  const res = run(["--kind", "density", "--input", emptyPath, "--out", out]);
  assert.equal(res.status, 2);
  assert.match(readFileSync(out, "utf-8"), /no computable values/);
});

test("cli validates arguments", () => {
  assert.equal(run(["--kind", "nope", "--input", "x", "--out", "y"]).status, 1);
  assert.equal(run(["--input", "x", "--out", "y"]).status, 1);
  assert.equal(run(["--kind", "det", "--out", "y"]).status, 1);
  const res = run([
    "--kind",
    "det",
    "--input",
    join(fixtures, "det.json"),
    "--alpha",
    "7",
    "--out",
    "y.svg",
  ]);
  assert.equal(res.status, 1);
});

test("cli reads missing files gracefully", () => {
  const res = run(["--kind", "det", "--input", "/no/such.json", "--out", "/tmp/x.svg"]);
  assert.equal(res.status, 1);
  assert.match(res.stderr, /cannot read/);
});

test("execFileSync smoke: multi-input density with labels", () => {
  const dir = mkdtempSync(join(tmpdir(), "vf-fig-"));
  const out = join(dir, "multi.svg");
  execFileSync(process.execPath, [
    cliPath,
    "--kind",
    "density",
    "--input",
    join(fixtures, "sweep_a.json"),
    "--input",
    join(fixtures, "sweep_b.json"),
    "--label",
    "ecapa",
    "--label",
    "resnet",
    "--out",
    out,
  ]);
  const svg = readFileSync(out, "utf-8");
  assert.match(svg, /ecapa/);
  assert.match(svg, /resnet/);
});
