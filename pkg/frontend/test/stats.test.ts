import assert from "node:assert/strict";
import { test } from "node:test";

import { probit } from "../src/normal.js";
import { gaussianKde, sampleStd, scottBandwidth } from "../src/stats.js";

test("probit matches known quantiles", () => {
  assert.ok(Math.abs(probit(0.5)) < 5e-4);
  assert.ok(Math.abs(probit(0.975) - 1.959964) < 5e-4);
  assert.ok(Math.abs(probit(0.025) + 1.959964) < 5e-4);
  assert.ok(Math.abs(probit(0.001) + 3.090232) < 5e-4);
  assert.equal(probit(0), -Infinity);
  assert.equal(probit(1), Infinity);
});

test("probit is antisymmetric around one half", () => {
  for (const p of [0.01, 0.1, 0.25, 0.4]) {
    assert.ok(Math.abs(probit(p) + probit(1 - p)) < 1e-9);
  }
});

test("sample standard deviation", () => {
  assert.equal(sampleStd([2, 2, 2]), 0);
  assert.ok(Math.abs(sampleStd([1, 2, 3, 4]) - Math.sqrt(5 / 3)) < 1e-12);
});

test("scott bandwidth shrinks with sample size", () => {
  const narrow = scottBandwidth([0.1, 0.2, 0.3, 0.4]);
  const wide = scottBandwidth(Array.from({ length: 400 }, (_, i) => 0.1 + (0.3 * i) / 399));
  assert.ok(wide < narrow);
  assert.ok(scottBandwidth([1, 1, 1]) > 0); // degenerate input keeps a positive bandwidth
});

test("kde integrates to roughly one over a wide window", () => {
  const values = [0.3, 0.35, 0.4, 0.42, 0.5, 0.55];
  const { xs, ys } = gaussianKde(values, -1, 2, 600);
  const step = xs[1] - xs[0];
  const integral = ys.reduce((a, b) => a + b, 0) * step;
  assert.ok(Math.abs(integral - 1) < 0.02, `integral was ${integral}`);
});
