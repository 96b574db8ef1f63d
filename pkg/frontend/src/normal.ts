/**
 * Standard normal quantile function (probit), used for the normal-deviate
 * axes of DET plots. Rational approximation from Abramowitz & Stegun,
 * formula 26.2.23; absolute error below 4.5e-4, plenty for axis placement.
 */

function rationalApproximation(t: number): number {
  const c = [2.515517, 0.802853, 0.010328];
  const d = [1.432788, 0.189269, 0.001308];
  const numerator = (c[2] * t + c[1]) * t + c[0];
  const denominator = ((d[2] * t + d[1]) * t + d[0]) * t + 1.0;
  return t - numerator / denominator;
}

/** Inverse CDF of the standard normal distribution. */
export function probit(p: number): number {
  if (p <= 0) return -Infinity;
  if (p >= 1) return Infinity;
  if (p < 0.5) {
    return -rationalApproximation(Math.sqrt(-2.0 * Math.log(p)));
  }
  return rationalApproximation(Math.sqrt(-2.0 * Math.log(1.0 - p)));
}

/** Standard normal density, used by the Gaussian KDE kernel. */
export function normalPdf(x: number): number {
  return Math.exp(-0.5 * x * x) / Math.sqrt(2 * Math.PI);
}
