/** Least-squares line fit; the log-log variant matches the manifest slopes. */

export interface LineFit {
  slope: number;
  intercept: number;
}

export function leastSquares(x: number[], y: number[]): LineFit {
  if (x.length !== y.length || x.length < 2) {
    throw new Error(`need at least two paired points, got ${x.length}`);
  }
  const n = x.length;
  const mx = x.reduce((a, b) => a + b, 0) / n;
  const my = y.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx === 0) {
    throw new Error("x values are all identical; slope undefined");
  }
  const slope = sxy / sxx;
  return { slope, intercept: my - slope * mx };
}

export function logLogFit(x: number[], y: number[]): LineFit {
  if (x.some((v) => v <= 0) || y.some((v) => v <= 0)) {
    throw new Error("log-log fit needs strictly positive data");
  }
  return leastSquares(x.map(Math.log), y.map(Math.log));
}
