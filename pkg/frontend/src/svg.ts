/**
 * Minimal hand-rolled SVG scatter plot.  No DOM, no chart library: the
 * figures are simple enough (a handful of points, one fitted line, axis
 * ticks, a caption) that emitting the markup directly keeps this tool
 * dependency-free and byte-deterministic.
 */

export interface ScatterSpec {
  x: number[];
  y: number[];
  logLog: boolean;
  xLabel: string;
  yLabel: string;
  caption: string;
  /** slope/intercept of a fitted line in (possibly log) coordinates */
  fit?: { slope: number; intercept: number };
}

const W = 640;
const H = 480;
const M = { left: 70, right: 20, top: 20, bottom: 80 };

function ticks(lo: number, hi: number, count = 5): number[] {
  const out: number[] = [];
  for (let i = 0; i < count; i++) {
    out.push(lo + ((hi - lo) * i) / (count - 1));
  }
  return out;
}

function fmt(value: number, logLog: boolean): string {
  const v = logLog ? Math.exp(value) : value;
  return v.toPrecision(3);
}

export function renderScatterSvg(spec: ScatterSpec): string {
  const tx = spec.logLog ? spec.x.map(Math.log) : spec.x.slice();
  const ty = spec.logLog ? spec.y.map(Math.log) : spec.y.slice();
  const xlo = Math.min(...tx);
  const xhi = Math.max(...tx);
  const ylo = Math.min(...ty);
  const yhi = Math.max(...ty);
  const xpad = (xhi - xlo || 1) * 0.08;
  const ypad = (yhi - ylo || 1) * 0.08;
  const sx = (v: number) =>
    M.left + ((v - (xlo - xpad)) / (xhi - xlo + 2 * xpad)) * (W - M.left - M.right);
  const sy = (v: number) =>
    H - M.bottom - ((v - (ylo - ypad)) / (yhi - ylo + 2 * ypad)) * (H - M.top - M.bottom);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">`,
    `<rect width="${W}" height="${H}" fill="white"/>`,
  );

  // axes and ticks
  parts.push(
    `<line x1="${M.left}" y1="${H - M.bottom}" x2="${W - M.right}" y2="${H - M.bottom}" stroke="black"/>`,
    `<line x1="${M.left}" y1="${M.top}" x2="${M.left}" y2="${H - M.bottom}" stroke="black"/>`,
  );
  for (const t of ticks(xlo, xhi)) {
    const px = sx(t);
    parts.push(
      `<line x1="${px}" y1="${H - M.bottom}" x2="${px}" y2="${H - M.bottom + 5}" stroke="black"/>`,
      `<text x="${px}" y="${H - M.bottom + 18}" font-size="11" text-anchor="middle">${fmt(t, spec.logLog)}</text>`,
    );
  }
  for (const t of ticks(ylo, yhi)) {
    const py = sy(t);
    parts.push(
      `<line x1="${M.left - 5}" y1="${py}" x2="${M.left}" y2="${py}" stroke="black"/>`,
      `<text x="${M.left - 8}" y="${py + 4}" font-size="11" text-anchor="end">${fmt(t, spec.logLog)}</text>`,
    );
  }
  parts.push(
    `<text x="${(M.left + W - M.right) / 2}" y="${H - M.bottom + 38}" font-size="13" text-anchor="middle">${spec.xLabel}${spec.logLog ? " (log scale)" : ""}</text>`,
    `<text x="16" y="${(M.top + H - M.bottom) / 2}" font-size="13" text-anchor="middle" transform="rotate(-90 16 ${(M.top + H - M.bottom) / 2})">${spec.yLabel}${spec.logLog ? " (log scale)" : ""}</text>`,
  );

  // fitted line behind the points
  if (spec.fit) {
    const y1 = spec.fit.intercept + spec.fit.slope * (xlo - xpad);
    const y2 = spec.fit.intercept + spec.fit.slope * (xhi + xpad);
    parts.push(
      `<line x1="${sx(xlo - xpad)}" y1="${sy(y1)}" x2="${sx(xhi + xpad)}" y2="${sy(y2)}" stroke="#c44" stroke-width="1.5"/>`,
    );
  }
  for (let i = 0; i < tx.length; i++) {
    parts.push(`<circle cx="${sx(tx[i])}" cy="${sy(ty[i])}" r="4" fill="#246"/>`);
  }

  parts.push(
    `<text x="${(M.left + W - M.right) / 2}" y="${H - 14}" font-size="13" text-anchor="middle">${spec.caption}</text>`,
    "</svg>",
  );
  return parts.join("\n") + "\n";
}
