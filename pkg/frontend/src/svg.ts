/**
 * Minimal SVG scene construction: linear/log scales, axes with ticks,
 * polylines and labels.  No DOM, no dependencies: figures are composed as
 * strings and written by the caller.
 */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGINS: Margins = { top: 36, right: 24, bottom: 46, left: 64 };

export type Scale = (v: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale requires positive domain, got [${d0}, ${d1}]`);
  }
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  return (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0);
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) throw new Error("no finite values to plot");
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  return [lo, hi];
}

export function linearTicks(lo: number, hi: number, n = 6): number[] {
  const raw = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm < 1.5 ? 1 : norm < 3.5 ? 2 : norm < 7.5 ? 5 : 10) * mag;
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-12 * Math.abs(step); v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

export function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    const v = Math.pow(10, e);
    if (v >= lo * (1 - 1e-9)) out.push(v);
  }
  return out.length >= 2 ? out : [lo, hi];
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0);
  return String(Number(v.toPrecision(4)));
}

export class Figure {
  readonly width: number;
  readonly height: number;
  readonly margins: Margins;
  private parts: string[] = [];

  constructor(width = 640, height = 420, margins = DEFAULT_MARGINS) {
    this.width = width;
    this.height = height;
    this.margins = margins;
  }

  get innerX(): [number, number] {
    return [this.margins.left, this.width - this.margins.right];
  }

  get innerY(): [number, number] {
    // SVG y grows downward; range is bottom -> top
    return [this.height - this.margins.bottom, this.margins.top];
  }

  polyline(xs: number[], ys: number[], sx: Scale, sy: Scale, stroke: string,
           width = 1.5, dash = ""): void {
    const pts: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      const x = sx(xs[i]);
      const y = sy(ys[i]);
      if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
      pts.push(`${x.toFixed(2)},${y.toFixed(2)}`);
    }
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr} points="${pts.join(" ")}"/>`,
    );
  }

  vline(x: number, sx: Scale, stroke: string, dash = "4 3"): void {
    const [y0, y1] = this.innerY;
    const px = sx(x).toFixed(2);
    this.parts.push(
      `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="${stroke}" stroke-dasharray="${dash}"/>`,
    );
  }

  text(x: number, y: number, content: string, opts = ""): void {
    this.parts.push(`<text x="${x.toFixed(1)}" y="${y.toFixed(1)}" ${opts}>${escapeXml(content)}</text>`);
  }

  axes(sx: Scale, sy: Scale, xTicks: number[], yTicks: number[],
       xLabel: string, yLabel: string, title: string): void {
    const [x0, x1] = this.innerX;
    const [y0, y1] = this.innerY;
    const ax: string[] = [];
    ax.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333"/>`);
    ax.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#333"/>`);
    for (const t of xTicks) {
      const px = sx(t);
      if (px < x0 - 0.5 || px > x1 + 0.5) continue;
      ax.push(`<line x1="${px.toFixed(2)}" y1="${y0}" x2="${px.toFixed(2)}" y2="${y0 + 5}" stroke="#333"/>`);
      ax.push(`<text x="${px.toFixed(2)}" y="${y0 + 18}" text-anchor="middle" font-size="11">${fmt(t)}</text>`);
    }
    for (const t of yTicks) {
      const py = sy(t);
      if (py > y0 + 0.5 || py < y1 - 0.5) continue;
      ax.push(`<line x1="${x0 - 5}" y1="${py.toFixed(2)}" x2="${x0}" y2="${py.toFixed(2)}" stroke="#333"/>`);
      ax.push(`<text x="${x0 - 8}" y="${(py + 4).toFixed(2)}" text-anchor="end" font-size="11">${fmt(t)}</text>`);
    }
    ax.push(`<text x="${(x0 + x1) / 2}" y="${this.height - 8}" text-anchor="middle" font-size="12">${escapeXml(xLabel)}</text>`);
    ax.push(`<text x="14" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 14 ${(y0 + y1) / 2})">${escapeXml(yLabel)}</text>`);
    ax.push(`<text x="${(x0 + x1) / 2}" y="20" text-anchor="middle" font-size="13" font-weight="bold">${escapeXml(title)}</text>`);
    this.parts.push(...ax);
  }

  legend(entries: Array<[string, string, string]>): void {
    // entries: [label, color, dash]
    const [x0] = this.innerX;
    let y = this.margins.top + 10;
    for (const [label, color, dash] of entries) {
      const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
      this.parts.push(
        `<line x1="${x0 + 8}" y1="${y - 4}" x2="${x0 + 34}" y2="${y - 4}" stroke="${color}" stroke-width="2"${dashAttr}/>`,
      );
      this.text(x0 + 40, y, label, 'font-size="11"');
      y += 16;
    }
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
