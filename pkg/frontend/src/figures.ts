/**
 * The four figure kinds rendered from shocklab run artifacts:
 *
 *   profile   U(xi) and U'(xi) with the support endpoints x_L/x_R marked
 *   decay     log-log perturbation norms vs 1+t with the (1+t)^(-r) guide
 *   shift     tracked X(t) against the unperturbed drift gamma*t
 *   snapshot  u(x) at one output time, profile overlay optional
 *
 * Figures are regenerable artifacts: rendering only reads its inputs and
 * never feeds back into any pass/fail logic.
 */

import {
  ProfileData, RateEntry, Table,
  readProfileCsv, readProfileMeta, readRateReport,
  readSnapshotCsv, readTimeseriesCsv,
} from "./csv.js";
import {
  Figure, extent, linearScale, linearTicks, logScale, logTicks,
} from "./svg.js";

export type FigureKind = "profile" | "decay" | "shift" | "snapshot";

export interface FigureSpec {
  kind: FigureKind;
  /** profile.csv for profile/snapshot overlays */
  profileCsv?: string;
  /** profile_meta.json (support endpoints, gamma) */
  profileMeta?: string;
  /** timeseries.csv for decay/shift */
  timeseriesCsv?: string;
  /** rate_report.json supplying the decay guide exponents */
  rateReport?: string;
  /** snapshot CSV (x,u) */
  snapshotCsv?: string;
  /** norm columns for decay figures */
  norms?: string[];
  output: string;
}

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

export function renderProfile(prof: ProfileData, meta?: {
  x_L?: number | string; x_R?: number | string;
}): string {
  const fig = new Figure();
  const [xlo, xhi] = extent(prof.xi);
  const allY = prof.U.concat(prof.Uprime);
  const [ylo, yhi] = extent(allY);
  const sx = linearScale(xlo, xhi, fig.innerX[0], fig.innerX[1]);
  const sy = linearScale(ylo - 0.05, yhi + 0.05, fig.innerY[0], fig.innerY[1]);
  fig.axes(sx, sy, linearTicks(xlo, xhi), linearTicks(ylo, yhi),
    "xi", "U, U'", "viscous shock profile");
  fig.polyline(prof.xi, prof.U, sx, sy, COLORS[0], 2);
  fig.polyline(prof.xi, prof.Uprime, sx, sy, COLORS[1], 1.5, "5 3");
  const entries: Array<[string, string, string]> = [
    ["U(xi)", COLORS[0], ""],
    ["U'(xi)", COLORS[1], "5 3"],
  ];
  for (const key of ["x_L", "x_R"] as const) {
    const v = meta?.[key];
    if (typeof v === "number" && Number.isFinite(v) && v > xlo && v < xhi) {
      fig.vline(v, sx, "#888");
    }
  }
  fig.legend(entries);
  return fig.render();
}

export function renderDecay(series: Table, rates: RateEntry[],
                            norms: string[]): string {
  const t = series.get("t")!;
  const onePlusT = t.map((v) => 1 + v);
  const fig = new Figure();
  const values: number[] = [];
  for (const norm of norms) {
    const col = series.get(norm);
    if (!col) throw new Error(`decay figure: no norm column '${norm}'`);
    for (const v of col) if (v > 0) values.push(v);
  }
  if (values.length === 0) {
    throw new Error("decay figure: no positive norm samples");
  }
  const [vlo, vhi] = extent(values);
  const tlo = Math.max(1.0, onePlusT[0]);
  const thi = onePlusT[onePlusT.length - 1];
  const sx = logScale(tlo, thi, fig.innerX[0], fig.innerX[1]);
  const sy = logScale(vlo * 0.8, vhi * 1.25, fig.innerY[0], fig.innerY[1]);
  fig.axes(sx, sy, logTicks(tlo, thi), logTicks(vlo * 0.8, vhi * 1.25),
    "1 + t", "perturbation norm", "time-decay (log-log)");
  const entries: Array<[string, string, string]> = [];
  norms.forEach((norm, i) => {
    const col = series.get(norm)!;
    const ts: number[] = [];
    const vs: number[] = [];
    for (let k = 0; k < col.length; k++) {
      if (col[k] > 0 && onePlusT[k] >= tlo) {
        ts.push(onePlusT[k]);
        vs.push(col[k]);
      }
    }
    fig.polyline(ts, vs, sx, sy, COLORS[i % COLORS.length], 1.8);
    entries.push([norm, COLORS[i % COLORS.length], ""]);
    const rate = rates.find((r) => r.norm === norm);
    if (rate) {
      // guide C (1+t)^(-r) anchored at the window-median ratio
      const guide = ts.map((tv) => rate.sup_ratio_median * Math.pow(tv, -rate.theoretical_r));
      fig.polyline(ts, guide, sx, sy, "#555", 1.2, "6 4");
      entries.push([
        `(1+t)^-${trimFloat(rate.theoretical_r)} guide`, "#555", "6 4",
      ]);
    }
  });
  fig.legend(entries);
  return fig.render();
}

export function renderShift(series: Table, gamma: number): string {
  const t = series.get("t")!;
  const X = series.get("X")!;
  const drift = t.map((v) => gamma * v);
  const fig = new Figure();
  const [tlo, thi] = extent(t);
  const [xlo, xhi] = extent(X.concat(drift));
  const sx = linearScale(tlo, thi, fig.innerX[0], fig.innerX[1]);
  const sy = linearScale(xlo - 0.02, xhi + 0.02, fig.innerY[0], fig.innerY[1]);
  fig.axes(sx, sy, linearTicks(tlo, thi), linearTicks(xlo, xhi),
    "t", "shift", "phase shift X(t) vs gamma t");
  fig.polyline(t, X, sx, sy, COLORS[0], 2);
  fig.polyline(t, drift, sx, sy, "#555", 1.2, "6 4");
  fig.legend([["X(t)", COLORS[0], ""], ["gamma t", "#555", "6 4"]]);
  return fig.render();
}

export function renderSnapshot(snap: { x: number[]; u: number[] },
                               prof?: ProfileData): string {
  const fig = new Figure();
  const [xlo, xhi] = extent(snap.x);
  const ys = prof ? snap.u.concat(prof.U) : snap.u;
  const [ylo, yhi] = extent(ys);
  const sx = linearScale(xlo, xhi, fig.innerX[0], fig.innerX[1]);
  const sy = linearScale(ylo - 0.05, yhi + 0.05, fig.innerY[0], fig.innerY[1]);
  fig.axes(sx, sy, linearTicks(xlo, xhi), linearTicks(ylo, yhi),
    "x", "u", "solution snapshot");
  const entries: Array<[string, string, string]> = [["u", COLORS[0], ""]];
  if (prof) {
    fig.polyline(prof.xi, prof.U, sx, sy, "#999", 1.2, "5 3");
    entries.push(["profile U", "#999", "5 3"]);
  }
  fig.polyline(snap.x, snap.u, sx, sy, COLORS[0], 1.8);
  fig.legend(entries);
  return fig.render();
}

function trimFloat(v: number): string {
  return String(Number(v.toPrecision(4)));
}

export function render(spec: FigureSpec): string {
  switch (spec.kind) {
    case "profile": {
      if (!spec.profileCsv) throw new Error("profile figure needs profileCsv");
      const prof = readProfileCsv(spec.profileCsv);
      const meta = spec.profileMeta ? readProfileMeta(spec.profileMeta) : undefined;
      return renderProfile(prof, meta);
    }
    case "decay": {
      if (!spec.timeseriesCsv) throw new Error("decay figure needs timeseriesCsv");
      const series = readTimeseriesCsv(spec.timeseriesCsv);
      const rates = spec.rateReport ? readRateReport(spec.rateReport) : [];
      return renderDecay(series, rates, spec.norms ?? ["l2", "linf"]);
    }
    case "shift": {
      if (!spec.timeseriesCsv) throw new Error("shift figure needs timeseriesCsv");
      if (!spec.profileMeta) throw new Error("shift figure needs profileMeta (gamma)");
      const series = readTimeseriesCsv(spec.timeseriesCsv);
      const meta = readProfileMeta(spec.profileMeta);
      return renderShift(series, meta.gamma);
    }
    case "snapshot": {
      if (!spec.snapshotCsv) throw new Error("snapshot figure needs snapshotCsv");
      const snap = readSnapshotCsv(spec.snapshotCsv);
      const prof = spec.profileCsv ? readProfileCsv(spec.profileCsv) : undefined;
      return renderSnapshot(snap, prof);
    }
    default:
      throw new Error(`unknown figure kind '${(spec as FigureSpec).kind}'`);
  }
}
