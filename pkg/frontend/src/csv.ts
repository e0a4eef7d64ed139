/**
 * Readers for the shocklab artifact schemas.
 *
 * All inputs are plain numeric CSV with a single header row and
 * round-trip-decimal values; readers validate the expected columns and
 * name the offending column on mismatch.
 */

import { readFileSync } from "fs";

export type Table = Map<string, number[]>;

export function parseNumericCsv(path: string, required: string[]): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: empty file`);
  }
  const header = lines[0].split(",").map((h) => h.trim());
  for (const col of required) {
    if (!header.includes(col)) {
      throw new Error(`${path}: missing required column '${col}'`);
    }
  }
  const cols: Table = new Map(header.map((h) => [h, []]));
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new Error(
        `${path}: row ${i} has ${parts.length} fields, expected ${header.length}`,
      );
    }
    for (let j = 0; j < header.length; j++) {
      const v = Number(parts[j]);
      if (Number.isNaN(v) && parts[j].trim() !== "nan") {
        throw new Error(
          `${path}: column '${header[j]}' row ${i}: not a number: '${parts[j]}'`,
        );
      }
      cols.get(header[j])!.push(v);
    }
  }
  return cols;
}

export interface ProfileData {
  xi: number[];
  U: number[];
  Uprime: number[];
}

export function readProfileCsv(path: string): ProfileData {
  const t = parseNumericCsv(path, ["xi", "U", "Uprime"]);
  const xi = t.get("xi")!;
  if (xi.length === 0) throw new Error(`${path}: no profile rows`);
  return { xi, U: t.get("U")!, Uprime: t.get("Uprime")! };
}

export const TIMESERIES_COLUMNS = [
  "t", "X", "Xdot", "l1", "l2", "linf", "dissipation", "mass_residual",
];

export function readTimeseriesCsv(path: string): Table {
  const t = parseNumericCsv(path, TIMESERIES_COLUMNS);
  if (t.get("t")!.length === 0) {
    throw new Error(`${path}: empty TimeSeries`);
  }
  return t;
}

export interface SnapshotData {
  x: number[];
  u: number[];
}

export function readSnapshotCsv(path: string): SnapshotData {
  const t = parseNumericCsv(path, ["x", "u"]);
  if (t.get("x")!.length === 0) throw new Error(`${path}: empty snapshot`);
  return { x: t.get("x")!, u: t.get("u")! };
}

export interface ProfileMeta {
  u_minus: number;
  u_plus: number;
  p: number;
  gamma: number;
  x_L: number | string;
  x_R: number | string;
}

export function readProfileMeta(path: string): ProfileMeta {
  const meta = JSON.parse(readFileSync(path, "utf8"));
  for (const key of ["u_minus", "u_plus", "p", "gamma"]) {
    if (typeof meta[key] !== "number") {
      throw new Error(`${path}: missing numeric field '${key}'`);
    }
  }
  return meta as ProfileMeta;
}

export interface RateEntry {
  norm: string;
  theoretical_r: number;
  sup_ratio_median: number;
  slope: number;
  C: number;
  pass: boolean;
}

export function readRateReport(path: string): RateEntry[] {
  const report = JSON.parse(readFileSync(path, "utf8"));
  if (!Array.isArray(report)) {
    throw new Error(`${path}: rate report must be a JSON array`);
  }
  for (const entry of report) {
    if (typeof entry.norm !== "string" ||
        typeof entry.theoretical_r !== "number") {
      throw new Error(`${path}: rate entry missing 'norm'/'theoretical_r'`);
    }
  }
  return report as RateEntry[];
}
