#!/usr/bin/env node
/**
 * plotkit <kind> [flags] --out figure.svg
 *
 * kinds: profile | decay | shift | snapshot
 * flags: --profile profile.csv --meta profile_meta.json
 *        --timeseries timeseries.csv --rates rate_report.json
 *        --snapshot snapshot.csv --norms l2,linf
 *
 * The figure is written only after rendering succeeds; inputs are opened
 * read-only.
 */

import { writeFileSync } from "fs";
import { FigureKind, FigureSpec, render } from "./figures.js";

function parseArgs(argv: string[]): FigureSpec {
  const kind = argv[0] as FigureKind;
  if (!["profile", "decay", "shift", "snapshot"].includes(kind)) {
    throw new Error(`usage: plotkit <profile|decay|shift|snapshot> [flags] --out file.svg`);
  }
  const flags = new Map<string, string>();
  for (let i = 1; i < argv.length; i += 2) {
    if (!argv[i].startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`malformed flag '${argv[i]}'`);
    }
    flags.set(argv[i].slice(2), argv[i + 1]);
  }
  const out = flags.get("out");
  if (!out) throw new Error("--out is required");
  return {
    kind,
    profileCsv: flags.get("profile"),
    profileMeta: flags.get("meta"),
    timeseriesCsv: flags.get("timeseries"),
    rateReport: flags.get("rates"),
    snapshotCsv: flags.get("snapshot"),
    norms: flags.get("norms")?.split(","),
    output: out,
  };
}

export function main(argv: string[]): number {
  try {
    const spec = parseArgs(argv);
    const svg = render(spec);
    writeFileSync(spec.output, svg, "utf8");
    console.log(`wrote ${spec.output}`);
    return 0;
  } catch (err) {
    console.error(`plotkit: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

const isMain = process.argv[1]?.endsWith("cli.js");
if (isMain) {
  process.exit(main(process.argv.slice(2)));
}
