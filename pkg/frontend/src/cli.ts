#!/usr/bin/env npx tsx
/**
 * Render simulator CSV outputs as SVG figures.
 *
 * Usage:
 *   tsx src/cli.ts --kind eer_curves --in curves.csv --summary summary.json --out fig.svg
 *   tsx src/cli.ts --kind score_hist --in diagnostics.csv --out hist.svg
 *   tsx src/cli.ts --kind score_corr --in diagnostics.csv --out corr.svg
 *   tsx src/cli.ts --kind breakeven_sweep --in be1.csv,be2.csv --out sweep.svg
 *
 * eer_curves takes the breakeven level and trial count from the run's
 * summary.json (or explicit --p-init/--n-trials).  Exits nonzero with a
 * diagnostic on malformed input.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { CsvError, parseBreakeven, parseCurves, parseDiagnostics } from "./csv.js";
import {
  renderBreakevenSweep,
  renderEerCurves,
  renderScoreCorr,
  renderScoreHist,
} from "./figures.js";

const KINDS = ["eer_curves", "score_hist", "score_corr", "breakeven_sweep"] as const;
type Kind = (typeof KINDS)[number];

interface Args {
  kind: Kind;
  inputs: string[];
  out: string;
  summary?: string;
  pInit?: number;
  nTrials?: number;
}

function parseArgs(argv: string[]): Args {
  const opts = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`bad argument ${key}; expected --flag value pairs`);
    }
    opts.set(key.slice(2), argv[i + 1]);
  }
  const kind = opts.get("kind") as Kind | undefined;
  if (!kind || !KINDS.includes(kind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  const input = opts.get("in");
  const out = opts.get("out");
  if (!input || !out) throw new Error("--in and --out are required");
  return {
    kind,
    inputs: input.split(",").map((s) => s.trim()),
    out,
    summary: opts.get("summary"),
    pInit: opts.has("p-init") ? Number(opts.get("p-init")) : undefined,
    nTrials: opts.has("n-trials") ? Number(opts.get("n-trials")) : undefined,
  };
}

export function render(args: Args): string {
  const texts = args.inputs.map((f) => ({ file: f, text: readFileSync(f, "utf-8") }));
  switch (args.kind) {
    case "eer_curves": {
      const rows = texts.flatMap(({ file, text }) => parseCurves(file, text));
      let pInit = args.pInit;
      let nTrials = args.nTrials;
      if (args.summary) {
        const doc = JSON.parse(readFileSync(args.summary, "utf-8"));
        pInit = pInit ?? doc.p_init;
        nTrials = nTrials ?? doc.n_trials;
      }
      if (pInit === undefined || nTrials === undefined) {
        throw new Error("eer_curves needs --summary (or --p-init and --n-trials)");
      }
      return renderEerCurves(rows, { p_init: pInit, n_trials: nTrials });
    }
    case "score_hist":
      return renderScoreHist(texts.flatMap(({ file, text }) => parseDiagnostics(file, text)));
    case "score_corr":
      return renderScoreCorr(texts.flatMap(({ file, text }) => parseDiagnostics(file, text)));
    case "breakeven_sweep":
      return renderBreakevenSweep(texts.flatMap(({ file, text }) => parseBreakeven(file, text)));
  }
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    console.error(JSON.stringify({ error: (e as Error).message }));
    return 2;
  }
  try {
    const svg = render(args);
    writeFileSync(args.out, svg);
    console.log(JSON.stringify({ written: args.out }));
    return 0;
  } catch (e) {
    if (e instanceof CsvError) {
      console.error(
        JSON.stringify({ error: e.message, file: e.file, row: e.row, column: e.column }),
      );
    } else {
      console.error(JSON.stringify({ error: (e as Error).message }));
    }
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
