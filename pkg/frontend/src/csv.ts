/**
 * Parsers for the simulator's documented CSV contracts.
 *
 *   curves.csv      rule,kappa,p_enc,stderr
 *   diagnostics.csv rule,score_bin_lo,score_bin_hi,count,eer,stderr
 *   breakeven.csv   rule,p_error,p_erasure,p_init,kappa_star,overhead
 *
 * Malformed input raises CsvError with row/column diagnostics.
 */

export class CsvError extends Error {
  constructor(
    public file: string,
    public row: number,
    public column: string,
    detail: string,
  ) {
    super(`${file}:${row}: column '${column}': ${detail}`);
    this.name = "CsvError";
  }
}

export interface CurveRow {
  rule: string;
  kappa: number;
  p_enc: number;
  stderr: number;
}

export interface DiagnosticsRow {
  rule: string;
  score_bin_lo: number;
  score_bin_hi: number;
  count: number;
  eer: number;
  stderr: number;
}

export interface BreakevenRow {
  rule: string;
  p_error: number;
  p_erasure: number;
  p_init: number;
  kappa_star: number | null;
  overhead: number | null;
}

function splitRows(file: string, text: string, header: string): string[][] {
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvError(file, 0, "-", "file is empty");
  }
  if (lines[0].trim() !== header) {
    throw new CsvError(file, 1, "-", `expected header '${header}', got '${lines[0].trim()}'`);
  }
  return lines.slice(1).map((l) => l.split(","));
}

function num(file: string, row: number, column: string, raw: string): number {
  const v = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(v)) {
    throw new CsvError(file, row, column, `not a finite number: '${raw}'`);
  }
  return v;
}

function optional(file: string, row: number, column: string, raw: string): number | null {
  if (raw === undefined || raw.trim() === "") return null;
  return num(file, row, column, raw);
}

export function parseCurves(file: string, text: string): CurveRow[] {
  return splitRows(file, text, "rule,kappa,p_enc,stderr").map((cells, i) => {
    const row = i + 2;
    if (cells.length !== 4) throw new CsvError(file, row, "-", `expected 4 columns, got ${cells.length}`);
    return {
      rule: cells[0],
      kappa: num(file, row, "kappa", cells[1]),
      p_enc: num(file, row, "p_enc", cells[2]),
      stderr: num(file, row, "stderr", cells[3]),
    };
  });
}

export function parseDiagnostics(file: string, text: string): DiagnosticsRow[] {
  return splitRows(file, text, "rule,score_bin_lo,score_bin_hi,count,eer,stderr").map(
    (cells, i) => {
      const row = i + 2;
      if (cells.length !== 6) throw new CsvError(file, row, "-", `expected 6 columns, got ${cells.length}`);
      return {
        rule: cells[0],
        score_bin_lo: num(file, row, "score_bin_lo", cells[1]),
        score_bin_hi: num(file, row, "score_bin_hi", cells[2]),
        count: num(file, row, "count", cells[3]),
        eer: num(file, row, "eer", cells[4]),
        stderr: num(file, row, "stderr", cells[5]),
      };
    },
  );
}

export function parseBreakeven(file: string, text: string): BreakevenRow[] {
  return splitRows(file, text, "rule,p_error,p_erasure,p_init,kappa_star,overhead").map(
    (cells, i) => {
      const row = i + 2;
      if (cells.length !== 6) throw new CsvError(file, row, "-", `expected 6 columns, got ${cells.length}`);
      return {
        rule: cells[0],
        p_error: num(file, row, "p_error", cells[1]),
        p_erasure: num(file, row, "p_erasure", cells[2]),
        p_init: num(file, row, "p_init", cells[3]),
        kappa_star: optional(file, row, "kappa_star", cells[4]),
        overhead: optional(file, row, "overhead", cells[5]),
      };
    },
  );
}

export function groupBy<T extends { rule: string }>(rows: T[]): Map<string, T[]> {
  const out = new Map<string, T[]>();
  for (const r of rows) {
    const list = out.get(r.rule) ?? [];
    list.push(r);
    out.set(r.rule, list);
  }
  return out;
}
