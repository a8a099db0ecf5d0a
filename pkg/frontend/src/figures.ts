/**
 * The four figure kinds rendered from the simulator's CSV outputs.
 *
 * eer_curves      encoding error rate vs keep fraction, per rule, with
 *                 standard-error bands, the breakeven guide p_enc = p_init
 *                 and the shaded sampling-floor region p_enc <= 1/(n kappa)
 * score_hist      score distribution per rule (one panel per rule)
 * score_corr      per-score-bin EER with error bars (one panel per rule)
 * breakeven_sweep breakeven overhead vs error rate, per rule
 */

import {
  BreakevenRow,
  CurveRow,
  DiagnosticsRow,
  groupBy,
} from "./csv.js";
import {
  PALETTE,
  Scale,
  SvgChart,
  esc,
  fmtTick,
  linTicks,
  linearScale,
  logScale,
  logTicks,
} from "./svg.js";

export interface EerGuides {
  p_init: number;
  n_trials: number;
}

const RULE_COLOR = new Map<string, string>([
  ["annular", "#d62728"],
  ["gap", "#1f77b4"],
  ["nested", "#9467bd"],
  ["radial_gap", "#2ca02c"],
  ["surviving", "#8c564b"],
]);

function colorFor(rule: string, index: number): string {
  return RULE_COLOR.get(rule) ?? PALETTE[index % PALETTE.length];
}

export function renderEerCurves(rows: CurveRow[], guides: EerGuides): string {
  if (rows.length === 0) throw new Error("eer_curves: no data rows");
  const byRule = groupBy(rows);
  const chart = new SvgChart(760, 520);
  chart.title("Encoding error rate vs keep fraction");

  const kappas = rows.map((r) => r.kappa);
  const kLo = Math.min(...kappas);
  const kHi = 1.0;
  const pVals = rows.map((r) => r.p_enc).filter((p) => p > 0);
  const floorAtDeepest = 1 / (guides.n_trials * kLo);
  let pLo = Math.min(...pVals, guides.p_init, 1 / guides.n_trials) / 2;
  const pHi = Math.max(...pVals, guides.p_init, floorAtDeepest) * 1.6;
  if (!(pLo > 0)) pLo = 1e-6;

  const sx: Scale = logScale(kLo, kHi, chart.plotLeft, chart.plotRight);
  const sy: Scale = logScale(pLo, pHi, chart.plotBottom, chart.plotTop);

  // sampling-floor region: p_enc <= 1/(n kappa)
  const floorPts: Array<[number, number]> = [];
  for (let i = 0; i <= 64; i++) {
    const k = kLo * (kHi / kLo) ** (i / 64);
    floorPts.push([sx(k), chart.clipToPlot(sy(Math.min(1 / (guides.n_trials * k), pHi)))]);
  }
  const regionPts: Array<[number, number]> = [
    ...floorPts,
    [chart.plotRight, chart.plotBottom],
    [chart.plotLeft, chart.plotBottom],
  ];
  chart.region(regionPts, "#999999", 0.25, "sampling-floor");
  chart.add(
    `<text x="${chart.plotRight - 8}" y="${chart.plotBottom - 8}" text-anchor="end" font-size="10" fill="#555">sampling floor 1/(n·κ)</text>`,
  );

  // breakeven guide p_enc = p_init
  const yInit = sy(guides.p_init);
  chart.add(
    `<line class="breakeven-guide" x1="${chart.plotLeft}" y1="${yInit.toFixed(2)}" x2="${chart.plotRight}" y2="${yInit.toFixed(2)}" stroke="#e91e8c" stroke-width="1.6" stroke-dasharray="7,4"/>`,
  );
  chart.add(
    `<text x="${chart.plotLeft + 6}" y="${(yInit - 5).toFixed(2)}" font-size="10" fill="#e91e8c">breakeven p_enc = p_init = ${fmtTick(guides.p_init)}</text>`,
  );

  const legend: Array<[string, string]> = [];
  let idx = 0;
  for (const [rule, series] of byRule) {
    const pts = series.slice().sort((a, b) => b.kappa - a.kappa);
    const color = colorFor(rule, idx++);
    const upper: Array<[number, number]> = [];
    const lower: Array<[number, number]> = [];
    const line: Array<[number, number]> = [];
    for (const r of pts) {
      if (r.p_enc <= 0) continue;
      const x = sx(r.kappa);
      line.push([x, sy(r.p_enc)]);
      upper.push([x, chart.clipToPlot(sy(Math.min(r.p_enc + r.stderr, pHi)))]);
      lower.push([x, chart.clipToPlot(sy(Math.max(r.p_enc - r.stderr, pLo)))]);
    }
    chart.band(upper, lower, color);
    chart.polyline(line, color, 1.8, "", `curve-${rule}`);
    legend.push([rule, color]);
  }

  chart.frame();
  chart.xAxis(sx, logTicks(kLo, kHi), "keep fraction κ");
  chart.yAxis(sy, logTicks(pLo, pHi), "encoding error rate");
  chart.legend(legend);
  return chart.render();
}

export function renderScoreHist(rows: DiagnosticsRow[]): string {
  if (rows.length === 0) throw new Error("score_hist: no data rows");
  const byRule = [...groupBy(rows).entries()];
  const panelH = 230;
  const chart = new SvgChart(760, panelH * byRule.length + 30, {
    top: 30,
    right: 24,
    bottom: 0,
    left: 64,
  });
  chart.title("Score distributions");
  byRule.forEach(([rule, series], pi) => {
    const top = 40 + pi * panelH;
    const bottom = top + panelH - 56;
    const lo = Math.min(...series.map((r) => r.score_bin_lo));
    const hi = Math.max(...series.map((r) => r.score_bin_hi));
    const pad = (hi - lo || 1) * 0.06;
    const sx = linearScale(lo - pad, hi + pad, chart.plotLeft, chart.plotRight);
    const maxCount = Math.max(...series.map((r) => r.count));
    const sy = linearScale(0, maxCount * 1.08, bottom, top);
    const color = colorFor(rule, pi);
    for (const r of series) {
      const discrete = r.score_bin_hi <= r.score_bin_lo;
      const w = discrete ? 10 : Math.max(sx(r.score_bin_hi) - sx(r.score_bin_lo) - 1, 2);
      const x = discrete ? sx(r.score_bin_lo) - w / 2 : sx(r.score_bin_lo);
      const y = sy(r.count);
      chart.add(
        `<rect class="bar-${rule}" x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${w.toFixed(2)}" height="${(bottom - y).toFixed(2)}" fill="${color}" opacity="0.85"/>`,
      );
    }
    chart.add(
      `<line x1="${chart.plotLeft}" y1="${bottom}" x2="${chart.plotRight}" y2="${bottom}" stroke="#333"/>`,
    );
    for (const t of linTicks(lo - pad, hi + pad, 8)) {
      const x = sx(t);
      if (x < chart.plotLeft || x > chart.plotRight) continue;
      chart.add(`<text x="${x.toFixed(2)}" y="${bottom + 14}" text-anchor="middle" font-size="10">${esc(fmtTick(t))}</text>`);
    }
    chart.add(
      `<text x="${chart.plotLeft}" y="${top - 6}" font-size="12" font-weight="bold" fill="${color}">${esc(rule)} (n=${series.reduce((a, r) => a + r.count, 0)})</text>`,
    );
    chart.add(
      `<text transform="translate(14 ${(top + bottom) / 2}) rotate(-90)" text-anchor="middle" font-size="11">count</text>`,
    );
  });
  chart.add(
    `<text x="${(chart.plotLeft + chart.plotRight) / 2}" y="${chart.height - 6}" text-anchor="middle" font-size="12">score</text>`,
  );
  return chart.render();
}

export function renderScoreCorr(rows: DiagnosticsRow[]): string {
  if (rows.length === 0) throw new Error("score_corr: no data rows");
  const byRule = [...groupBy(rows).entries()];
  const panelH = 250;
  const chart = new SvgChart(760, panelH * byRule.length + 30, {
    top: 30,
    right: 24,
    bottom: 0,
    left: 64,
  });
  chart.title("EER vs score");
  byRule.forEach(([rule, series], pi) => {
    const top = 40 + pi * panelH;
    const bottom = top + panelH - 56;
    const lo = Math.min(...series.map((r) => r.score_bin_lo));
    const hi = Math.max(...series.map((r) => r.score_bin_hi));
    const pad = (hi - lo || 1) * 0.06;
    const sx = linearScale(lo - pad, hi + pad, chart.plotLeft, chart.plotRight);
    const eers = series.map((r) => r.eer).filter((v) => v > 0);
    const eLo = eers.length ? Math.min(...eers) / 2 : 1e-4;
    const sy = logScale(eLo, 1.0, bottom, top);
    const color = colorFor(rule, pi);
    // orange guide at EER = 1/2: no correlation between sectors
    const yHalf = sy(0.5);
    chart.add(
      `<line class="half-guide" x1="${chart.plotLeft}" y1="${yHalf.toFixed(2)}" x2="${chart.plotRight}" y2="${yHalf.toFixed(2)}" stroke="#ff7f0e" stroke-width="1.2" stroke-dasharray="5,4"/>`,
    );
    for (const r of series) {
      if (r.count === 0) continue;
      const x = sx((r.score_bin_lo + r.score_bin_hi) / 2);
      const y = r.eer > 0 ? sy(r.eer) : bottom;
      const yl = chart.clipToPlot(r.eer - r.stderr > 0 ? sy(r.eer - r.stderr) : bottom);
      const yu = chart.clipToPlot(r.eer + r.stderr > 0 ? sy(Math.min(r.eer + r.stderr, 1.0)) : bottom);
      chart.add(`<line x1="${x.toFixed(2)}" y1="${yl.toFixed(2)}" x2="${x.toFixed(2)}" y2="${yu.toFixed(2)}" stroke="${color}" stroke-width="1"/>`);
      chart.add(`<circle class="pt-${rule}" cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="3.2" fill="${color}"/>`);
    }
    chart.add(`<rect x="${chart.plotLeft}" y="${top}" width="${chart.plotRight - chart.plotLeft}" height="${bottom - top}" fill="none" stroke="#333"/>`);
    for (const t of linTicks(lo - pad, hi + pad, 8)) {
      const x = sx(t);
      if (x < chart.plotLeft || x > chart.plotRight) continue;
      chart.add(`<text x="${x.toFixed(2)}" y="${bottom + 14}" text-anchor="middle" font-size="10">${esc(fmtTick(t))}</text>`);
    }
    for (const t of logTicks(eLo, 1.0)) {
      const y = sy(t);
      if (y < top || y > bottom) continue;
      chart.add(`<text x="${chart.plotLeft - 6}" y="${(y + 3).toFixed(2)}" text-anchor="end" font-size="10">${esc(fmtTick(t))}</text>`);
    }
    chart.add(
      `<text x="${chart.plotLeft}" y="${top - 6}" font-size="12" font-weight="bold" fill="${color}">${esc(rule)}</text>`,
    );
    chart.add(
      `<text transform="translate(14 ${(top + bottom) / 2}) rotate(-90)" text-anchor="middle" font-size="11">EER</text>`,
    );
  });
  chart.add(
    `<text x="${(chart.plotLeft + chart.plotRight) / 2}" y="${chart.height - 6}" text-anchor="middle" font-size="12">score</text>`,
  );
  return chart.render();
}

export function renderBreakevenSweep(rows: BreakevenRow[]): string {
  if (rows.length === 0) throw new Error("breakeven_sweep: no data rows");
  const chart = new SvgChart(760, 520);
  chart.title("Breakeven overhead vs error rate");
  const xs = rows.map((r) => (r.p_erasure > 0 ? r.p_erasure : r.p_error));
  const xLo = Math.min(...xs) / 1.3;
  const xHi = Math.max(...xs) * 1.3;
  const ovs = rows.map((r) => r.overhead).filter((v): v is number => v !== null && v > 0);
  const yLo = Math.max(Math.min(...(ovs.length ? ovs : [1])) / 1.5, 0.5);
  const yHi = Math.max(...(ovs.length ? ovs : [10])) * 1.5;
  const sx = logScale(xLo, xHi, chart.plotLeft, chart.plotRight);
  const sy = logScale(yLo, yHi, chart.plotBottom, chart.plotTop);

  const legend: Array<[string, string]> = [];
  let idx = 0;
  for (const [rule, series] of groupBy(rows)) {
    const color = colorFor(rule, idx++);
    const pts = series
      .filter((r) => r.overhead !== null && r.overhead > 0)
      .sort((a, b) => (a.p_error + a.p_erasure) - (b.p_error + b.p_erasure))
      .map((r): [number, number] => [sx(r.p_erasure > 0 ? r.p_erasure : r.p_error), sy(r.overhead as number)]);
    chart.polyline(pts, color, 1.8, "", `sweep-${rule}`);
    for (const [x, y] of pts) {
      chart.add(`<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="3.4" fill="${color}"/>`);
    }
    const missing = series.length - pts.length;
    legend.push([missing > 0 ? `${rule} (${missing} without breakeven)` : rule, color]);
  }
  chart.frame();
  chart.xAxis(sx, logTicks(xLo, xHi), "error rate");
  chart.yAxis(sy, logTicks(yLo, yHi), "breakeven overhead O* = 1/κ*");
  chart.legend(legend);
  return chart.render();
}
