/** Minimal SVG chart scaffolding: log/linear scales, axes, series. */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const DEFAULT_MARGINS: Margins = { top: 42, right: 24, bottom: 46, left: 64 };

export type Scale = (v: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  return (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0);
}

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const exp = Math.floor(Math.log10(Math.abs(v)));
  if (exp < -2 || exp > 3) {
    const mant = v / 10 ** exp;
    return mant === 1 ? `1e${exp}` : `${mant.toPrecision(2)}e${exp}`;
  }
  return `${Number(v.toPrecision(3))}`;
}

export function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); 10 ** e <= hi * (1 + 1e-9); e++) {
    ticks.push(10 ** e);
  }
  return ticks;
}

export function linTicks(lo: number, hi: number, n = 6): number[] {
  const rough = (hi - lo) / n || 1;
  const mag = 10 ** Math.floor(Math.log10(rough));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => s >= rough) ?? rough;
  const out: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) out.push(v);
  return out;
}

export const PALETTE = ["#d62728", "#1f77b4", "#9467bd", "#2ca02c", "#ff7f0e", "#8c564b"];

export class SvgChart {
  parts: string[] = [];
  plotLeft: number;
  plotRight: number;
  plotTop: number;
  plotBottom: number;

  constructor(
    public width: number,
    public height: number,
    public margins: Margins = DEFAULT_MARGINS,
  ) {
    this.plotLeft = margins.left;
    this.plotRight = width - margins.right;
    this.plotTop = margins.top;
    this.plotBottom = height - margins.bottom;
  }

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  title(text: string): void {
    this.add(
      `<text x="${this.width / 2}" y="20" text-anchor="middle" font-size="15" font-weight="bold">${esc(text)}</text>`,
    );
  }

  frame(): void {
    this.add(
      `<rect x="${this.plotLeft}" y="${this.plotTop}" width="${this.plotRight - this.plotLeft}" ` +
        `height="${this.plotBottom - this.plotTop}" fill="none" stroke="#333" stroke-width="1"/>`,
    );
  }

  xAxis(scale: Scale, ticks: number[], label: string): void {
    for (const t of ticks) {
      const x = scale(t);
      if (x < this.plotLeft - 1 || x > this.plotRight + 1) continue;
      this.add(`<line x1="${x.toFixed(2)}" y1="${this.plotTop}" x2="${x.toFixed(2)}" y2="${this.plotBottom}" stroke="#ddd" stroke-width="0.6"/>`);
      this.add(
        `<text x="${x.toFixed(2)}" y="${this.plotBottom + 16}" text-anchor="middle" font-size="11">${esc(fmtTick(t))}</text>`,
      );
    }
    this.add(
      `<text x="${(this.plotLeft + this.plotRight) / 2}" y="${this.height - 8}" text-anchor="middle" font-size="12">${esc(label)}</text>`,
    );
  }

  yAxis(scale: Scale, ticks: number[], label: string): void {
    for (const t of ticks) {
      const y = scale(t);
      if (y < this.plotTop - 1 || y > this.plotBottom + 1) continue;
      this.add(`<line x1="${this.plotLeft}" y1="${y.toFixed(2)}" x2="${this.plotRight}" y2="${y.toFixed(2)}" stroke="#ddd" stroke-width="0.6"/>`);
      this.add(
        `<text x="${this.plotLeft - 6}" y="${(y + 4).toFixed(2)}" text-anchor="end" font-size="11">${esc(fmtTick(t))}</text>`,
      );
    }
    this.add(
      `<text transform="translate(14 ${(this.plotTop + this.plotBottom) / 2}) rotate(-90)" text-anchor="middle" font-size="12">${esc(label)}</text>`,
    );
  }

  polyline(points: Array<[number, number]>, color: string, width = 1.6, dash = "", cls = ""): void {
    if (points.length === 0) return;
    const pts = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    const clsAttr = cls ? ` class="${cls}"` : "";
    this.add(`<polyline${clsAttr} points="${pts}" fill="none" stroke="${color}" stroke-width="${width}"${dashAttr}/>`);
  }

  band(upper: Array<[number, number]>, lower: Array<[number, number]>, color: string, opacity = 0.18): void {
    if (upper.length === 0) return;
    const pts = [...upper, ...lower.slice().reverse()]
      .map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`)
      .join(" ");
    this.add(`<polygon points="${pts}" fill="${color}" opacity="${opacity}" stroke="none"/>`);
  }

  region(points: Array<[number, number]>, color: string, opacity: number, cls = ""): void {
    const pts = points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(" ");
    const clsAttr = cls ? ` class="${cls}"` : "";
    this.add(`<polygon${clsAttr} points="${pts}" fill="${color}" opacity="${opacity}" stroke="none"/>`);
  }

  legend(entries: Array<[string, string]>): void {
    let y = this.plotTop + 14;
    const x = this.plotLeft + 10;
    for (const [label, color] of entries) {
      this.add(`<line x1="${x}" y1="${y - 4}" x2="${x + 18}" y2="${y - 4}" stroke="${color}" stroke-width="2.5"/>`);
      this.add(`<text x="${x + 24}" y="${y}" font-size="11">${esc(label)}</text>`);
      y += 16;
    }
  }

  clipToPlot(y: number): number {
    return Math.max(this.plotTop, Math.min(this.plotBottom, y));
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" ` +
      `viewBox="0 0 ${this.width} ${this.height}" font-family="Helvetica, Arial, sans-serif">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}
