/**
 * Frequency bar charts with 99% error bars and optional theory ticks,
 * rendered straight from a plotdata CSV.
 *
 * The renderer is a pure function of the CSV bytes: it never
 * recomputes statistics, and identical input produces an identical
 * SVG string.
 */

export interface BarRow {
  label: string;
  freq: number;
  ciLo: number;
  ciHi: number;
  theory: number | null;
  theoryStatus: string | null;
}

export interface PlotOptions {
  title?: string;
  showTheory?: boolean; // default true
}

export interface BarGeometry {
  label: string;
  value: number;
  x: number; // left edge of the bar, px
  width: number;
  y: number; // top of the bar, px
  height: number; // px; equals PLOT_H * value / yMax
  errLoY: number;
  errHiY: number;
  theoryY: number | null;
}

export interface Layout {
  yMax: number;
  bars: BarGeometry[];
}

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 70, right: 20, top: 40, bottom: 70 } as const;
export const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
export const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;

export const REQUIRED_COLUMNS = [
  "group_label",
  "empirical_freq",
  "ci_lo",
  "ci_hi",
  "theory_value",
  "theory_status",
] as const;

export class CsvFormatError extends Error {}

/** Parse a plotdata CSV; throws CsvFormatError naming any missing column. */
export function parseCsv(text: string): BarRow[] {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new CsvFormatError("empty file");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const index = new Map(header.map((h, i) => [h, i]));
  for (const col of REQUIRED_COLUMNS) {
    if (!index.has(col)) {
      throw new CsvFormatError(`missing column: ${col}`);
    }
  }
  const rows: BarRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    const get = (col: string) => (parts[index.get(col)!] ?? "").trim();
    const num = (col: string): number => {
      const v = Number(get(col));
      if (!Number.isFinite(v)) {
        throw new CsvFormatError(`line ${i + 1}: bad number in ${col}`);
      }
      return v;
    };
    const theoryRaw = get("theory_value");
    rows.push({
      label: get("group_label"),
      freq: num("empirical_freq"),
      ciLo: num("ci_lo"),
      ciHi: num("ci_hi"),
      theory: theoryRaw === "" ? null : Number(theoryRaw),
      theoryStatus: get("theory_status") || null,
    });
  }
  return rows;
}

/** Smallest 0.05-grid value covering every frequency, interval end and
 * theory mark; 0.05 floor keeps all-zero inputs renderable. */
export function yScale(rows: BarRow[], showTheory: boolean): number {
  let top = 0;
  for (const r of rows) {
    top = Math.max(top, r.freq, r.ciHi);
    if (showTheory && r.theory !== null) top = Math.max(top, r.theory);
  }
  const steps = Math.max(1, Math.ceil(top / 0.05 - 1e-12));
  return Math.min(1.0, steps * 0.05);
}

export function computeLayout(rows: BarRow[], options: PlotOptions = {}): Layout {
  const showTheory = options.showTheory !== false;
  const yMax = yScale(rows, showTheory);
  const slot = rows.length > 0 ? PLOT_W / rows.length : PLOT_W;
  const toY = (v: number) => MARGIN.top + PLOT_H - (PLOT_H * v) / yMax;
  const bars = rows.map((r, i) => {
    const width = slot * 0.6;
    const x = MARGIN.left + slot * i + slot * 0.2;
    return {
      label: r.label,
      value: r.freq,
      x,
      width,
      y: toY(r.freq),
      height: (PLOT_H * r.freq) / yMax,
      errLoY: toY(r.ciLo),
      errHiY: toY(r.ciHi),
      theoryY: showTheory && r.theory !== null ? toY(r.theory) : null,
    };
  });
  return { yMax, bars };
}

const px = (v: number) => v.toFixed(2);

export function renderSvg(rows: BarRow[], options: PlotOptions = {}): string {
  const layout = computeLayout(rows, options);
  const slot = rows.length > 0 ? PLOT_W / rows.length : PLOT_W;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  if (options.title) {
    parts.push(
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">` +
        `${escapeXml(options.title)}</text>`,
    );
  }
  // axes and y grid at fifths of the scale
  const axisY = MARGIN.top + PLOT_H;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${axisY}" stroke="black"/>`,
  );
  parts.push(
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${MARGIN.left + PLOT_W}" ` +
      `y2="${axisY}" stroke="black"/>`,
  );
  for (let i = 0; i <= 5; i++) {
    const v = (layout.yMax * i) / 5;
    const y = MARGIN.top + PLOT_H - (PLOT_H * i) / 5;
    parts.push(
      `<line x1="${MARGIN.left - 4}" y1="${px(y)}" x2="${MARGIN.left}" ` +
        `y2="${px(y)}" stroke="black"/>`,
    );
    if (i > 0) {
      parts.push(
        `<line x1="${MARGIN.left}" y1="${px(y)}" x2="${MARGIN.left + PLOT_W}" ` +
          `y2="${px(y)}" stroke="#dddddd"/>`,
      );
    }
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${px(y + 4)}" text-anchor="end" ` +
        `font-size="11">${v.toFixed(2)}</text>`,
    );
  }
  layout.bars.forEach((bar, i) => {
    parts.push(
      `<rect x="${px(bar.x)}" y="${px(bar.y)}" width="${px(bar.width)}" ` +
        `height="${px(bar.height)}" fill="#4878a8"/>`,
    );
    const cx = bar.x + bar.width / 2;
    parts.push(
      `<line x1="${px(cx)}" y1="${px(bar.errHiY)}" x2="${px(cx)}" ` +
        `y2="${px(bar.errLoY)}" stroke="black" stroke-width="1.5"/>`,
    );
    for (const ey of [bar.errLoY, bar.errHiY]) {
      parts.push(
        `<line x1="${px(cx - 6)}" y1="${px(ey)}" x2="${px(cx + 6)}" ` +
          `y2="${px(ey)}" stroke="black" stroke-width="1.5"/>`,
      );
    }
    if (bar.theoryY !== null) {
      const x0 = MARGIN.left + slot * i + slot * 0.08;
      const x1 = MARGIN.left + slot * (i + 1) - slot * 0.08;
      parts.push(
        `<line x1="${px(x0)}" y1="${px(bar.theoryY)}" x2="${px(x1)}" ` +
          `y2="${px(bar.theoryY)}" stroke="#c03020" stroke-width="2" ` +
          `stroke-dasharray="6,3"/>`,
      );
    }
    parts.push(
      `<text x="${px(cx)}" y="${axisY + 18}" text-anchor="middle" ` +
        `font-size="12">${escapeXml(bar.label)}</text>`,
    );
  });
  parts.push(
    `<text x="${MARGIN.left / 4}" y="${MARGIN.top + PLOT_H / 2}" font-size="12" ` +
      `transform="rotate(-90 ${MARGIN.left / 4} ${MARGIN.top + PLOT_H / 2})" ` +
      `text-anchor="middle">frequency</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
