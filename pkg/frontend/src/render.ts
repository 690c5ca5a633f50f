/**
 * Minimal SVG line-plot renderer: log-x panels arranged on a grid, with
 * axes, error bars, and a per-panel legend. Pure string generation, no
 * DOM; every panel is wrapped in <g class="panel"> for testability.
 */

export interface Series {
  label: string;
  color: string;
  /** SVG dash pattern, empty string for solid. */
  dash: string;
  x: number[];
  y: (number | null)[];
  yerr?: (number | null)[];
}

export interface Panel {
  title: string;
  series: Series[];
}

export interface FigureOptions {
  columns?: number;
  panelWidth?: number;
  panelHeight?: number;
  xLabel?: string;
  yLabel?: string;
}

const MARGIN = { top: 34, right: 16, bottom: 46, left: 58 };

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmt(v: number): string {
  return Number(v.toFixed(3)).toString();
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks.length >= 2 ? ticks : [lo, hi];
}

function linearTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= count)!;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

interface Extent {
  xLo: number;
  xHi: number;
  yLo: number;
  yHi: number;
}

function panelExtent(panel: Panel): Extent {
  let xLo = Infinity, xHi = -Infinity, yLo = Infinity, yHi = -Infinity;
  for (const s of panel.series) {
    s.x.forEach((x, i) => {
      const y = s.y[i];
      if (y === null || !Number.isFinite(x)) return;
      const err = s.yerr?.[i] ?? 0;
      xLo = Math.min(xLo, x);
      xHi = Math.max(xHi, x);
      yLo = Math.min(yLo, y - (err ?? 0));
      yHi = Math.max(yHi, y + (err ?? 0));
    });
  }
  if (!Number.isFinite(xLo)) {
    xLo = 0.1; xHi = 100; yLo = 0; yHi = 1;
  }
  const pad = (yHi - yLo || 1) * 0.08;
  return { xLo, xHi, yLo: yLo - pad, yHi: yHi + pad };
}

function renderPanel(panel: Panel, ox: number, oy: number,
                     width: number, height: number,
                     xLabel: string, yLabel: string): string {
  const ext = panelExtent(panel);
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  const px = (x: number) =>
    MARGIN.left + plotW * (Math.log10(x) - Math.log10(ext.xLo))
    / (Math.log10(ext.xHi) - Math.log10(ext.xLo));
  const py = (y: number) =>
    MARGIN.top + plotH * (1 - (y - ext.yLo) / (ext.yHi - ext.yLo));

  const parts: string[] = [];
  parts.push(`<g class="panel" transform="translate(${ox},${oy})">`);
  parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" ` +
    `height="${plotH}" fill="none" stroke="#444" stroke-width="1"/>`);
  parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${MARGIN.top - 12}" ` +
    `text-anchor="middle" font-size="14" font-weight="bold">${esc(panel.title)}</text>`);

  for (const t of logTicks(ext.xLo, ext.xHi)) {
    const x = px(t);
    if (x < MARGIN.left - 1 || x > MARGIN.left + plotW + 1) continue;
    parts.push(`<line x1="${fmt(x)}" y1="${MARGIN.top + plotH}" x2="${fmt(x)}" ` +
      `y2="${MARGIN.top + plotH + 5}" stroke="#444"/>`);
    parts.push(`<text x="${fmt(x)}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" ` +
      `font-size="11">${t}</text>`);
  }
  parts.push(`<text x="${MARGIN.left + plotW / 2}" y="${height - 8}" ` +
    `text-anchor="middle" font-size="12">${esc(xLabel)}</text>`);

  for (const t of linearTicks(ext.yLo, ext.yHi)) {
    const y = py(t);
    parts.push(`<line x1="${MARGIN.left - 5}" y1="${fmt(y)}" x2="${MARGIN.left}" ` +
      `y2="${fmt(y)}" stroke="#444"/>`);
    parts.push(`<text x="${MARGIN.left - 8}" y="${fmt(y + 4)}" text-anchor="end" ` +
      `font-size="11">${fmt(t)}</text>`);
  }
  parts.push(`<text transform="translate(14,${MARGIN.top + plotH / 2}) rotate(-90)" ` +
    `text-anchor="middle" font-size="12">${esc(yLabel)}</text>`);

  for (const s of panel.series) {
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    const points: string[] = [];
    s.x.forEach((x, i) => {
      const y = s.y[i];
      if (y === null) return;
      points.push(`${fmt(px(x))},${fmt(py(y))}`);
      const err = s.yerr?.[i];
      if (err != null && err > 0) {
        parts.push(`<line x1="${fmt(px(x))}" y1="${fmt(py(y - err))}" ` +
          `x2="${fmt(px(x))}" y2="${fmt(py(y + err))}" ` +
          `stroke="${s.color}" stroke-width="1"/>`);
      }
    });
    if (points.length > 0) {
      parts.push(`<polyline class="series" fill="none" stroke="${s.color}" ` +
        `stroke-width="1.6"${dash} points="${points.join(" ")}"/>`);
    }
  }

  let ly = MARGIN.top + 8;
  for (const s of panel.series) {
    const lx = MARGIN.left + plotW - 150;
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(`<line x1="${lx}" y1="${ly}" x2="${lx + 26}" y2="${ly}" ` +
      `stroke="${s.color}" stroke-width="1.6"${dash}/>`);
    parts.push(`<text x="${lx + 32}" y="${ly + 4}" font-size="11">${esc(s.label)}</text>`);
    ly += 15;
  }
  parts.push("</g>");
  return parts.join("\n");
}

/** Render panels on a grid; returns a complete standalone SVG document. */
export function renderFigure(panels: Panel[], options: FigureOptions = {}): string {
  if (panels.length === 0) {
    throw new Error("nothing to render: no panels");
  }
  const columns = options.columns ?? (panels.length > 1 ? 2 : 1);
  const panelW = options.panelWidth ?? 440;
  const panelH = options.panelHeight ?? 330;
  const rows = Math.ceil(panels.length / columns);
  const width = columns * panelW;
  const height = rows * panelH;
  const body = panels.map((panel, i) => renderPanel(
    panel, (i % columns) * panelW, Math.floor(i / columns) * panelH,
    panelW, panelH, options.xLabel ?? "T (K)",
    options.yLabel ?? "⟨S_z⟩ / (s+1)"));
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    ...body,
    "</svg>",
  ].join("\n");
}
