import {
  Table,
  filterRows,
  numberColumn,
  parseCsv,
  stringColumn,
} from "./csv.js";
import { EmptySeries } from "./errors.js";
import { Axes, PanelBox, SvgBuilder, logAxes, padDecades } from "./svg.js";

export type FigureKind = "err1d" | "err2d-panel" | "contrast" | "heatmap";

export interface FigureSpec {
  kind: FigureKind;
  input: string; // CSV path (resolved by the CLI before calling render*)
  output: string; // SVG path
}

/** Marker-to-curve convention shared by all multi-curve figures. */
export const CURVE_MARKERS: Record<string, "square" | "circle" | "point"> = {
  c1: "square",
  c2: "circle",
  c3: "point",
};

export const CURVE_COLORS: Record<string, string> = {
  c1: "#1f77b4",
  c2: "#d62728",
  c3: "#2ca02c",
};

const SERIES_1D: Array<{ column: string; color: string; dash?: string }> = [
  { column: "E2", color: "#1f77b4" },
  { column: "Einf", color: "#1f77b4", dash: "4 3" },
  { column: "E2hat", color: "#d62728" },
  { column: "Einfhat", color: "#d62728", dash: "4 3" },
];

interface SeriesPoint {
  x: number;
  y: number;
}

function sortByX(xs: number[], ys: number[]): SeriesPoint[] {
  return xs
    .map((x, i) => ({ x, y: ys[i] }))
    .filter((p) => Number.isFinite(p.x) && Number.isFinite(p.y) && p.x > 0 && p.y > 0)
    .sort((a, b) => a.x - b.x);
}

function drawSeries(
  svg: SvgBuilder,
  axes: Axes,
  points: SeriesPoint[],
  color: string,
  marker: "square" | "circle" | "point" | null,
  dash?: string,
): void {
  const mapped: Array<[number, number]> = points.map((p) => [axes.x(p.x), axes.y(p.y)]);
  if (dash) {
    const attr = mapped.map(([x, y]) => `${x.toFixed(3)},${y.toFixed(3)}`).join(" ");
    svg.raw(
      `<polyline points="${attr}" fill="none" stroke="${color}" ` +
        `stroke-width="1.5" stroke-dasharray="${dash}"/>`,
    );
  } else {
    svg.polyline(mapped, color);
  }
  if (marker) {
    for (const [x, y] of mapped) {
      svg.marker(marker, x, y, color);
    }
  }
}

/** 1D figure: the four error series against the averaging size, log-log,
 * one group per extension label found in the CSV. */
export function renderErr1d(csvText: string): string {
  const table = parseCsv(csvText);
  if (table.rows.length === 0) {
    throw new EmptySeries("1D curve CSV has a header but no rows");
  }
  const extensions = [...new Set(stringColumn(table, "extension"))].sort();
  const allValues: number[] = [];
  for (const column of SERIES_1D) {
    allValues.push(...numberColumn(table, column.column));
  }
  const xs = numberColumn(table, "epsbar");
  const svg = new SvgBuilder(520, 400);
  const box: PanelBox = { left: 60, top: 30, width: 420, height: 300 };
  const axes = logAxes(
    svg,
    box,
    padDecades(xs),
    padDecades(allValues),
    "averaging size",
    "relative error",
  );
  let legendY = box.top + 8;
  for (const ext of extensions) {
    const sub = filterRows(table, "extension", ext);
    const subX = numberColumn(sub, "epsbar");
    for (const series of SERIES_1D) {
      const pts = sortByX(subX, numberColumn(sub, series.column));
      if (pts.length === 0) {
        throw new EmptySeries(`series ${series.column} (${ext}) is empty`);
      }
      drawSeries(svg, axes, pts, series.color, "point", series.dash);
      svg.text(
        box.left + box.width - 4,
        legendY,
        `${ext} ${series.column}`,
        "end",
        series.color,
      );
      legendY += 14;
    }
  }
  return svg.render();
}

function drawCurvePanel(
  svg: SvgBuilder,
  box: PanelBox,
  table: Table,
  norm: string,
  title: string,
): void {
  const sub = filterRows(table, "norm", norm);
  if (sub.rows.length === 0) {
    throw new EmptySeries(`no rows with norm=${norm}`);
  }
  const xs = numberColumn(sub, "h");
  const ys = numberColumn(sub, "value");
  const axes = logAxes(svg, box, padDecades(xs), padDecades(ys), "h", title);
  const curves = [...new Set(stringColumn(sub, "curve"))].sort();
  for (const curve of curves) {
    const rows = filterRows(sub, "curve", curve);
    const pts = sortByX(numberColumn(rows, "h"), numberColumn(rows, "value"));
    if (pts.length === 0) {
      throw new EmptySeries(`curve ${curve} (${norm}) is empty`);
    }
    const color = CURVE_COLORS[curve] ?? "#333";
    drawSeries(svg, axes, pts, color, CURVE_MARKERS[curve] ?? "point");
  }
}

/** 2D figure: two log-log panels, L2 errors left, Linf errors right;
 * squares = c1, circles = c2, points = c3. */
export function renderErr2dPanel(csvText: string): string {
  const table = parseCsv(csvText);
  if (table.rows.length === 0) {
    throw new EmptySeries("2D curve CSV has a header but no rows");
  }
  const svg = new SvgBuilder(900, 400);
  drawCurvePanel(svg, { left: 60, top: 30, width: 350, height: 300 }, table, "L2", "E2");
  drawCurvePanel(svg, { left: 510, top: 30, width: 350, height: 300 }, table, "Linf", "Einf");
  return svg.render();
}

/** Contrast of the effective field against h, log-log. */
export function renderContrast(csvText: string): string {
  const table = parseCsv(csvText);
  if (table.rows.length === 0) {
    throw new EmptySeries("contrast CSV has a header but no rows");
  }
  const pts = sortByX(numberColumn(table, "h"), numberColumn(table, "CA"));
  if (pts.length === 0) {
    throw new EmptySeries("contrast series is empty");
  }
  const svg = new SvgBuilder(520, 400);
  const box: PanelBox = { left: 60, top: 30, width: 420, height: 300 };
  const axes = logAxes(
    svg,
    box,
    padDecades(pts.map((p) => p.x)),
    padDecades(pts.map((p) => p.y)),
    "h",
    "C_A",
  );
  drawSeries(svg, axes, pts, "#1f77b4", "circle");
  return svg.render();
}

/** Coefficient heatmap from (x, y, value) samples on a uniform grid;
 * grayscale over the log of the value range. */
export function renderHeatmap(csvText: string): string {
  const table = parseCsv(csvText);
  if (table.rows.length === 0) {
    throw new EmptySeries("heatmap CSV has a header but no rows");
  }
  const xs = numberColumn(table, "x");
  const ys = numberColumn(table, "y");
  const vals = numberColumn(table, "value");
  const uniqueX = [...new Set(xs)].sort((a, b) => a - b);
  const uniqueY = [...new Set(ys)].sort((a, b) => a - b);
  const n1 = uniqueX.length;
  const n2 = uniqueY.length;
  const logs = vals.map((v) => Math.log10(Math.max(v, Number.MIN_VALUE)));
  const lo = Math.min(...logs);
  const hi = Math.max(...logs);
  const span = hi - lo || 1;
  const size = 420;
  const svg = new SvgBuilder(size + 80, size + 60);
  const cellW = size / n1;
  const cellH = size / n2;
  const ix = new Map(uniqueX.map((v, i) => [v, i]));
  const iy = new Map(uniqueY.map((v, i) => [v, i]));
  for (let r = 0; r < xs.length; r++) {
    const i = ix.get(xs[r])!;
    const j = iy.get(ys[r])!;
    const shade = Math.round(255 * (1 - (logs[r] - lo) / span));
    svg.rect(
      40 + i * cellW,
      20 + (n2 - 1 - j) * cellH,
      cellW + 0.5,
      cellH + 0.5,
      `rgb(${shade},${shade},${shade})`,
    );
  }
  svg.text(40 + size / 2, size + 48, "coefficient (log shading, dark = large)");
  return svg.render();
}

export const RENDERERS: Record<FigureKind, (csv: string) => string> = {
  err1d: renderErr1d,
  "err2d-panel": renderErr2dPanel,
  contrast: renderContrast,
  heatmap: renderHeatmap,
};
