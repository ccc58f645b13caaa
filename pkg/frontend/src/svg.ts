/** Minimal deterministic SVG construction: fixed-precision coordinates and
 * stable element ordering so identical inputs render byte-identical files. */

export function fmt(value: number): string {
  // Fixed decimals avoid platform-dependent shortest-repr differences.
  return value.toFixed(3).replace(/\.000$/, "");
}

export type Scale = (value: number) => number;

export function logScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  return (v) => outLo + ((Math.log10(v) - llo) / (lhi - llo)) * (outHi - outLo);
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  return (v) => outLo + ((v - lo) / (hi - lo)) * (outHi - outLo);
}

/** Powers of ten covering [lo, hi]. */
export function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
    ticks.push(Math.pow(10, e));
  }
  return ticks;
}

export class SvgBuilder {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="11">`,
    );
    this.parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#444", width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string): void {
    const attr = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${attr}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`,
    );
  }

  /** Marker conventions: square = c1, circle = c2, point = c3. */
  marker(kind: "square" | "circle" | "point", x: number, y: number, color: string): void {
    if (kind === "square") {
      this.parts.push(
        `<rect class="marker-square" x="${fmt(x - 4)}" y="${fmt(y - 4)}" width="8" height="8" ` +
          `fill="white" stroke="${color}" stroke-width="1.5"/>`,
      );
    } else if (kind === "circle") {
      this.parts.push(
        `<circle class="marker-circle" cx="${fmt(x)}" cy="${fmt(y)}" r="4" ` +
          `fill="white" stroke="${color}" stroke-width="1.5"/>`,
      );
    } else {
      this.parts.push(
        `<circle class="marker-point" cx="${fmt(x)}" cy="${fmt(y)}" r="1.8" fill="${color}"/>`,
      );
    }
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  text(x: number, y: number, content: string, anchor = "middle", fill = "#222"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" fill="${fill}">` +
        `${escapeXml(content)}</text>`,
    );
  }

  raw(fragment: string): void {
    this.parts.push(fragment);
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface Axes {
  x: Scale;
  y: Scale;
}

export interface PanelBox {
  left: number;
  top: number;
  width: number;
  height: number;
}

/** Log-log axes with decade ticks drawn into the builder. */
export function logAxes(
  svg: SvgBuilder,
  box: PanelBox,
  xRange: [number, number],
  yRange: [number, number],
  xLabel: string,
  yLabel: string,
): Axes {
  const x = logScale(xRange[0], xRange[1], box.left, box.left + box.width);
  const y = logScale(yRange[0], yRange[1], box.top + box.height, box.top);
  svg.line(box.left, box.top + box.height, box.left + box.width, box.top + box.height);
  svg.line(box.left, box.top, box.left, box.top + box.height);
  for (const tick of decadeTicks(xRange[0], xRange[1])) {
    if (tick < xRange[0] * 0.999 || tick > xRange[1] * 1.001) continue;
    const px = x(tick);
    svg.line(px, box.top + box.height, px, box.top + box.height + 4);
    svg.text(px, box.top + box.height + 16, `1e${Math.round(Math.log10(tick))}`);
  }
  for (const tick of decadeTicks(yRange[0], yRange[1])) {
    if (tick < yRange[0] * 0.999 || tick > yRange[1] * 1.001) continue;
    const py = y(tick);
    svg.line(box.left - 4, py, box.left, py);
    svg.text(box.left - 6, py + 4, `1e${Math.round(Math.log10(tick))}`, "end");
  }
  svg.text(box.left + box.width / 2, box.top + box.height + 32, xLabel);
  svg.text(box.left - 34, box.top - 8, yLabel, "start");
  return { x, y };
}

/** Pad a [min, max] data range out to full decades for stable axes. */
export function padDecades(values: number[]): [number, number] {
  const finite = values.filter((v) => Number.isFinite(v) && v > 0);
  const lo = Math.min(...finite);
  const hi = Math.max(...finite);
  return [Math.pow(10, Math.floor(Math.log10(lo))), Math.pow(10, Math.ceil(Math.log10(hi)))];
}
