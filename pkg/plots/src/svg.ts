/** Small SVG scene builder: scales, axes, polylines, boxes. No DOM needed. */

export interface Scale {
  toPixel(value: number): number;
  ticks(): number[];
  valid(value: number): boolean;
}

export class LinearScale implements Scale {
  constructor(
    private lo: number,
    private hi: number,
    private pixelLo: number,
    private pixelHi: number,
  ) {
    if (lo === hi) {
      this.lo -= 0.5;
      this.hi += 0.5;
    }
  }

  toPixel(value: number): number {
    const t = (value - this.lo) / (this.hi - this.lo);
    return this.pixelLo + t * (this.pixelHi - this.pixelLo);
  }

  ticks(): number[] {
    const span = this.hi - this.lo;
    const rawStep = span / 5;
    const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
    const step = [1, 2, 5, 10].map((m) => m * power).find((s) => span / s <= 6) ?? power * 10;
    const first = Math.ceil(this.lo / step) * step;
    const out: number[] = [];
    for (let v = first; v <= this.hi + 1e-12 * Math.abs(step); v += step) {
      out.push(Math.abs(v) < 1e-12 * Math.abs(step) ? 0 : v);
    }
    return out;
  }

  valid(_value: number): boolean {
    return true;
  }
}

export class LogScale implements Scale {
  constructor(
    private lo: number,
    private hi: number,
    private pixelLo: number,
    private pixelHi: number,
  ) {
    if (lo <= 0 || hi <= 0) throw new Error("log scale needs positive bounds");
    if (lo === hi) {
      this.lo = lo / 10;
      this.hi = hi * 10;
    }
  }

  toPixel(value: number): number {
    const t = (Math.log10(value) - Math.log10(this.lo)) / (Math.log10(this.hi) - Math.log10(this.lo));
    return this.pixelLo + t * (this.pixelHi - this.pixelLo);
  }

  ticks(): number[] {
    const first = Math.ceil(Math.log10(this.lo));
    const last = Math.floor(Math.log10(this.hi));
    const stride = Math.max(1, Math.ceil((last - first + 1) / 8));
    const out: number[] = [];
    for (let exponent = first; exponent <= last; exponent += stride) {
      out.push(Math.pow(10, exponent));
    }
    return out.length > 0 ? out : [this.lo];
  }

  valid(value: number): boolean {
    return value > 0;
  }
}

const formatTick = (value: number): string => {
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e4 || magnitude < 1e-3) return value.toExponential(0).replace("+", "");
  return Number(value.toPrecision(4)).toString();
};

export interface PanelFrame {
  x0: number;
  y0: number;
  width: number;
  height: number;
}

export class Panel {
  readonly plot: PanelFrame;
  private parts: string[] = [];

  constructor(
    frame: PanelFrame,
    public xScale: Scale,
    public yScale: Scale,
  ) {
    this.plot = frame;
  }

  path(points: Array<[number, number]>, stroke: string, width = 1.2, opacity = 1): void {
    // split the polyline wherever a point is invalid for the scales
    let d = "";
    let pen = false;
    for (const [x, y] of points) {
      if (!this.xScale.valid(x) || !this.yScale.valid(y) || !isFinite(y)) {
        pen = false;
        continue;
      }
      const px = this.xScale.toPixel(x).toFixed(2);
      const py = this.yScale.toPixel(y).toFixed(2);
      d += `${pen ? "L" : "M"}${px},${py}`;
      pen = true;
    }
    if (d === "") return;
    this.parts.push(
      `<path d="${d}" fill="none" stroke="${stroke}" stroke-width="${width}" opacity="${opacity}"/>`,
    );
  }

  hline(y: number, x1: number, x2: number, stroke: string, width = 1.5): void {
    const py = this.yScale.toPixel(y).toFixed(2);
    this.parts.push(
      `<line x1="${this.xScale.toPixel(x1).toFixed(2)}" x2="${this.xScale.toPixel(x2).toFixed(2)}" ` +
        `y1="${py}" y2="${py}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  vline(x: number, y1: number, y2: number, stroke: string, width = 1): void {
    const px = this.xScale.toPixel(x).toFixed(2);
    this.parts.push(
      `<line x1="${px}" x2="${px}" y1="${this.yScale.toPixel(y1).toFixed(2)}" ` +
        `y2="${this.yScale.toPixel(y2).toFixed(2)}" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  box(x1: number, x2: number, yLow: number, yHigh: number, stroke: string, fill: string): void {
    const px = Math.min(this.xScale.toPixel(x1), this.xScale.toPixel(x2));
    const pw = Math.abs(this.xScale.toPixel(x2) - this.xScale.toPixel(x1));
    const pyTop = Math.min(this.yScale.toPixel(yLow), this.yScale.toPixel(yHigh));
    const ph = Math.abs(this.yScale.toPixel(yHigh) - this.yScale.toPixel(yLow));
    this.parts.push(
      `<rect x="${px.toFixed(2)}" y="${pyTop.toFixed(2)}" width="${pw.toFixed(2)}" ` +
        `height="${Math.max(ph, 0.5).toFixed(2)}" stroke="${stroke}" fill="${fill}" fill-opacity="0.35"/>`,
    );
  }

  diamond(x: number, y: number, size: number, fill: string): void {
    const px = this.xScale.toPixel(x);
    const py = this.yScale.toPixel(y);
    const points = [
      [px, py - size],
      [px + size, py],
      [px, py + size],
      [px - size, py],
    ]
      .map(([a, b]) => `${a.toFixed(2)},${b.toFixed(2)}`)
      .join(" ");
    this.parts.push(`<polygon points="${points}" fill="${fill}"/>`);
  }

  axes(title: string, xLabel: string, yLabel: string, options: { xTicks?: boolean } = {}): string {
    const { x0, y0, width, height } = this.plot;
    const pieces: string[] = [
      `<g class="panel">`,
      `<rect x="${x0}" y="${y0}" width="${width}" height="${height}" fill="none" stroke="#444"/>`,
      `<text x="${x0 + width / 2}" y="${y0 - 8}" text-anchor="middle" font-size="13">${title}</text>`,
      `<text x="${x0 + width / 2}" y="${y0 + height + 34}" text-anchor="middle" font-size="12">${xLabel}</text>`,
      `<text x="${x0 - 48}" y="${y0 + height / 2}" text-anchor="middle" font-size="12" ` +
        `transform="rotate(-90 ${x0 - 48} ${y0 + height / 2})">${yLabel}</text>`,
    ];
    if (options.xTicks !== false) {
      for (const tick of this.xScale.ticks()) {
        const px = this.xScale.toPixel(tick).toFixed(2);
        pieces.push(
          `<line x1="${px}" x2="${px}" y1="${y0 + height}" y2="${y0 + height + 4}" stroke="#444"/>`,
          `<text x="${px}" y="${y0 + height + 16}" text-anchor="middle" font-size="10">${formatTick(tick)}</text>`,
        );
      }
    }
    for (const tick of this.yScale.ticks()) {
      const py = this.yScale.toPixel(tick).toFixed(2);
      pieces.push(
        `<line x1="${x0 - 4}" x2="${x0}" y1="${py}" y2="${py}" stroke="#444"/>`,
        `<text x="${x0 - 7}" y="${py}" text-anchor="end" dominant-baseline="middle" font-size="10">${formatTick(tick)}</text>`,
      );
    }
    pieces.push(...this.parts, "</g>");
    return pieces.join("\n");
  }
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    ...body,
    "</svg>",
  ].join("\n");
}

export function legend(
  entries: Array<{ label: string; color: string }>,
  x: number,
  y: number,
): string {
  const rows = entries.map((entry, index) => {
    const rowY = y + index * 16;
    return (
      `<line x1="${x}" x2="${x + 22}" y1="${rowY}" y2="${rowY}" stroke="${entry.color}" stroke-width="2.5"/>` +
      `<text x="${x + 28}" y="${rowY + 4}" font-size="11">${entry.label}</text>`
    );
  });
  return `<g class="legend">${rows.join("")}</g>`;
}
