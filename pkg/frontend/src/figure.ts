import { writeFileSync } from "node:fs";
import { PNG } from "pngjs";

export type Shape =
  | { kind: "rect"; x: number; y: number; w: number; h: number; fill: string; opacity?: number }
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number; stroke: string; width?: number }
  | { kind: "polyline"; points: [number, number][]; stroke: string; width?: number }
  | { kind: "text"; x: number; y: number; text: string; size?: number; anchor?: "start" | "middle" | "end" };

export interface Figure {
  width: number;
  height: number;
  shapes: Shape[];
}

export function linearScale(
  d0: number,
  d1: number,
  r0: number,
  r1: number,
): (v: number) => number {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export function renderSvg(fig: Figure): string {
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${fig.width}" ` +
      `height="${fig.height}" viewBox="0 0 ${fig.width} ${fig.height}">`,
    `<rect x="0" y="0" width="${fig.width}" height="${fig.height}" fill="#ffffff"/>`,
  ];
  for (const s of fig.shapes) {
    if (s.kind === "rect") {
      const opacity = s.opacity === undefined ? "" : ` fill-opacity="${s.opacity}"`;
      parts.push(
        `<rect x="${fmt(s.x)}" y="${fmt(s.y)}" width="${fmt(s.w)}" ` +
          `height="${fmt(s.h)}" fill="${s.fill}"${opacity}/>`,
      );
    } else if (s.kind === "line") {
      parts.push(
        `<line x1="${fmt(s.x1)}" y1="${fmt(s.y1)}" x2="${fmt(s.x2)}" ` +
          `y2="${fmt(s.y2)}" stroke="${s.stroke}" stroke-width="${s.width ?? 1}"/>`,
      );
    } else if (s.kind === "polyline") {
      const pts = s.points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
      parts.push(
        `<polyline points="${pts}" fill="none" stroke="${s.stroke}" ` +
          `stroke-width="${s.width ?? 1}"/>`,
      );
    } else {
      parts.push(
        `<text x="${fmt(s.x)}" y="${fmt(s.y)}" font-family="sans-serif" ` +
          `font-size="${s.size ?? 11}" text-anchor="${s.anchor ?? "start"}">` +
          `${esc(s.text)}</text>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

function parseHex(color: string): [number, number, number] {
  const m = /^#([0-9a-f]{6})$/i.exec(color);
  if (!m) throw new Error(`expected #rrggbb color, got '${color}'`);
  const n = parseInt(m[1], 16);
  return [(n >> 16) & 0xff, (n >> 8) & 0xff, n & 0xff];
}

/** Raster rendering of the same geometry; text shapes are skipped, so the
 * png variant is a compact label-free rendering. */
export function renderPng(fig: Figure): Buffer {
  const png = new PNG({ width: fig.width, height: fig.height });
  png.data.fill(255);
  const put = (x: number, y: number, rgb: [number, number, number], alpha: number) => {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= fig.width || yi >= fig.height) return;
    const at = (fig.width * yi + xi) << 2;
    for (let c = 0; c < 3; c += 1) {
      png.data[at + c] = Math.round(rgb[c] * alpha + png.data[at + c] * (1 - alpha));
    }
    png.data[at + 3] = 255;
  };
  const drawLine = (
    x1: number, y1: number, x2: number, y2: number,
    rgb: [number, number, number],
  ) => {
    const steps = Math.max(Math.abs(x2 - x1), Math.abs(y2 - y1), 1);
    for (let i = 0; i <= steps; i += 1) {
      put(x1 + ((x2 - x1) * i) / steps, y1 + ((y2 - y1) * i) / steps, rgb, 1);
    }
  };
  for (const s of fig.shapes) {
    if (s.kind === "rect") {
      const rgb = parseHex(s.fill);
      const alpha = s.opacity ?? 1;
      for (let y = Math.round(s.y); y < Math.round(s.y + s.h); y += 1) {
        for (let x = Math.round(s.x); x < Math.round(s.x + s.w); x += 1) {
          put(x, y, rgb, alpha);
        }
      }
    } else if (s.kind === "line") {
      drawLine(s.x1, s.y1, s.x2, s.y2, parseHex(s.stroke));
    } else if (s.kind === "polyline") {
      const rgb = parseHex(s.stroke);
      for (let i = 1; i < s.points.length; i += 1) {
        const [x1, y1] = s.points[i - 1];
        const [x2, y2] = s.points[i];
        drawLine(x1, y1, x2, y2, rgb);
      }
    }
  }
  return PNG.sync.write(png);
}

export function writeFigure(fig: Figure, out: string, format: string): void {
  if (format === "svg") {
    writeFileSync(out, renderSvg(fig));
  } else if (format === "png") {
    writeFileSync(out, renderPng(fig));
  } else {
    throw new Error(`format must be 'png' or 'svg', got '${format}'`);
  }
}
