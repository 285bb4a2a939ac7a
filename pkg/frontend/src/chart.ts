/**
 * SVG builder for the live 24-hour activity curve.
 *
 * Renders exactly 24 points with hour labels 0-23 and a dashed guide line at
 * 1.0 (the mean of any normalized curve). The values come straight from the
 * service; nothing is recomputed here.
 */

export interface CurveSpec {
  /** Normalized values from the session view, or null when the box is empty. */
  values: number[] | null;
  width?: number;
  height?: number;
  stroke?: string;
}

const LEFT = 34;
const RIGHT = 10;
const TOP = 12;
const BOTTOM = 28;

export function curveSvg(spec: CurveSpec): string {
  const width = spec.width ?? 420;
  const height = spec.height ?? 190;
  const stroke = spec.stroke ?? "#2e6fb7";
  const plotW = width - LEFT - RIGHT;
  const plotH = height - TOP - BOTTOM;

  const values = spec.values;
  const peak = values ? Math.max(...values) : 0;
  const yMax = Math.max(1.2, peak * 1.1);

  const xOf = (hour: number) => LEFT + (plotW * hour) / 23;
  const yOf = (v: number) => TOP + plotH * (1 - v / yMax);

  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `width="${width}" height="${height}" font-family="sans-serif" font-size="9">`,
    `<line x1="${LEFT}" y1="${TOP}" x2="${LEFT}" y2="${TOP + plotH}" stroke="#444"/>`,
    `<line x1="${LEFT}" y1="${TOP + plotH}" x2="${LEFT + plotW}" y2="${TOP + plotH}" stroke="#444"/>`,
  ];

  for (let h = 0; h < 24; h++) {
    const x = xOf(h);
    parts.push(
      `<line x1="${x.toFixed(1)}" y1="${TOP + plotH}" x2="${x.toFixed(1)}" y2="${TOP + plotH + 3}" stroke="#444"/>`,
      `<text x="${x.toFixed(1)}" y="${TOP + plotH + 13}" text-anchor="middle" class="hour-label">${h}</text>`,
    );
  }

  const yGuide = yOf(1.0);
  parts.push(
    `<line class="mean-guide" x1="${LEFT}" y1="${yGuide.toFixed(1)}" ` +
      `x2="${LEFT + plotW}" y2="${yGuide.toFixed(1)}" stroke="#999" stroke-dasharray="4,3"/>`,
    `<text x="${LEFT - 4}" y="${(yGuide + 3).toFixed(1)}" text-anchor="end">1.0</text>`,
  );

  if (values && values.length === 24) {
    const points = values
      .map((v, h) => `${xOf(h).toFixed(1)},${yOf(v).toFixed(1)}`)
      .join(" ");
    parts.push(
      `<polyline class="curve" points="${points}" fill="none" stroke="${stroke}" stroke-width="1.6"/>`,
    );
    for (let h = 0; h < 24; h++) {
      const v = values[h] ?? 0;
      parts.push(
        `<circle class="curve-point" cx="${xOf(h).toFixed(1)}" cy="${yOf(v).toFixed(1)}" r="1.8" fill="${stroke}"/>`,
      );
    }
  } else {
    parts.push(
      `<text x="${LEFT + plotW / 2}" y="${TOP + plotH / 2}" text-anchor="middle" fill="#888">no events in this rectangle</text>`,
    );
  }

  parts.push("</svg>");
  return parts.join("");
}
