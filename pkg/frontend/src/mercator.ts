/** Web-mercator math for the slippy-tile map pane. Pure functions. */

import type { Bbox } from "./types.js";

export const TILE_SIZE = 256;

/** World pixel coordinates at a zoom level (origin top-left, y grows south). */
export function project(lat: number, lon: number, zoom: number): { x: number; y: number } {
  const scale = TILE_SIZE * 2 ** zoom;
  const x = ((lon + 180) / 360) * scale;
  const rad = (lat * Math.PI) / 180;
  const y = ((1 - Math.log(Math.tan(rad) + 1 / Math.cos(rad)) / Math.PI) / 2) * scale;
  return { x, y };
}

export function unproject(x: number, y: number, zoom: number): { lat: number; lon: number } {
  const scale = TILE_SIZE * 2 ** zoom;
  const lon = (x / scale) * 360 - 180;
  const n = Math.PI - (2 * Math.PI * y) / scale;
  const lat = (180 / Math.PI) * Math.atan(0.5 * (Math.exp(n) - Math.exp(-n)));
  return { lat, lon };
}

/** Zoom level at which `bbox` fits a viewport, clamped to [minZoom, maxZoom]. */
export function zoomToFit(
  bbox: Bbox,
  widthPx: number,
  heightPx: number,
  minZoom = 3,
  maxZoom = 18,
): number {
  for (let z = maxZoom; z >= minZoom; z--) {
    const a = project(bbox.lat_max, bbox.lon_min, z);
    const b = project(bbox.lat_min, bbox.lon_max, z);
    if (b.x - a.x <= widthPx && b.y - a.y <= heightPx) return z;
  }
  return minZoom;
}

export function tileUrl(template: string, z: number, x: number, y: number): string {
  const n = 2 ** z;
  const wrapped = ((x % n) + n) % n; // wrap x across the antimeridian
  return template
    .replace("{z}", String(z))
    .replace("{x}", String(wrapped))
    .replace("{y}", String(y));
}

export function bboxCenter(bbox: Bbox): { lat: number; lon: number } {
  return {
    lat: (bbox.lat_min + bbox.lat_max) / 2,
    lon: (bbox.lon_min + bbox.lon_max) / 2,
  };
}

/** Normalize two drag corners into an ordered bbox. */
export function cornersToBbox(
  a: { lat: number; lon: number },
  b: { lat: number; lon: number },
): Bbox {
  return {
    lat_min: Math.min(a.lat, b.lat),
    lat_max: Math.max(a.lat, b.lat),
    lon_min: Math.min(a.lon, b.lon),
    lon_max: Math.max(a.lon, b.lon),
  };
}
