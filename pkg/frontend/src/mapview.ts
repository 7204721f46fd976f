// SVG map rendering: base tiles (or offline coastline), route segments
// styled by uncertainty, viewport fitted to the focused segment.

import { escapeXml } from "./chronogram.js";
import { segmentStyle } from "./style.js";
import {
  ItineraryCollection,
  SegmentFeature,
  segmentsOf,
  stopsOf,
} from "./types.js";

export interface Bounds {
  minLon: number;
  minLat: number;
  maxLon: number;
  maxLat: number;
}

export interface MapViewport {
  width: number;
  height: number;
  bounds: Bounds;
}

export function boundsOfCoordinates(coords: [number, number][]): Bounds {
  let minLon = Infinity, minLat = Infinity, maxLon = -Infinity, maxLat = -Infinity;
  for (const [lon, lat] of coords) {
    if (lon < minLon) minLon = lon;
    if (lon > maxLon) maxLon = lon;
    if (lat < minLat) minLat = lat;
    if (lat > maxLat) maxLat = lat;
  }
  return { minLon, minLat, maxLon, maxLat };
}

/** Viewport fitted to a segment with proportional padding; degenerate
 * extents get a minimum span so a short leg still has surroundings. */
export function fitBounds(coords: [number, number][], pad = 0.25,
                          minSpan = 0.05): Bounds {
  const b = boundsOfCoordinates(coords);
  let spanLon = Math.max(b.maxLon - b.minLon, minSpan);
  let spanLat = Math.max(b.maxLat - b.minLat, minSpan);
  const cx = (b.minLon + b.maxLon) / 2;
  const cy = (b.minLat + b.maxLat) / 2;
  spanLon *= 1 + 2 * pad;
  spanLat *= 1 + 2 * pad;
  return {
    minLon: cx - spanLon / 2,
    maxLon: cx + spanLon / 2,
    minLat: cy - spanLat / 2,
    maxLat: cy + spanLat / 2,
  };
}

export function project(view: MapViewport, lon: number, lat: number): [number, number] {
  const { bounds } = view;
  const x = ((lon - bounds.minLon) / (bounds.maxLon - bounds.minLon)) * view.width;
  const y = ((bounds.maxLat - lat) / (bounds.maxLat - bounds.minLat)) * view.height;
  return [x, y];
}

/** Ship attributes shown in the hover tooltip of one leg. */
export function tooltipLines(segment: SegmentFeature): string[] {
  const p = segment.properties;
  const lines = [
    `${p.ship_name} (${p.ship_id})`,
    p.captain ? `captain ${p.captain}` : "",
    p.departure_iso ? `departs ${p.departure_iso}` : "",
    p.arrival_iso ? `arrives ${p.arrival_iso}` : "",
    p.tonnage ? `${p.tonnage} tx` : "",
    p.flag,
    p.direct ? "declared leg" : "inferred leg",
    `uncertainty ${p.travel_uncertainty} (${p.color})`,
  ];
  return lines.filter((l) => l !== "");
}

// -- base layer --------------------------------------------------------------

const TILE_ZOOM_TARGET = 4; // tiles across the viewport width

export function tileIndices(bounds: Bounds): { z: number; xs: number[]; ys: number[] } {
  const spanLon = Math.max(bounds.maxLon - bounds.minLon, 1e-6);
  let z = Math.round(Math.log2((360 / spanLon) * TILE_ZOOM_TARGET / 256) + 8);
  z = Math.min(Math.max(z, 0), 19);
  const n = 2 ** z;
  const xOf = (lon: number) => Math.floor(((lon + 180) / 360) * n);
  const yOf = (lat: number) => {
    const r = (lat * Math.PI) / 180;
    return Math.floor(((1 - Math.asinh(Math.tan(r)) / Math.PI) / 2) * n);
  };
  const x0 = Math.max(0, xOf(bounds.minLon));
  const x1 = Math.min(n - 1, xOf(bounds.maxLon));
  const y0 = Math.max(0, yOf(bounds.maxLat));
  const y1 = Math.min(n - 1, yOf(bounds.minLat));
  const xs = [], ys = [];
  for (let x = x0; x <= x1; x++) xs.push(x);
  for (let y = y0; y <= y1; y++) ys.push(y);
  return { z, xs, ys };
}

export function tileUrlFor(template: string, z: number, x: number, y: number): string {
  return template
    .replace("{z}", String(z))
    .replace("{x}", String(x))
    .replace("{y}", String(y));
}

function tileLayerSvg(view: MapViewport, template: string): string {
  const { z, xs, ys } = tileIndices(view.bounds);
  const n = 2 ** z;
  const parts: string[] = [];
  for (const x of xs) {
    for (const y of ys) {
      const lon0 = (x / n) * 360 - 180;
      const lon1 = ((x + 1) / n) * 360 - 180;
      const lat0 = tileLat(y, n);
      const lat1 = tileLat(y + 1, n);
      const [px0, py0] = project(view, lon0, lat0);
      const [px1, py1] = project(view, lon1, lat1);
      parts.push(
        `<image href="${escapeXml(tileUrlFor(template, z, x, y))}" ` +
        `x="${px0.toFixed(1)}" y="${py0.toFixed(1)}" ` +
        `width="${(px1 - px0).toFixed(1)}" height="${(py1 - py0).toFixed(1)}" ` +
        `preserveAspectRatio="none"/>`,
      );
    }
  }
  return parts.join("");
}

function tileLat(y: number, n: number): number {
  const t = Math.PI * (1 - (2 * y) / n);
  return (Math.atan(Math.sinh(t)) * 180) / Math.PI;
}

export interface CoastlineFeatureCollection {
  type: "FeatureCollection";
  features: Array<{
    geometry: { type: string; coordinates: unknown };
  }>;
}

function coastlineSvg(view: MapViewport, coast: CoastlineFeatureCollection): string {
  const parts: string[] = [];
  for (const feature of coast.features) {
    if (feature.geometry.type !== "Polygon") continue;
    const rings = feature.geometry.coordinates as [number, number][][];
    const outer = rings[0];
    if (!outer) continue;
    const d = outer
      .map(([lon, lat], i) => {
        const [x, y] = project(view, lon, lat);
        return `${i === 0 ? "M" : "L"}${x.toFixed(1)} ${y.toFixed(1)}`;
      })
      .join(" ");
    parts.push(`<path d="${d} Z" fill="#e8e0d0" stroke="#9a8f7a"/>`);
  }
  return parts.join("");
}

// -- full map ----------------------------------------------------------------

export interface MapRenderOptions {
  width: number;
  height: number;
  focusSegment: number | null;
  tileUrl: string | null;
  coastline: CoastlineFeatureCollection | null;
  highlightIndex?: number | null;
}

export function mapSvg(fc: ItineraryCollection, opts: MapRenderOptions): string {
  const segments = segmentsOf(fc);
  const stops = stopsOf(fc);
  const allCoords: [number, number][] = [];
  for (const seg of segments) allCoords.push(...seg.geometry.coordinates);
  for (const stop of stops) allCoords.push(stop.geometry.coordinates);
  if (allCoords.length === 0) {
    return `<svg viewBox="0 0 ${opts.width} ${opts.height}" ` +
      `xmlns="http://www.w3.org/2000/svg" class="map"></svg>`;
  }

  const focus = opts.focusSegment !== null ? segments[opts.focusSegment] : undefined;
  const bounds = fitBounds(focus ? focus.geometry.coordinates : allCoords);
  const view: MapViewport = { width: opts.width, height: opts.height, bounds };

  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${opts.width} ${opts.height}" ` +
    `xmlns="http://www.w3.org/2000/svg" class="map">`,
  );
  if (opts.tileUrl) {
    parts.push(tileLayerSvg(view, opts.tileUrl));
  } else if (opts.coastline) {
    parts.push(coastlineSvg(view, opts.coastline));
  }
  segments.forEach((seg, i) => {
    const style = segmentStyle(seg.properties.travel_uncertainty,
                               seg.properties.direct);
    const d = seg.geometry.coordinates
      .map(([lon, lat], k) => {
        const [x, y] = project(view, lon, lat);
        return `${k === 0 ? "M" : "L"}${x.toFixed(1)} ${y.toFixed(1)}`;
      })
      .join(" ");
    const width = i === (opts.highlightIndex ?? opts.focusSegment) ? 4 : 2;
    const dash = style.dash ? ` stroke-dasharray="${style.dash}"` : "";
    const title = tooltipLines(seg).map(escapeXml).join("&#10;");
    parts.push(
      `<path data-seg="${i}" d="${d}" fill="none" stroke="${style.stroke}" ` +
      `stroke-width="${width}"${dash}><title>${title}</title></path>`,
    );
  });
  stops.forEach((stop, i) => {
    const [x, y] = project(view, ...stop.geometry.coordinates);
    parts.push(
      `<circle data-stop="${i}" cx="${x.toFixed(1)}" cy="${y.toFixed(1)}" r="3.5" ` +
      `fill="#1a1a2e"><title>${escapeXml(stop.properties.toponym)}</title></circle>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}
