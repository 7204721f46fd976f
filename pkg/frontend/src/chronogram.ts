// Time-versus-latitude layout: the horizontal axis carries the stop dates,
// the vertical axis their latitudes, so back-and-forth legs between the
// same harbours stay readable.

import { segmentStyle } from "./style.js";
import {
  ItineraryCollection,
  SegmentFeature,
  StopFeature,
  segmentsOf,
  stopsOf,
} from "./types.js";

export interface ChronogramPoint {
  stop: StopFeature;
  time: number; // ms since epoch (undated stops are extrapolated)
  x: number;
  y: number;
}

export interface ChronogramLink {
  segment: SegmentFeature;
  from: ChronogramPoint;
  to: ChronogramPoint;
  stroke: string;
  dash: string;
}

export interface ChronogramLayout {
  points: ChronogramPoint[];
  links: ChronogramLink[];
  timeDomain: [number, number];
  latDomain: [number, number];
}

export interface Viewport {
  width: number;
  height: number;
  margin: number;
}

const DAY_MS = 86_400_000;

export function stopTimeIso(stop: StopFeature): string {
  return stop.properties.out_date || stop.properties.in_date || "";
}

/** Stop times in itinerary order; undated stops extend the axis by the
 * median gap so their order is preserved. */
export function stopTimes(stops: StopFeature[]): number[] {
  const raw = stops.map((s) => {
    const iso = stopTimeIso(s);
    return iso ? Date.parse(iso) : NaN;
  });
  const gaps: number[] = [];
  let prev: number | null = null;
  for (const t of raw) {
    if (!Number.isNaN(t)) {
      if (prev !== null && t > prev) gaps.push(t - prev);
      prev = t;
    }
  }
  gaps.sort((a, b) => a - b);
  const gap = gaps.length ? gaps[Math.floor(gaps.length / 2)]! : DAY_MS;
  const out: number[] = [];
  let last: number | null = null;
  for (const t of raw) {
    let v = t;
    if (Number.isNaN(v)) {
      v = last === null ? 0 : last + gap;
    } else if (last !== null && v < last) {
      v = last; // a malformed source date never walks the axis backwards
    }
    out.push(v);
    last = v;
  }
  return out;
}

export function chronogramLayout(
  fc: ItineraryCollection,
  view: Viewport,
  timeDomain?: [number, number],
): ChronogramLayout {
  const stops = stopsOf(fc);
  const segments = segmentsOf(fc);
  const times = stopTimes(stops);
  const lats = stops.map((s) => s.properties.lat);

  const t0 = timeDomain ? timeDomain[0] : Math.min(...times);
  const t1 = timeDomain ? timeDomain[1] : Math.max(...times);
  const lat0 = Math.min(...lats);
  const lat1 = Math.max(...lats);

  const innerW = view.width - 2 * view.margin;
  const innerH = view.height - 2 * view.margin;
  const xOf = (t: number) =>
    view.margin + (t1 === t0 ? innerW / 2 : ((t - t0) / (t1 - t0)) * innerW);
  // higher latitudes sit higher on screen (smaller pixel y)
  const yOf = (lat: number) =>
    view.margin +
    (lat1 === lat0 ? innerH / 2 : ((lat1 - lat) / (lat1 - lat0)) * innerH);

  const points: ChronogramPoint[] = stops.map((stop, i) => ({
    stop,
    time: times[i]!,
    x: xOf(times[i]!),
    y: yOf(stop.properties.lat),
  }));

  const links: ChronogramLink[] = segments.map((segment, i) => {
    const style = segmentStyle(segment.properties.travel_uncertainty,
                               segment.properties.direct);
    return {
      segment,
      from: points[i]!,
      to: points[i + 1]!,
      stroke: style.stroke,
      dash: style.dash,
    };
  });

  return { points, links, timeDomain: [t0, t1], latDomain: [lat0, lat1] };
}

/** Zoom the time domain around a focus instant; factor > 1 zooms in,
 * separating near-coincident stop dates. */
export function zoomTimeDomain(
  domain: [number, number],
  focus: number,
  factor: number,
): [number, number] {
  const [t0, t1] = domain;
  const span = (t1 - t0) / factor;
  const f = Math.min(Math.max(focus, t0), t1);
  const rel = t1 === t0 ? 0.5 : (f - t0) / (t1 - t0);
  const n0 = f - rel * span;
  return [n0, n0 + span];
}

export function chronogramSvg(layout: ChronogramLayout,
                              view: Viewport,
                              highlightIndex: number | null = null): string {
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${view.width} ${view.height}" ` +
    `xmlns="http://www.w3.org/2000/svg" class="chronogram">`,
  );
  layout.links.forEach((link, i) => {
    const w = i === highlightIndex ? 4 : 2;
    const dash = link.dash ? ` stroke-dasharray="${link.dash}"` : "";
    parts.push(
      `<line data-seg="${i}" x1="${fmt(link.from.x)}" y1="${fmt(link.from.y)}" ` +
      `x2="${fmt(link.to.x)}" y2="${fmt(link.to.y)}" ` +
      `stroke="${link.stroke}" stroke-width="${w}"${dash}/>`,
    );
  });
  layout.points.forEach((pt, i) => {
    parts.push(
      `<circle data-stop="${i}" cx="${fmt(pt.x)}" cy="${fmt(pt.y)}" r="4" ` +
      `fill="#1a1a2e"><title>${escapeXml(pt.stop.properties.toponym)}</title>` +
      `</circle>`,
    );
  });
  parts.push("</svg>");
  return parts.join("");
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
