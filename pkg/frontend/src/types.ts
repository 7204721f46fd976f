// Shapes of the itinerary API responses the client consumes.

export interface ShipSummary {
  ship_id: string;
  ship_name: string;
  captain: string;
  first_date: string;
  last_date: string;
  stop_count: number;
  worst_travel_uncertainty: number;
}

export interface SummaryPage {
  items: ShipSummary[];
  total: number;
  next_cursor: string | null;
}

export interface SegmentProperties {
  ship_id: string;
  ship_name: string;
  captain: string;
  departure_iso: string;
  arrival_iso: string;
  travel_uncertainty: 0 | -1 | -2 | -3;
  color: "green" | "grey" | "red" | "orange";
  direct: boolean;
  tonnage: string;
  flag: string;
  track?: "a" | "b";
}

export interface StopProperties {
  toponym: string;
  geo_id: string;
  uncertainty: string;
  in_date: string;
  out_date: string;
  lat: number;
  track?: "a" | "b";
}

export interface SegmentFeature {
  type: "Feature";
  geometry: { type: "LineString"; coordinates: [number, number][] };
  properties: SegmentProperties;
}

export interface StopFeature {
  type: "Feature";
  geometry: { type: "Point"; coordinates: [number, number] };
  properties: StopProperties;
}

export type ItineraryFeature = SegmentFeature | StopFeature;

export interface ItineraryCollection {
  type: "FeatureCollection";
  ship_id: string;
  features: ItineraryFeature[];
}

export interface ComparisonTrack {
  track: "a" | "b";
  ship_id: string;
  collection: ItineraryCollection;
}

export interface ComparisonDoc {
  tracks: ComparisonTrack[];
}

export interface ExplorerConfig {
  apiBaseUrl: string;
  tileUrl: string | null;
  coastlineUrl: string | null;
  stepperMode: "wrap" | "disable";
  offline: boolean;
}

export function isSegment(f: ItineraryFeature): f is SegmentFeature {
  return f.geometry.type === "LineString";
}

export function isStop(f: ItineraryFeature): f is StopFeature {
  return f.geometry.type === "Point";
}

export function segmentsOf(fc: ItineraryCollection): SegmentFeature[] {
  return fc.features.filter(isSegment);
}

export function stopsOf(fc: ItineraryCollection): StopFeature[] {
  return fc.features.filter(isStop);
}
