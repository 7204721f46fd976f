// A fixture shaped like the API's answer for the eight-stop itinerary of
// ship 0002931N (five confirmed coastal rotations, then two declared legs).

import {
  ItineraryCollection,
  SegmentFeature,
  StopFeature,
} from "../src/types.js";

interface StopSpec {
  toponym: string;
  geo_id: string;
  lon: number;
  lat: number;
  out_date: string;
  in_date: string;
  uncertainty: string;
}

const STOPS: StopSpec[] = [
  { toponym: "Les Sables-d'Olonne", geo_id: "les_sables", lon: -1.7833, lat: 46.4969, out_date: "1787-01-05", in_date: "", uncertainty: "observed" },
  { toponym: "Bayonne", geo_id: "bayonne", lon: -1.475, lat: 43.4933, out_date: "1787-03-16", in_date: "", uncertainty: "observed" },
  { toponym: "Dunkerque", geo_id: "dunkerque", lon: 2.3772, lat: 51.0344, out_date: "1787-05-10", in_date: "", uncertainty: "observed" },
  { toponym: "Les Sables-d'Olonne", geo_id: "les_sables", lon: -1.7833, lat: 46.4969, out_date: "1787-06-18", in_date: "", uncertainty: "observed" },
  { toponym: "Bayonne", geo_id: "bayonne", lon: -1.475, lat: 43.4933, out_date: "1787-09-04", in_date: "", uncertainty: "observed" },
  { toponym: "Saint-Malo", geo_id: "saint_malo", lon: -2.0258, lat: 48.6493, out_date: "1787-10-08", in_date: "", uncertainty: "observed" },
  { toponym: "Saint-Brieuc", geo_id: "saint_brieuc", lon: -2.7653, lat: 48.5147, out_date: "1787-10-10", in_date: "", uncertainty: "unverifiable" },
  { toponym: "Côtes de Bretagne", geo_id: "cotes_bretagne", lon: -3.5, lat: 48.8, out_date: "", in_date: "", uncertainty: "unverifiable" },
];

const SEGMENT_UNCERTAINTY: Array<0 | -1> = [0, 0, 0, 0, 0, -1, -1];

export function tableOneItinerary(): ItineraryCollection {
  const features: Array<SegmentFeature | StopFeature> = [];
  for (let i = 0; i < STOPS.length - 1; i++) {
    const a = STOPS[i]!;
    const b = STOPS[i + 1]!;
    const u = SEGMENT_UNCERTAINTY[i]!;
    features.push({
      type: "Feature",
      geometry: {
        type: "LineString",
        coordinates: [[a.lon, a.lat], [b.lon, b.lat]],
      },
      properties: {
        ship_id: "0002931N",
        ship_name: "Fidèle Mariane",
        captain: "CPT0101",
        departure_iso: a.out_date,
        arrival_iso: "",
        travel_uncertainty: u,
        color: u === 0 ? "green" : "grey",
        direct: true,
        tonnage: "85",
        flag: "français",
      },
    });
  }
  for (const s of STOPS) {
    features.push({
      type: "Feature",
      geometry: { type: "Point", coordinates: [s.lon, s.lat] },
      properties: {
        toponym: s.toponym,
        geo_id: s.geo_id,
        uncertainty: s.uncertainty,
        in_date: s.in_date,
        out_date: s.out_date,
        lat: s.lat,
      },
    });
  }
  return { type: "FeatureCollection", ship_id: "0002931N", features };
}

export function summaryFor(shipId: string) {
  return {
    ship_id: shipId,
    ship_name: `Ship ${shipId}`,
    captain: "C",
    first_date: "1787-01-01",
    last_date: "1787-12-01",
    stop_count: 4,
    worst_travel_uncertainty: -1,
  };
}
