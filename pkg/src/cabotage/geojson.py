"""GeoJSON assembly for routes, itineraries and comparisons."""

from __future__ import annotations

import json

from .dates import flexdate_to_iso
from .pathfinder import RouteResult


def dumps(obj) -> str:
    """Deterministic serialization: sorted keys, compact separators."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":"))


def route_feature(result: RouteResult, extra: dict | None = None) -> dict:
    properties = {
        "offset_used_km": result.offset_used_km,
        "spacing_used_km": result.spacing_used_km,
        "duration_ms": result.duration_ms,
    }
    if extra:
        properties.update(extra)
    return {
        "type": "Feature",
        "geometry": {
            "type": "LineString",
            "coordinates": [[p.lon, p.lat] for p in result.path],
        },
        "properties": properties,
    }


def segment_feature(segment, ship_view, coordinates) -> dict:
    attrs = ship_view.attributes
    return {
        "type": "Feature",
        "geometry": {"type": "LineString", "coordinates": coordinates},
        "properties": {
            "ship_id": segment.ship_id,
            "ship_name": ship_view.ship_name,
            "captain": ship_view.captain,
            "departure_iso": flexdate_to_iso(segment.departure),
            "arrival_iso": flexdate_to_iso(segment.arrival) if segment.arrival else "",
            "travel_uncertainty": segment.travel_uncertainty,
            "color": segment.color,
            "direct": segment.direct,
            "tonnage": attrs.get("tonnage", ""),
            "flag": attrs.get("flag", ""),
        },
    }


def stop_feature(stop, entry) -> dict:
    return {
        "type": "Feature",
        "geometry": {"type": "Point", "coordinates": [entry.lon, entry.lat]},
        "properties": {
            "toponym": stop.toponym or entry.toponym,
            "geo_id": stop.geo_id,
            "uncertainty": stop.uncertainty.value,
            "in_date": flexdate_to_iso(stop.in_date),
            "out_date": flexdate_to_iso(stop.out_date),
            "lat": entry.lat,
        },
    }


def feature_collection(features: list[dict], **extra) -> dict:
    doc = {"type": "FeatureCollection", "features": features}
    doc.update(extra)
    return doc
