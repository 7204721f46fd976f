"""Reconstruction of 18th-century ship itineraries from uncertain records.

Qualifies the uncertainty of every stopover and voyage leg by explicit
rules, computes land-avoiding sea routes between stops, and serves the
results over HTTP for an interactive verification client.
"""

from .dates import FlexDate, flexdate_compare, flexdate_to_iso, parse_flexdate
from .geo import (
    CoastIndex,
    GeoPoint,
    LandPolygon,
    Polyline,
    coast_detour_points,
    haversine_distance,
    point_on_land,
    project_offshore,
    reflect_across_coast,
    segment_intersects_land,
)
from .ingest import (
    GazetteerEntry,
    RouteCache,
    load_coastline,
    load_gazetteer,
    load_pointcalls,
)
from .itinerary import (
    Pointcall,
    TravelSegment,
    UncertaintyLevel,
    build_segments,
    derive_travel_uncertainty,
    mark_route,
    order_pointcalls,
    qualify_pointcalls,
    qualify_ship,
)
from .pathfinder import (
    RouteParams,
    RouteResult,
    adapt_params,
    compute_sea_route,
    route_between_stops,
    simplify_remove_loops,
)
from .service import Corpus, ItineraryQuery, Router, create_app

__version__ = "0.1.0"

__all__ = [
    "CoastIndex",
    "Corpus",
    "FlexDate",
    "GazetteerEntry",
    "GeoPoint",
    "ItineraryQuery",
    "LandPolygon",
    "Pointcall",
    "Polyline",
    "RouteCache",
    "RouteParams",
    "RouteResult",
    "Router",
    "TravelSegment",
    "UncertaintyLevel",
    "adapt_params",
    "build_segments",
    "coast_detour_points",
    "compute_sea_route",
    "create_app",
    "derive_travel_uncertainty",
    "flexdate_compare",
    "flexdate_to_iso",
    "haversine_distance",
    "load_coastline",
    "load_gazetteer",
    "load_pointcalls",
    "mark_route",
    "order_pointcalls",
    "parse_flexdate",
    "point_on_land",
    "project_offshore",
    "qualify_pointcalls",
    "qualify_ship",
    "reflect_across_coast",
    "route_between_stops",
    "segment_intersects_land",
    "simplify_remove_loops",
]
