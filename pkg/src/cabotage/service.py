"""Query layer over a loaded corpus, and the HTTP API serving it.

The corpus snapshot is immutable once built: every response is a pure
function of (snapshot, request), so repeated identical requests return
byte-identical bodies. Search answers are paged at 50 summaries with an
opaque cursor.
"""

from __future__ import annotations

import base64
from dataclasses import dataclass, field

from . import geojson
from .errors import (
    EmptyCriteria,
    TooManyItineraries,
    UnknownPlace,
    UnknownShip,
)
from .dates import flexdate_to_iso
from .geo import CoastIndex
from .ingest import GazetteerEntry
from .itinerary import (
    Pointcall,
    TravelSegment,
    collapse_retained_stops,
    qualify_ship,
)
from .pathfinder import RouteParams, RouteResult, route_between_stops

PAGE_SIZE = 50


@dataclass(frozen=True)
class ItineraryQuery:
    ship_id: str | None = None
    ship_name: str | None = None
    captain_id: str | None = None
    captain_name: str | None = None
    flag: str | None = None
    homeport: str | None = None
    tonnage_min: float | None = None
    tonnage_max: float | None = None
    date_from: str | None = None
    date_to: str | None = None

    def has_identity(self) -> bool:
        return any((self.ship_id, self.ship_name, self.captain_id,
                    self.captain_name))


@dataclass
class ShipView:
    """One ship's qualified itinerary inside a corpus snapshot."""

    ship_id: str
    ship_name: str
    captain: str
    sequence: list[Pointcall]
    stops: list
    segments: list[TravelSegment]
    attributes: dict = field(default_factory=dict)

    def first_date_iso(self) -> str:
        for pc in self.sequence:
            if pc.event_date().known:
                return flexdate_to_iso(pc.event_date())
        return ""

    def last_date_iso(self) -> str:
        for pc in reversed(self.sequence):
            if pc.event_date().known:
                return flexdate_to_iso(pc.event_date())
        return ""

    def worst_travel_uncertainty(self) -> int:
        return min((seg.travel_uncertainty for seg in self.segments), default=0)


class Corpus:
    """Immutable snapshot of gazetteer + qualified pointcall corpus."""

    def __init__(self, gazetteer: dict[str, GazetteerEntry],
                 records: list[Pointcall],
                 registry_ports: set[str] | None = None):
        self.gazetteer = dict(gazetteer)
        if registry_ports is None:
            # default: places hosting any observation point keep registers
            registry_ports = {pc.geo_id for pc in records if pc.function == "O"}
        self.registry_ports = set(registry_ports)
        by_ship: dict[str, list[Pointcall]] = {}
        for pc in records:
            by_ship.setdefault(pc.ship_id, []).append(pc)
        self.ships: dict[str, ShipView] = {}
        for ship_id in sorted(by_ship):
            recs = by_ship[ship_id]
            sequence, segments = qualify_ship(recs, self.registry_ports)
            obs = next((pc for pc in sequence if pc.function == "O"), sequence[0])
            self.ships[ship_id] = ShipView(
                ship_id=ship_id,
                ship_name=obs.ship_name,
                captain=obs.captain_id,
                sequence=sequence,
                stops=collapse_retained_stops(sequence),
                segments=segments,
                attributes=dict(obs.attributes),
            )

    def stats(self) -> dict:
        """Corpus-wide dashboard figures, incl. the inferred-leg share."""
        total = sum(len(v.segments) for v in self.ships.values())
        inferred = sum(1 for v in self.ships.values()
                       for seg in v.segments if not seg.direct)
        return {
            "ships": len(self.ships),
            "segments": total,
            "inferred_segments": inferred,
            "inferred_share": round(inferred / total, 4) if total else 0.0,
        }


class Router:
    """Route geometry resolution against a coastline, cache-backed."""

    def __init__(self, index: CoastIndex, gazetteer, cache=None,
                 params: RouteParams | None = None, reverse_reuse: bool = True):
        self.index = index
        self.gazetteer = gazetteer
        self.cache = cache
        self.params = params or RouteParams()
        self.reverse_reuse = reverse_reuse

    def route(self, from_geo_id: str, to_geo_id: str) -> RouteResult:
        return route_between_stops(from_geo_id, to_geo_id, self.index,
                                   self.gazetteer, self.cache, self.params,
                                   self.reverse_reuse)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def _matches_identity(view: ShipView, q: ItineraryQuery) -> bool:
    if q.ship_id and view.ship_id == q.ship_id:
        return True
    if q.ship_name and q.ship_name.lower() in view.ship_name.lower():
        return True
    if q.captain_id and view.captain == q.captain_id:
        return True
    # captains carry no separate name column: match names against the id
    if q.captain_name and q.captain_name.lower() in view.captain.lower():
        return True
    return False


def _matches_filters(view: ShipView, q: ItineraryQuery) -> bool:
    if q.flag and view.attributes.get("flag", "").lower() != q.flag.lower():
        return False
    if q.homeport and view.attributes.get("homeport", "").lower() != q.homeport.lower():
        return False
    if q.tonnage_min is not None or q.tonnage_max is not None:
        try:
            tonnage = float(view.attributes.get("tonnage", ""))
        except ValueError:
            return False
        if q.tonnage_min is not None and tonnage < q.tonnage_min:
            return False
        if q.tonnage_max is not None and tonnage > q.tonnage_max:
            return False
    if q.date_from and view.last_date_iso() and view.last_date_iso() < q.date_from:
        return False
    if q.date_to and view.first_date_iso() and view.first_date_iso() > q.date_to:
        return False
    return True


def search_itineraries(corpus: Corpus, query: ItineraryQuery) -> list[dict]:
    """Summaries of every ship matching the query, ordered by ship id."""
    if not query.has_identity():
        raise EmptyCriteria("at least one ship or captain criterion is required")
    out = []
    for ship_id in sorted(corpus.ships):
        view = corpus.ships[ship_id]
        if not _matches_identity(view, query):
            continue
        if not _matches_filters(view, query):
            continue
        out.append({
            "ship_id": view.ship_id,
            "ship_name": view.ship_name,
            "captain": view.captain,
            "first_date": view.first_date_iso(),
            "last_date": view.last_date_iso(),
            "stop_count": len(view.stops),
            "worst_travel_uncertainty": view.worst_travel_uncertainty(),
        })
    return out


def _segment_coordinates(segment: TravelSegment, corpus: Corpus,
                         router: Router | None):
    a = corpus.gazetteer.get(segment.from_stop.geo_id)
    b = corpus.gazetteer.get(segment.to_stop.geo_id)
    if a is None or b is None:
        raise UnknownPlace(segment.from_stop.geo_id if a is None
                           else segment.to_stop.geo_id)
    if router is None:
        return [[a.lon, a.lat], [b.lon, b.lat]], None
    result = router.route(segment.from_stop.geo_id, segment.to_stop.geo_id)
    return [[p.lon, p.lat] for p in result.path], result


def get_itinerary(corpus: Corpus, ship_id: str,
                  date_from: str | None = None, date_to: str | None = None,
                  router: Router | None = None) -> dict:
    """Full qualified itinerary of a ship as a GeoJSON FeatureCollection.

    One LineString feature per segment (chronological by departure), then
    one Point feature per stop.
    """
    view = corpus.ships.get(ship_id)
    if view is None:
        raise UnknownShip(f"unknown ship {ship_id!r}")
    segments = view.segments
    if date_from or date_to:
        kept = []
        for seg in segments:
            dep = flexdate_to_iso(seg.departure)
            if date_from and dep and dep < date_from:
                continue
            if date_to and dep and dep > date_to:
                continue
            kept.append(seg)
        segments = kept

    features = []
    for seg in segments:
        coords, _ = _segment_coordinates(seg, corpus, router)
        features.append(geojson.segment_feature(seg, view, coords))
    for stop in _stops_of(segments):
        entry = corpus.gazetteer[stop.geo_id]
        features.append(geojson.stop_feature(stop, entry))
    return geojson.feature_collection(features, ship_id=ship_id)


def _stops_of(segments):
    out = []
    for seg in segments:
        if not out:
            out.append(seg.from_stop)
        out.append(seg.to_stop)
    return out


def compare_itineraries(corpus: Corpus, ship_ids: list[str],
                        router: Router | None = None) -> dict:
    """At most two itineraries, each tagged for distinct client styling."""
    if len(ship_ids) > 2:
        raise TooManyItineraries(f"{len(ship_ids)} itineraries requested, "
                                 "the comparison view holds two")
    tracks = []
    for tag, ship_id in zip(("a", "b"), ship_ids):
        collection = get_itinerary(corpus, ship_id, router=router)
        for feature in collection["features"]:
            feature["properties"]["track"] = tag
        tracks.append({"track": tag, "ship_id": ship_id,
                       "collection": collection})
    return {"tracks": tracks}


# ---------------------------------------------------------------------------
# HTTP API
# ---------------------------------------------------------------------------

def _encode_cursor(offset: int) -> str:
    return base64.urlsafe_b64encode(f"o:{offset}".encode()).decode()


def _decode_cursor(cursor: str | None) -> int:
    if not cursor:
        return 0
    try:
        text = base64.urlsafe_b64decode(cursor.encode()).decode()
        assert text.startswith("o:")
        return int(text[2:])
    except Exception:
        return 0


def _page(summaries: list[dict], cursor: str | None) -> dict:
    offset = _decode_cursor(cursor)
    window = summaries[offset:offset + PAGE_SIZE]
    nxt = offset + PAGE_SIZE
    return {
        "items": window,
        "total": len(summaries),
        "next_cursor": _encode_cursor(nxt) if nxt < len(summaries) else None,
    }


def create_app(corpus: Corpus, router: Router | None = None):
    """FastAPI application over an immutable corpus snapshot."""
    from fastapi import FastAPI, HTTPException, Query
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import Response

    app = FastAPI(title="cabotage", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"],
        allow_headers=["*"],
    )

    def _json(payload: dict) -> Response:
        return Response(content=geojson.dumps(payload),
                        media_type="application/json")

    @app.get("/health")
    def health():
        return {"status": "ok", **corpus.stats()}

    @app.get("/ships")
    def ships(q: str = Query(default=""), flag: str | None = None,
              homeport: str | None = None,
              tonnage_min: float | None = None,
              tonnage_max: float | None = None,
              date_from: str | None = None, date_to: str | None = None,
              cursor: str | None = None):
        query = ItineraryQuery(ship_id=q or None, ship_name=q or None,
                               flag=flag, homeport=homeport,
                               tonnage_min=tonnage_min, tonnage_max=tonnage_max,
                               date_from=date_from, date_to=date_to)
        try:
            summaries = search_itineraries(corpus, query)
        except EmptyCriteria as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return _json(_page(summaries, cursor))

    @app.get("/captains")
    def captains(q: str = Query(default=""), cursor: str | None = None):
        query = ItineraryQuery(captain_id=q or None, captain_name=q or None)
        try:
            summaries = search_itineraries(corpus, query)
        except EmptyCriteria as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return _json(_page(summaries, cursor))

    @app.get("/itineraries/compare")
    def compare(a: str, b: str):
        try:
            return _json(compare_itineraries(corpus, [a, b], router))
        except UnknownShip as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except TooManyItineraries as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.get("/itineraries/{ship_id}")
    def itinerary(ship_id: str, date_from: str | None = None,
                  date_to: str | None = None):
        try:
            return _json(get_itinerary(corpus, ship_id, date_from, date_to,
                                       router))
        except UnknownShip as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.get("/route")
    def route(from_: str = Query(alias="from"), to: str = Query()):
        if router is None:
            raise HTTPException(status_code=503, detail="no coastline loaded")
        try:
            result = router.route(from_, to)
        except UnknownPlace as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return _json(geojson.route_feature(result))

    return app
