"""Dataset loading and validation, plus the persistent route cache.

Coastlines are accepted both as polygon shapefiles (the shoreline
database layout: land-level polygons in WGS84) and as GeoJSON
FeatureCollections of polygons carrying an ``area_km2`` property, computed
at load when absent. Loading is idempotent and the loaded structures are
immutable afterwards.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import struct
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .dates import parse_flexdate
from .errors import (
    BadCoordinates,
    CorruptFile,
    DuplicateId,
    MalformedDate,
    SchemaMismatch,
    UnsupportedGeometry,
)
from .geo import EARTH_RADIUS_KM, CoastIndex, GeoPoint, LandPolygon, Polyline
from .itinerary import VALID_FUNCTION, VALID_MARKER, VALID_STATUS, Pointcall
from .pathfinder import RouteResult

GAZETTEER_HEADER = ["geo_id", "toponym", "lon", "lat", "admin_unit", "kind"]
GAZETTEER_KINDS = ("port", "zone", "strait", "other")

POINTCALL_HEADER = [
    "data_block_local_id", "ship_id", "ship_name", "captain_id", "toponym",
    "geo_id", "out_date", "in_date", "rank", "function", "status",
    "historian_marker", "tonnage", "flag", "homeport",
]


@dataclass(frozen=True)
class GazetteerEntry:
    geo_id: str
    toponym: str
    lon: float
    lat: float
    admin_unit: str = ""
    kind: str = "port"


@dataclass(frozen=True)
class DatasetFingerprint:
    content_hash: str
    resolution: str


@dataclass
class IngestReport:
    total_rows: int = 0
    loaded: int = 0
    quarantined: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class CoastLoadReport:
    polygon_count: int
    filtered_count: int
    fingerprint: DatasetFingerprint


# ---------------------------------------------------------------------------
# spherical surface area
# ---------------------------------------------------------------------------

def spherical_polygon_area_km2(ring) -> float:
    """Area of a lon/lat ring on the mean sphere (trapezoid sum formula)."""
    pts = [(math.radians(p[0]), math.radians(p[1])) for p in ring]
    if pts[0] == pts[-1]:
        pts = pts[:-1]
    total = 0.0
    n = len(pts)
    for i in range(n):
        lam1, phi1 = pts[i]
        lam2, phi2 = pts[(i + 1) % n]
        dlam = lam2 - lam1
        if dlam > math.pi:
            dlam -= 2.0 * math.pi
        elif dlam < -math.pi:
            dlam += 2.0 * math.pi
        total += dlam * (2.0 + math.sin(phi1) + math.sin(phi2))
    return abs(total) * EARTH_RADIUS_KM * EARTH_RADIUS_KM / 2.0


# ---------------------------------------------------------------------------
# coastline
# ---------------------------------------------------------------------------

def load_coastline(path, min_island_area_km2: float = 1.0) -> tuple[CoastIndex, CoastLoadReport]:
    """Build a CoastIndex from a polygon shapefile or a GeoJSON file."""
    path = Path(path)
    data = path.read_bytes()
    if path.suffix.lower() == ".shp":
        rings = _read_shapefile(data)
    else:
        rings = _read_geojson(data)
    polygons = []
    for poly_id, ring, area in rings:
        if ring[0] != ring[-1]:
            ring = ring + [ring[0]]  # close the ring; no further repair
        if area is None:
            area = spherical_polygon_area_km2(ring)
        polygons.append(LandPolygon(
            id=poly_id,
            ring=tuple(GeoPoint(x, y) for x, y in ring),
            area_km2=area,
        ))
    index = CoastIndex(polygons, min_island_area_km2=min_island_area_km2)
    fingerprint = DatasetFingerprint(
        content_hash=hashlib.sha256(data).hexdigest(),
        resolution=path.stem,
    )
    report = CoastLoadReport(
        polygon_count=index.polygon_count,
        filtered_count=index.filtered_count,
        fingerprint=fingerprint,
    )
    return index, report


def _read_geojson(data: bytes):
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptFile(f"not valid GeoJSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise UnsupportedGeometry("expected a GeoJSON FeatureCollection")
    rings = []
    for i, feature in enumerate(doc.get("features", [])):
        geom = feature.get("geometry") or {}
        gtype = geom.get("type")
        props = feature.get("properties") or {}
        area = props.get("area_km2")
        base_id = str(props.get("id", f"feature_{i}"))
        if gtype == "Polygon":
            parts = [geom["coordinates"]]
        elif gtype == "MultiPolygon":
            parts = geom["coordinates"]
        else:
            raise UnsupportedGeometry(f"feature {i} has geometry {gtype!r}, "
                                      "only polygons are supported")
        for j, rings_of_part in enumerate(parts):
            if not rings_of_part:
                raise CorruptFile(f"feature {i} has an empty polygon")
            try:
                outer = [(float(pt[0]), float(pt[1])) for pt in rings_of_part[0]]
            except (TypeError, ValueError, IndexError) as exc:
                raise CorruptFile(f"feature {i}: bad coordinates: {exc}") from exc
            poly_id = base_id if len(parts) == 1 else f"{base_id}:{j}"
            # inner rings (holes) of land polygons are not modelled
            rings.append((poly_id, outer, area if len(parts) == 1 else None))
    return rings


def _read_shapefile(data: bytes):
    """Minimal reader for polygon (type 5) shapefiles."""
    if len(data) < 100:
        raise CorruptFile("shapefile shorter than its header")
    try:
        (magic,) = struct.unpack_from(">i", data, 0)
        (shape_type,) = struct.unpack_from("<i", data, 32)
    except struct.error as exc:
        raise CorruptFile(str(exc)) from exc
    if magic != 9994:
        raise CorruptFile("bad shapefile magic number")
    if shape_type not in (0, 5):
        raise UnsupportedGeometry(f"shapefile type {shape_type} is not polygon")
    rings = []
    pos = 100
    try:
        while pos + 8 <= len(data):
            recno, content_words = struct.unpack_from(">ii", data, pos)
            pos += 8
            rec_end = pos + content_words * 2
            (rtype,) = struct.unpack_from("<i", data, pos)
            if rtype == 0:  # null shape
                pos = rec_end
                continue
            if rtype != 5:
                raise UnsupportedGeometry(f"record {recno} has type {rtype}")
            numparts, numpoints = struct.unpack_from("<ii", data, pos + 36)
            parts = struct.unpack_from(f"<{numparts}i", data, pos + 44)
            coords = struct.unpack_from(f"<{numpoints * 2}d", data, pos + 44 + 4 * numparts)
            pts = [(coords[2 * k], coords[2 * k + 1]) for k in range(numpoints)]
            bounds = list(parts) + [numpoints]
            for pi in range(numparts):
                ring = pts[bounds[pi]:bounds[pi + 1]]
                if len(ring) < 4:
                    continue
                if _planar_signed_area(ring) > 0:
                    continue  # counterclockwise rings are holes
                rings.append((f"{recno}:{pi}", ring, None))
            pos = rec_end
    except struct.error as exc:
        raise CorruptFile(f"truncated shapefile record: {exc}") from exc
    return rings


def _planar_signed_area(ring) -> float:
    total = 0.0
    n = len(ring) - 1 if ring[0] == ring[-1] else len(ring)
    for i in range(n):
        x1, y1 = ring[i]
        x2, y2 = ring[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return total


# ---------------------------------------------------------------------------
# gazetteer
# ---------------------------------------------------------------------------

def load_gazetteer(path) -> dict[str, GazetteerEntry]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch("gazetteer file is empty") from None
        if header != GAZETTEER_HEADER:
            raise SchemaMismatch(
                f"gazetteer header {header} != {GAZETTEER_HEADER}")
        entries: dict[str, GazetteerEntry] = {}
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            geo_id, toponym, lon_s, lat_s, admin_unit, kind = row
            if geo_id in entries:
                raise DuplicateId(f"row {row_no}: duplicate geo_id {geo_id!r}")
            try:
                lon, lat = float(lon_s), float(lat_s)
            except ValueError as exc:
                raise BadCoordinates(f"row {row_no}: {exc}") from exc
            if not (-180.0 <= lon <= 180.0) or not (-90.0 <= lat <= 90.0):
                raise BadCoordinates(
                    f"row {row_no}: ({lon}, {lat}) outside WGS84 ranges")
            if kind not in GAZETTEER_KINDS:
                raise SchemaMismatch(f"row {row_no}: unknown kind {kind!r}")
            entries[geo_id] = GazetteerEntry(
                geo_id=geo_id, toponym=toponym, lon=lon, lat=lat,
                admin_unit=admin_unit, kind=kind)
    return entries


# ---------------------------------------------------------------------------
# pointcalls
# ---------------------------------------------------------------------------

def load_pointcalls(path, gazetteer: dict[str, GazetteerEntry],
                    ) -> tuple[list[Pointcall], IngestReport]:
    """Parse the stopover table; rows that cannot be trusted are quarantined
    with their row number, never silently dropped."""
    path = Path(path)
    report = IngestReport()
    staged: list[tuple[int, Pointcall]] = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaMismatch("pointcall file is empty") from None
        if header != POINTCALL_HEADER:
            raise SchemaMismatch(
                f"pointcall header {header} != {POINTCALL_HEADER}")
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            report.total_rows += 1
            try:
                staged.append((row_no, _parse_pointcall_row(row, gazetteer)))
            except (MalformedDate, ValueError) as exc:
                report.quarantined.append((row_no, str(exc)))

    # structural checks per document: contiguous unique ranks, single
    # observation point
    by_doc: dict[str, list[tuple[int, Pointcall]]] = {}
    for row_no, pc in staged:
        by_doc.setdefault(pc.data_block_local_id, []).append((row_no, pc))
    records: list[Pointcall] = []
    for doc_id, rows in by_doc.items():
        ranks = sorted(pc.rank for _, pc in rows)
        o_count = sum(1 for _, pc in rows if pc.function == "O")
        problem = None
        if ranks != list(range(1, len(ranks) + 1)):
            problem = f"document {doc_id}: ranks {ranks} not contiguous from 1"
        elif o_count > 1:
            problem = f"document {doc_id}: {o_count} observation points"
        if problem:
            report.quarantined.extend((row_no, problem) for row_no, _ in rows)
        else:
            records.extend(pc for _, pc in rows)

    records.sort(key=lambda pc: (pc.ship_id, pc.data_block_local_id, pc.rank))
    report.loaded = len(records)
    report.quarantined.sort()
    return records, report


def _parse_pointcall_row(row: list[str], gazetteer) -> Pointcall:
    if len(row) != len(POINTCALL_HEADER):
        raise ValueError(f"expected {len(POINTCALL_HEADER)} cells, got {len(row)}")
    (doc_id, ship_id, ship_name, captain_id, toponym, geo_id, out_s, in_s,
     rank_s, function, status, historian, tonnage, flag, homeport) = (
        cell.strip() for cell in row)
    if geo_id not in gazetteer:
        raise ValueError(f"unknown geo_id {geo_id!r}")
    if status not in VALID_STATUS:
        raise ValueError(f"invalid status {status!r}")
    if function not in VALID_FUNCTION:
        raise ValueError(f"invalid function {function!r}")
    if historian not in VALID_MARKER:
        raise ValueError(f"invalid historian marker {historian!r}")
    try:
        rank = int(rank_s)
    except ValueError as exc:
        raise ValueError(f"bad rank {rank_s!r}") from exc
    attributes = {}
    if tonnage:
        attributes["tonnage"] = tonnage
    if flag:
        attributes["flag"] = flag
    if homeport:
        attributes["homeport"] = homeport
    return Pointcall(
        data_block_local_id=doc_id,
        ship_id=ship_id,
        ship_name=ship_name,
        captain_id=captain_id,
        toponym=toponym,
        geo_id=geo_id,
        out_date=parse_flexdate(out_s),
        in_date=parse_flexdate(in_s),
        rank=rank,
        function=function,
        status=status,
        historian_marker=historian,
        attributes=attributes,
    )


# ---------------------------------------------------------------------------
# route cache
# ---------------------------------------------------------------------------

class RouteCache:
    """Append-only store of computed routes.

    Keyed by (from_geo_id, to_geo_id, coastline fingerprint); entries for a
    stale fingerprint simply stop matching. Writes are serialized, reads
    are lock-free on an immutable snapshot per key.
    """

    def __init__(self, path=None):
        self._path = Path(path) if path is not None else None
        self._records: dict[tuple[str, str, str], dict] = {}
        self._lock = threading.Lock()
        if self._path is not None and self._path.exists():
            with self._path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    key = (rec["from_geo_id"], rec["to_geo_id"], rec["fingerprint"])
                    self._records[key] = rec

    def __len__(self):
        return len(self._records)

    def get(self, from_geo_id: str, to_geo_id: str, fingerprint: str) -> RouteResult | None:
        rec = self._records.get((from_geo_id, to_geo_id, fingerprint))
        if rec is None:
            return None
        return RouteResult(
            path=Polyline(tuple(GeoPoint(x, y) for x, y in rec["path"])),
            offset_used_km=rec["offset_used_km"],
            spacing_used_km=rec["spacing_used_km"],
            duration_ms=rec["duration_ms"],
            recursion_depth_reached=rec["recursion_depth_reached"],
            point_count=rec["point_count"],
            cache_hit=True,
        )

    def put(self, from_geo_id: str, to_geo_id: str, fingerprint: str,
            result: RouteResult) -> None:
        rec = {
            "from_geo_id": from_geo_id,
            "to_geo_id": to_geo_id,
            "fingerprint": fingerprint,
            "path": [[p.lon, p.lat] for p in result.path],
            "offset_used_km": result.offset_used_km,
            "spacing_used_km": result.spacing_used_km,
            "duration_ms": result.duration_ms,
            "recursion_depth_reached": result.recursion_depth_reached,
            "point_count": result.point_count,
        }
        with self._lock:
            self._records[(from_geo_id, to_geo_id, fingerprint)] = rec
            if self._path is not None:
                with self._path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
