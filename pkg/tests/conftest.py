"""Shared fixtures: synthetic coastlines and independent geometry oracles.

The oracles are deliberately naive re-implementations (no spatial index,
no shared helpers) used to verify the production predicates.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest

from cabotage.geo import (
    KM_PER_DEG,
    CoastIndex,
    GeoPoint,
    LandPolygon,
)

DATA_DIR = Path(__file__).parent / "data"


# ---------------------------------------------------------------------------
# polygon builders
# ---------------------------------------------------------------------------

def square_island(center_lon: float, center_lat: float, side_km: float,
                  poly_id: str = "island") -> LandPolygon:
    half_lat = side_km / 2.0 / KM_PER_DEG
    half_lon = half_lat / math.cos(math.radians(center_lat))
    ring = (
        GeoPoint(center_lon - half_lon, center_lat - half_lat),
        GeoPoint(center_lon + half_lon, center_lat - half_lat),
        GeoPoint(center_lon + half_lon, center_lat + half_lat),
        GeoPoint(center_lon - half_lon, center_lat + half_lat),
        GeoPoint(center_lon - half_lon, center_lat - half_lat),
    )
    return LandPolygon(id=poly_id, ring=ring, area_km2=side_km * side_km)


def blob_island(center_lon: float, center_lat: float, radius_km: float,
                n_vertices: int, rng: np.random.Generator,
                poly_id: str) -> LandPolygon:
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n_vertices))
    radii = radius_km * rng.uniform(0.6, 1.0, size=n_vertices)
    kx = math.cos(math.radians(center_lat))
    pts = []
    for ang, rad in zip(angles, radii):
        lon = center_lon + rad * math.cos(ang) / KM_PER_DEG / kx
        lat = center_lat + rad * math.sin(ang) / KM_PER_DEG
        pts.append(GeoPoint(lon, lat))
    pts.append(pts[0])
    # shoelace in local km for the declared area
    area = 0.0
    for a, b in zip(pts, pts[1:]):
        area += (a.lon * kx * KM_PER_DEG) * (b.lat * KM_PER_DEG) \
            - (b.lon * kx * KM_PER_DEG) * (a.lat * KM_PER_DEG)
    return LandPolygon(id=poly_id, ring=tuple(pts), area_km2=abs(area) / 2.0)


@pytest.fixture(scope="session")
def square_20km() -> CoastIndex:
    return CoastIndex([square_island(0.0, 45.0, 20.0, "sq20")])


@pytest.fixture(scope="session")
def straight_coast() -> CoastIndex:
    """A continent filling lon < 0 at mid latitudes; coast on the meridian."""
    ring = (
        GeoPoint(-10.0, 40.0),
        GeoPoint(0.0, 40.0),
        GeoPoint(0.0, 50.0),
        GeoPoint(-10.0, 50.0),
        GeoPoint(-10.0, 40.0),
    )
    return CoastIndex([LandPolygon(id="mainland", ring=ring, area_km2=880_000.0)])


@pytest.fixture(scope="session")
def wide_continent() -> CoastIndex:
    """500 km wide landmass; its centre is far beyond any snap budget."""
    half = 250.0 / KM_PER_DEG
    ring = (
        GeoPoint(20.0 - half / math.cos(math.radians(45.0)), 45.0 - half),
        GeoPoint(20.0 + half / math.cos(math.radians(45.0)), 45.0 - half),
        GeoPoint(20.0 + half / math.cos(math.radians(45.0)), 45.0 + half),
        GeoPoint(20.0 - half / math.cos(math.radians(45.0)), 45.0 + half),
        GeoPoint(20.0 - half / math.cos(math.radians(45.0)), 45.0 - half),
    )
    return CoastIndex([LandPolygon(id="continent", ring=ring, area_km2=250_000.0)])


@pytest.fixture(scope="session")
def isthmus() -> CoastIndex:
    """Two coastal blocks joined by a 3 km wide land bridge."""
    ring = (
        GeoPoint(-0.6, 44.8),
        GeoPoint(-0.2, 44.8),
        GeoPoint(-0.2, 44.9865),
        GeoPoint(0.2, 44.9865),
        GeoPoint(0.2, 44.8),
        GeoPoint(0.6, 44.8),
        GeoPoint(0.6, 45.2),
        GeoPoint(0.2, 45.2),
        GeoPoint(0.2, 45.0135),
        GeoPoint(-0.2, 45.0135),
        GeoPoint(-0.2, 45.2),
        GeoPoint(-0.6, 45.2),
        GeoPoint(-0.6, 44.8),
    )
    return CoastIndex([LandPolygon(id="isthmus", ring=ring, area_km2=2800.0)])


def archipelago_polygons(seed: int = 42) -> list[LandPolygon]:
    """Deterministic archipelago: 20+ islands incl. three sub-1 km2 islets."""
    rng = np.random.default_rng(seed)
    polys: list[LandPolygon] = []
    cells = [(i, j) for i in range(5) for j in range(4)]
    for n, (i, j) in enumerate(cells):
        lon = 0.8 + i * 1.5 + rng.uniform(-0.35, 0.35)
        lat = 42.7 + j * 1.3 + rng.uniform(-0.3, 0.3)
        if n < 3:
            poly = blob_island(lon, lat, rng.uniform(0.35, 0.5), 8, rng,
                               f"islet_{n}")
        else:
            poly = blob_island(lon, lat, rng.uniform(6.0, 28.0),
                               int(rng.integers(6, 13)), rng, f"isle_{n}")
        polys.append(poly)
    return polys


@pytest.fixture(scope="session")
def archipelago() -> CoastIndex:
    return CoastIndex(archipelago_polygons())


def brittany_polygon() -> LandPolygon:
    """Synthetic north-Brittany shoreline with a headland between the two
    harbours, land to the south."""
    ring = (
        GeoPoint(-1.80, 48.62),
        GeoPoint(-2.0258, 48.6493),   # Saint-Malo sits on this vertex
        GeoPoint(-2.15, 48.60),
        GeoPoint(-2.30, 48.85),       # headland
        GeoPoint(-2.50, 48.80),
        GeoPoint(-2.60, 48.58),
        GeoPoint(-2.7653, 48.5147),   # Saint-Brieuc sits on this vertex
        GeoPoint(-3.10, 48.55),
        GeoPoint(-3.10, 47.90),
        GeoPoint(-1.80, 47.90),
        GeoPoint(-1.80, 48.62),
    )
    return LandPolygon(id="brittany", ring=ring, area_km2=7000.0)


@pytest.fixture(scope="session")
def brittany_coast() -> CoastIndex:
    return CoastIndex([brittany_polygon()])


def sea_point(rng: np.random.Generator, index: CoastIndex,
              lon_range=(0.2, 7.8), lat_range=(42.2, 47.8)) -> GeoPoint:
    from cabotage.geo import point_on_land

    while True:
        p = GeoPoint(rng.uniform(*lon_range), rng.uniform(*lat_range))
        if not point_on_land(p, index):
            return p


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

ORACLE_EPS = 1e-9


def oracle_point_in_ring(px: float, py: float, ring) -> bool:
    """Crossing-count containment; boundary points count as inside."""
    pts = [(p.lon, p.lat) for p in ring]
    if pts[0] == pts[-1]:
        pts = pts[:-1]
    n = len(pts)
    inside = False
    jj = n - 1
    for ii in range(n):
        x1, y1 = pts[ii]
        x2, y2 = pts[jj]
        if _oracle_on_segment(px, py, x1, y1, x2, y2):
            return True
        if (y1 < py <= y2) or (y2 < py <= y1):
            xc = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if xc > px:
                inside = not inside
        jj = ii
    return inside


def _oracle_on_segment(px, py, x1, y1, x2, y2) -> bool:
    lx, ly = x2 - x1, y2 - y1
    wx, wy = px - x1, py - y1
    seg2 = lx * lx + ly * ly
    if seg2 == 0.0:
        return math.hypot(wx, wy) <= ORACLE_EPS
    t = max(0.0, min(1.0, (wx * lx + wy * ly) / seg2))
    return math.hypot(wx - t * lx, wy - t * ly) <= ORACLE_EPS


def oracle_point_on_land(p: GeoPoint, index: CoastIndex,
                         apply_island_filter: bool = True) -> bool:
    for poly in index.polygons:
        if apply_island_filter and poly.area_km2 < index.min_island_area_km2:
            continue
        if oracle_point_in_ring(p.lon, p.lat, poly.ring):
            return True
    return False


def _oracle_segments_cross(ax, ay, bx, by, cx, cy, dx, dy) -> bool:
    def orient(ox, oy, qx, qy, rx, ry):
        return (qx - ox) * (ry - oy) - (qy - oy) * (rx - ox)

    d1 = orient(ax, ay, bx, by, cx, cy)
    d2 = orient(ax, ay, bx, by, dx, dy)
    d3 = orient(cx, cy, dx, dy, ax, ay)
    d4 = orient(cx, cy, dx, dy, bx, by)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and \
            ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return (_oracle_on_segment(cx, cy, ax, ay, bx, by)
            or _oracle_on_segment(dx, dy, ax, ay, bx, by)
            or _oracle_on_segment(ax, ay, cx, cy, dx, dy)
            or _oracle_on_segment(bx, by, cx, cy, dx, dy))


def oracle_segment_intersects_land(a: GeoPoint, b: GeoPoint,
                                   index: CoastIndex) -> bool:
    """Exhaustive every-edge test plus whole-inside containment check."""
    mid = GeoPoint(0.5 * (a.lon + b.lon), 0.5 * (a.lat + b.lat))
    for poly in index.polygons:
        if poly.area_km2 < index.min_island_area_km2:
            continue
        ring = [(p.lon, p.lat) for p in poly.ring]
        crossed = False
        for (x1, y1), (x2, y2) in zip(ring, ring[1:]):
            if _oracle_segments_cross(a.lon, a.lat, b.lon, b.lat,
                                      x1, y1, x2, y2):
                crossed = True
                break
        if crossed:
            return True
        if oracle_point_in_ring(mid.lon, mid.lat, poly.ring):
            return True
    return False


def oracle_path_is_simple(points) -> bool:
    """Quadratic pairwise check: no two non-adjacent segments meet."""
    coords = [(p.lon, p.lat) for p in points]
    segs = list(zip(coords, coords[1:]))
    for i in range(len(segs)):
        for j in range(i + 2, len(segs)):
            (ax, ay), (bx, by) = segs[i]
            (cx, cy), (dx, dy) = segs[j]
            if _oracle_segments_cross(ax, ay, bx, by, cx, cy, dx, dy):
                return False
    return True


def oracle_spherical_area_km2(ring) -> float:
    """Fan triangulation with per-triangle spherical excess (L'Huilier)."""
    from cabotage.geo import EARTH_RADIUS_KM

    pts = [(math.radians(p.lon), math.radians(p.lat)) for p in ring]
    if pts[0] == pts[-1]:
        pts = pts[:-1]

    def angular_dist(p, q):
        (l1, f1), (l2, f2) = p, q
        h = math.sin((f2 - f1) / 2) ** 2 \
            + math.cos(f1) * math.cos(f2) * math.sin((l2 - l1) / 2) ** 2
        return 2.0 * math.asin(min(1.0, math.sqrt(h)))

    total = 0.0
    for i in range(1, len(pts) - 1):
        a = angular_dist(pts[0], pts[i])
        b = angular_dist(pts[i], pts[i + 1])
        c = angular_dist(pts[i + 1], pts[0])
        s = (a + b + c) / 2.0
        inner = max(0.0, math.tan(s / 2) * math.tan((s - a) / 2)
                    * math.tan((s - b) / 2) * math.tan((s - c) / 2))
        excess = 4.0 * math.atan(math.sqrt(inner))
        # orientation of the planar triangle gives the sign
        (x0, y0), (x1, y1), (x2, y2) = pts[0], pts[i], pts[i + 1]
        sign = 1.0 if (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0) > 0 else -1.0
        total += sign * excess
    return abs(total) * EARTH_RADIUS_KM * EARTH_RADIUS_KM


def route_is_land_free(path, index: CoastIndex) -> bool:
    """Brute-force oracle over every consecutive pair of a route path."""
    pts = list(path)
    for u, v in zip(pts, pts[1:]):
        if u == v:
            continue
        if oracle_segment_intersects_land(u, v, index):
            return False
    return True
