"""Coastline model, spatial predicates and the offshore/detour primitives.

All containment and intersection predicates work on straight segments in
lon/lat coordinate space, matching the representation of the source
polygons; distances are great-circle kilometres on the WGS84 mean sphere.
Points exactly on a polygon edge count as land, and segments touching an
edge count as intersecting.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import NoDetourFound, NoSeaFound

EARTH_RADIUS_KM = 6371.0088
KM_PER_DEG = math.pi * EARTH_RADIUS_KM / 180.0
EPS_DEG = 1e-9

DEFAULT_OFFSHORE_KM = 1.852  # one nautical mile off the coast
DEFAULT_MIN_ISLAND_AREA_KM2 = 1.0


@dataclass(frozen=True)
class GeoPoint:
    lon: float
    lat: float

    def __post_init__(self):
        object.__setattr__(self, "lon", float(self.lon))
        object.__setattr__(self, "lat", float(self.lat))
        if not (-180.0 <= self.lon <= 180.0) or not (-90.0 <= self.lat <= 90.0):
            raise ValueError(f"coordinates out of range: ({self.lon}, {self.lat})")


@dataclass(frozen=True)
class Polyline:
    """Ordered point sequence; consecutive points are distinct.

    The single exception is the two-point zero-length path produced when a
    route is requested from a place to itself.
    """

    points: tuple[GeoPoint, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ValueError("a polyline needs at least two points")
        if len(pts) == 2 and pts[0] == pts[1]:
            return  # degenerate route
        for prev, cur in zip(pts, pts[1:]):
            if prev == cur:
                raise ValueError("consecutive polyline points must be distinct")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def reversed(self) -> "Polyline":
        return Polyline(tuple(reversed(self.points)))


@dataclass(frozen=True)
class LandPolygon:
    """One land polygon: a closed ring and its surface area."""

    id: str
    ring: tuple[GeoPoint, ...]
    area_km2: float

    def __post_init__(self):
        ring = tuple(self.ring)
        object.__setattr__(self, "ring", ring)
        if len(ring) < 4:
            raise ValueError(f"polygon {self.id}: ring needs at least 3 distinct vertices")
        if ring[0] != ring[-1]:
            raise ValueError(f"polygon {self.id}: ring is not closed")
        if not self.area_km2 > 0:
            raise ValueError(f"polygon {self.id}: area must be positive")


def _canonical_key(poly: LandPolygon):
    lons = [p.lon for p in poly.ring]
    lats = [p.lat for p in poly.ring]
    return (min(lons), min(lats), max(lons), max(lats),
            poly.area_km2, len(poly.ring), poly.id)


class CoastIndex:
    """Immutable obstacle set: land polygons with flat edge arrays.

    Construction canonicalises polygon order so queries do not depend on
    insertion order. Polygons smaller than ``min_island_area_km2`` are
    skipped by every query that honours the island filter.
    """

    def __init__(self, polygons: Iterable[LandPolygon],
                 min_island_area_km2: float = DEFAULT_MIN_ISLAND_AREA_KM2):
        polys = tuple(sorted(polygons, key=_canonical_key))
        self.polygons = polys
        self.min_island_area_km2 = float(min_island_area_km2)

        rings: list[tuple[np.ndarray, np.ndarray]] = []
        starts = [0]
        ex1: list[float] = []
        ey1: list[float] = []
        ex2: list[float] = []
        ey2: list[float] = []
        bminx, bminy, bmaxx, bmaxy = [], [], [], []
        for poly in polys:
            xs = np.array([p.lon for p in poly.ring[:-1]], dtype=np.float64)
            ys = np.array([p.lat for p in poly.ring[:-1]], dtype=np.float64)
            keep = np.ones(len(xs), dtype=bool)
            keep[1:] = (xs[1:] != xs[:-1]) | (ys[1:] != ys[:-1])
            xs, ys = xs[keep], ys[keep]
            if _shoelace(xs, ys) < 0:  # normalise to counterclockwise
                xs, ys = xs[::-1].copy(), ys[::-1].copy()
            rings.append((xs, ys))
            nxt = np.roll(np.arange(len(xs)), -1)
            ex1.extend(xs)
            ey1.extend(ys)
            ex2.extend(xs[nxt])
            ey2.extend(ys[nxt])
            starts.append(starts[-1] + len(xs))
            bminx.append(xs.min())
            bminy.append(ys.min())
            bmaxx.append(xs.max())
            bmaxy.append(ys.max())

        self._rings = rings
        self._ex1 = np.asarray(ex1, dtype=np.float64)
        self._ey1 = np.asarray(ey1, dtype=np.float64)
        self._ex2 = np.asarray(ex2, dtype=np.float64)
        self._ey2 = np.asarray(ey2, dtype=np.float64)
        self._starts = np.asarray(starts, dtype=np.int64)
        self._bminx = np.asarray(bminx, dtype=np.float64)
        self._bminy = np.asarray(bminy, dtype=np.float64)
        self._bmaxx = np.asarray(bmaxx, dtype=np.float64)
        self._bmaxy = np.asarray(bmaxy, dtype=np.float64)
        self._areas = np.asarray([p.area_km2 for p in polys], dtype=np.float64)
        self._all_active = np.ones(len(polys), dtype=np.bool_)
        self._masks: dict[float, np.ndarray] = {}

        digest = hashlib.sha256()
        for arr in (self._ex1, self._ey1, self._ex2, self._ey2, self._areas):
            digest.update(arr.tobytes())
        self._fingerprint = digest.hexdigest()

    # -- introspection ------------------------------------------------------

    def __len__(self):
        return len(self.polygons)

    @property
    def fingerprint(self) -> str:
        return self._fingerprint

    @property
    def polygon_count(self) -> int:
        return len(self.polygons)

    @property
    def filtered_count(self) -> int:
        return int(np.count_nonzero(self._areas < self.min_island_area_km2))

    @property
    def edge_arrays(self):
        """(ex1, ey1, ex2, ey2, starts) flat arrays, read-only use."""
        return self._ex1, self._ey1, self._ex2, self._ey2, self._starts

    def mask(self, apply_island_filter: bool = True,
             min_island_area_km2: float | None = None) -> np.ndarray:
        if not apply_island_filter:
            return self._all_active
        thr = self.min_island_area_km2 if min_island_area_km2 is None else float(min_island_area_km2)
        got = self._masks.get(thr)
        if got is None:
            got = self._areas >= thr
            self._masks[thr] = got
        return got

    def _kernel_args(self):
        return (self._ex1, self._ey1, self._ex2, self._ey2, self._starts,
                self._bminx, self._bminy, self._bmaxx, self._bmaxy)

    def ring_of(self, poly_idx: int) -> tuple[np.ndarray, np.ndarray]:
        return self._rings[poly_idx]

    def polygon_of_edge(self, edge_idx: int) -> int:
        return int(np.searchsorted(self._starts, edge_idx, side="right") - 1)


def _shoelace(xs: np.ndarray, ys: np.ndarray) -> float:
    nxt = np.roll(np.arange(len(xs)), -1)
    return float(np.sum(xs * ys[nxt] - xs[nxt] * ys))


# ---------------------------------------------------------------------------
# metric helpers
# ---------------------------------------------------------------------------

def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in kilometres on the mean sphere."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = phi2 - phi1
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def _scale_at(lat: float) -> float:
    # guard: near the poles the lon scale collapses
    return max(math.cos(math.radians(lat)), 1e-6)


def _move(p: GeoPoint, ux: float, uy: float, km: float, kx: float) -> GeoPoint:
    dlon = ux * km / KM_PER_DEG / kx
    dlat = uy * km / KM_PER_DEG
    return GeoPoint(min(180.0, max(-180.0, p.lon + dlon)),
                    min(90.0, max(-90.0, p.lat + dlat)))


def midpoint(a: GeoPoint, b: GeoPoint) -> GeoPoint:
    return GeoPoint(0.5 * (a.lon + b.lon), 0.5 * (a.lat + b.lat))


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def point_on_land(p: GeoPoint, index: CoastIndex,
                  apply_island_filter: bool = True) -> bool:
    """True iff p lies inside or on the boundary of a land polygon."""
    if len(index) == 0:
        return False
    return bool(kernels.point_on_land_kernel(
        p.lon, p.lat, *index._kernel_args(),
        index.mask(apply_island_filter), EPS_DEG))


def segment_intersects_land(a: GeoPoint, b: GeoPoint, index: CoastIndex,
                            min_island_area_km2: float | None = None) -> bool:
    """True iff the segment (a,b) crosses or touches unfiltered land."""
    if len(index) == 0:
        return False
    return bool(kernels.segment_hits_land_kernel(
        a.lon, a.lat, b.lon, b.lat, *index._kernel_args(),
        index.mask(True, min_island_area_km2), EPS_DEG))


def nearest_coast_point(p: GeoPoint, index: CoastIndex,
                        apply_island_filter: bool = True,
                        min_island_area_km2: float | None = None):
    """Closest point on any active coastline edge.

    Returns (edge_index, point, distance_km); edge_index is -1 when the
    index holds no active polygon.
    """
    if len(index) == 0:
        return -1, p, math.inf
    kx = _scale_at(p.lat)
    idx, qx, qy, _ = kernels.nearest_edge_kernel(
        p.lon, p.lat, kx, *index.edge_arrays,
        index.mask(apply_island_filter, min_island_area_km2))
    if idx < 0:
        return -1, p, math.inf
    q = GeoPoint(qx, qy)
    return int(idx), q, haversine_distance(p, q)


def _edge_outward_normal(index: CoastIndex, edge_idx: int, kx: float):
    # rings are counterclockwise, so land lies left of travel: the outward
    # (sea-side) normal is the right-hand one
    ex1, ey1, ex2, ey2, _ = index.edge_arrays
    dx = (ex2[edge_idx] - ex1[edge_idx]) * kx
    dy = ey2[edge_idx] - ey1[edge_idx]
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return 1.0, 0.0
    return dy / norm, -dx / norm


def _rotate(ux: float, uy: float, degrees: float):
    r = math.radians(degrees)
    c, s = math.cos(r), math.sin(r)
    return ux * c - uy * s, ux * s + uy * c


# ---------------------------------------------------------------------------
# offshore projection and land-escape
# ---------------------------------------------------------------------------

_BEARING_SCHEDULE = (0.0, 30.0, -30.0, 60.0, -60.0, 90.0, -90.0,
                     120.0, -120.0, 150.0, -150.0, 180.0)


def project_offshore(p: GeoPoint, index: CoastIndex,
                     offshore_km: float = DEFAULT_OFFSHORE_KM,
                     max_snap_km: float = 100.0,
                     max_retries: int = 36) -> GeoPoint:
    """Push a port location out to sea, ``offshore_km`` from the coast.

    A point already at sea and at least ``offshore_km`` from every coast is
    returned unchanged. Raises NoSeaFound for landlocked inputs (nearest
    coast beyond ``max_snap_km``) or when no candidate bearing reaches open
    water within the retry budget.
    """
    on_land = point_on_land(p, index)
    edge_idx, q, dist = nearest_coast_point(p, index)
    if edge_idx < 0:
        return p
    if not on_land and dist >= offshore_km * (1.0 - 1e-9):
        return p
    if dist > max_snap_km:
        raise NoSeaFound(f"nearest coast is {dist:.1f} km away, beyond the "
                         f"{max_snap_km:.1f} km search budget")
    kx = _scale_at(q.lat)
    if on_land or dist < 1e-9:
        ux, uy = _edge_outward_normal(index, edge_idx, kx)
    else:
        ux = (p.lon - q.lon) * kx
        uy = p.lat - q.lat
        norm = math.hypot(ux, uy)
        ux, uy = ux / norm, uy / norm

    tol = 0.05 * offshore_km
    tried = 0
    for bearing in _BEARING_SCHEDULE:
        if tried >= max_retries:
            break
        dx, dy = _rotate(ux, uy, bearing)
        t = offshore_km
        for _ in range(6):
            tried += 1
            cand = _move(q, dx, dy, t, kx)
            if point_on_land(cand, index):
                break
            _, _, d = nearest_coast_point(cand, index)
            if abs(d - offshore_km) <= tol:
                return cand
            if d <= 0.0:
                break
            t *= offshore_km / d
    raise NoSeaFound(f"no offshore point at {offshore_km} km found around "
                     f"({p.lon:.4f}, {p.lat:.4f})")


def reflect_across_coast(p: GeoPoint, index: CoastIndex,
                         rng: np.random.Generator,
                         max_retries: int = 64) -> GeoPoint:
    """Mirror a land-bound point across the nearest coastline edge.

    When the mirror image is still on land, draws uniformly-directed
    displacements around it, doubling the amplitude every 8 failed draws;
    the outcome is fully determined by the generator state. Raises
    NoSeaFound once retries are exhausted.
    """
    if not point_on_land(p, index):
        raise ValueError("reflect_across_coast requires a point on land")
    edge_idx, q, dist = nearest_coast_point(p, index)
    kx = _scale_at(q.lat)

    ex1, ey1, ex2, ey2, _ = index.edge_arrays
    x1, y1 = ex1[edge_idx] * kx, ey1[edge_idx]
    x2, y2 = ex2[edge_idx] * kx, ey2[edge_idx]
    px, py = p.lon * kx, p.lat
    dx, dy = x2 - x1, y2 - y1
    dd = dx * dx + dy * dy
    if dd > 0.0:
        t = ((px - x1) * dx + (py - y1) * dy) / dd
        fx, fy = x1 + t * dx, y1 + t * dy
    else:
        fx, fy = x1, y1
    mirror = GeoPoint(min(180.0, max(-180.0, (2.0 * fx - px) / kx)),
                      min(90.0, max(-90.0, 2.0 * fy - py)))
    if not point_on_land(mirror, index):
        return mirror

    amp0 = max(dist, 0.5)
    for k in range(max_retries):
        amp = amp0 * (2.0 ** (k // 8))
        theta = rng.uniform(0.0, 2.0 * math.pi)
        cand = _move(mirror, math.cos(theta), math.sin(theta), amp, kx)
        if not point_on_land(cand, index):
            return cand
    raise NoSeaFound(f"no sea point found in {max_retries} draws around "
                     f"({p.lon:.4f}, {p.lat:.4f})")


# ---------------------------------------------------------------------------
# coast detours
# ---------------------------------------------------------------------------

def _polygon_crossings(a: GeoPoint, b: GeoPoint, index: CoastIndex,
                       active: np.ndarray):
    """Boundary crossings of segment (a,b), grouped per polygon.

    Returns a list of (poly_idx, (t_enter, edge, u), (t_exit, edge, u))
    sorted by entry parameter along a->b.
    """
    ex1, ey1, ex2, ey2, starts = index.edge_arrays
    ax, ay, bx, by = a.lon, a.lat, b.lon, b.lat
    rx, ry = bx - ax, by - ay
    out = []
    for pi in range(len(index)):
        if not active[pi]:
            continue
        if (max(ax, bx) < index._bminx[pi] or min(ax, bx) > index._bmaxx[pi]
                or max(ay, by) < index._bminy[pi] or min(ay, by) > index._bmaxy[pi]):
            continue
        s, e = starts[pi], starts[pi + 1]
        x1, y1 = ex1[s:e], ey1[s:e]
        x2, y2 = ex2[s:e], ey2[s:e]
        sx, sy = x2 - x1, y2 - y1
        denom = rx * sy - ry * sx
        ok = np.abs(denom) > 1e-18
        safe = np.where(ok, denom, 1.0)
        qpx, qpy = x1 - ax, y1 - ay
        t = (qpx * sy - qpy * sx) / safe
        u = (qpx * ry - qpy * rx) / safe
        hit = ok & (t >= 0.0) & (t <= 1.0) & (u >= 0.0) & (u <= 1.0)
        if not hit.any():
            continue
        ts = t[hit]
        locs = np.nonzero(hit)[0]
        us = u[hit]
        i_in = int(np.argmin(ts))
        i_out = int(np.argmax(ts))
        out.append((pi,
                    (float(ts[i_in]), int(locs[i_in]), float(us[i_in])),
                    (float(ts[i_out]), int(locs[i_out]), float(us[i_out]))))
    out.sort(key=lambda rec: rec[1][0])
    return out


def _walk(index: CoastIndex, pi: int, enter, exit_, forward: bool):
    """Boundary polyline between two crossing positions on one ring.

    Yields ((lon, lat) vertices, per-segment ring edge indices).
    """
    xs, ys = index.ring_of(pi)
    n = len(xs)
    t_in, ke, ue = enter
    t_out, kx_, ux_ = exit_
    e_pt = (xs[ke] + ue * (xs[(ke + 1) % n] - xs[ke]),
            ys[ke] + ue * (ys[(ke + 1) % n] - ys[ke]))
    x_pt = (xs[kx_] + ux_ * (xs[(kx_ + 1) % n] - xs[kx_]),
            ys[kx_] + ux_ * (ys[(kx_ + 1) % n] - ys[kx_]))
    verts = [e_pt]
    edges = []
    if forward:
        k = ke
        if k == kx_ and ux_ >= ue:
            verts.append(x_pt)
            edges.append(k)
        else:
            while True:
                edges.append(k)
                k = (k + 1) % n
                verts.append((xs[k], ys[k]))
                if k == kx_:
                    break
            verts.append(x_pt)
            edges.append(kx_)
    else:
        k = ke
        if k == kx_ and ux_ <= ue:
            verts.append(x_pt)
            edges.append(k)
        else:
            while True:
                edges.append(k)
                verts.append((xs[k], ys[k]))
                k = (k - 1) % n
                if k == kx_:
                    break
            verts.append(x_pt)
            edges.append(kx_)
    return verts, edges


def _walk_length(verts) -> float:
    total = 0.0
    for (x1, y1), (x2, y2) in zip(verts, verts[1:]):
        total += haversine_distance(GeoPoint(x1, y1), GeoPoint(x2, y2))
    return total


def _sample_offset_points(index: CoastIndex, pi: int, verts, edges,
                          offset_km: float, spacing_km: float):
    seg_len = [haversine_distance(GeoPoint(x1, y1), GeoPoint(x2, y2))
               for (x1, y1), (x2, y2) in zip(verts, verts[1:])]
    total = sum(seg_len)
    if total <= 0.0:
        return []
    ns = max(1, int(round(total / spacing_km)))
    step = total / (ns + 1)
    base_edge = int(index._starts[pi])
    pts = []
    seg_i = 0
    acc = 0.0
    for i in range(ns):
        target = (i + 1) * step
        while seg_i < len(seg_len) - 1 and acc + seg_len[seg_i] < target:
            acc += seg_len[seg_i]
            seg_i += 1
        frac = (target - acc) / seg_len[seg_i] if seg_len[seg_i] > 0 else 0.0
        x1, y1 = verts[seg_i]
        x2, y2 = verts[seg_i + 1]
        base = GeoPoint(x1 + frac * (x2 - x1), y1 + frac * (y2 - y1))
        kx = _scale_at(base.lat)
        nx, ny = _edge_outward_normal(index, base_edge + edges[seg_i], kx)
        pts.append(_move(base, nx, ny, offset_km, kx))
    return pts


def coast_detour_points(a: GeoPoint, b: GeoPoint, index: CoastIndex,
                        offset_km: float, spacing_km: float,
                        rng: np.random.Generator | None = None,
                        max_retries: int = 64,
                        min_island_area_km2: float | None = None) -> list[GeoPoint]:
    """Intermediate sea points skirting every coast section hit by (a,b).

    Points follow a line offset seaward of the intersected boundary,
    roughly ``spacing_km`` apart, ordered from a to b. Candidates that fall
    on land are corrected through reflect_across_coast. Raises NoDetourFound
    when no buffered section yields sea points.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    active = index.mask(True, min_island_area_km2)
    crossings = _polygon_crossings(a, b, index, active)
    out: list[GeoPoint] = []
    for pi, enter, exit_ in crossings:
        placed = None
        options = []
        for forward in (True, False):
            verts, edges = _walk(index, pi, enter, exit_, forward)
            options.append((_walk_length(verts), forward, verts, edges))
        options.sort(key=lambda rec: rec[0])
        for _, forward, verts, edges in options:
            candidates = _sample_offset_points(index, pi, verts, edges,
                                               offset_km, spacing_km)
            corrected = []
            ok = bool(candidates)
            for pt in candidates:
                if point_on_land(pt, index):
                    try:
                        pt = reflect_across_coast(pt, index, rng, max_retries)
                    except NoSeaFound:
                        ok = False
                        break
                corrected.append(pt)
            if ok:
                placed = corrected
                break
        if placed is None:
            raise NoDetourFound(
                f"no sea detour found around polygon {index.polygons[pi].id}")
        out.extend(placed)
    if not out:
        raise NoDetourFound("segment does not cross any active coastline")
    return out
