"""Sea-route computation between two stops, never crossing the coastline.

The route starts as the straight segment between the offshore projections
of the endpoints. Wherever it hits land, intermediate points are sampled
on a buffer line offset seaward from the intersected coast section, points
drawn onto land are mirrored back to sea, and the algorithm recurses on
every sub-segment until no leg touches the coast. Buffer width and point
spacing grow with the straight-line distance, and double on retry when a
detour cannot be placed. A final simplification pass removes the loops
left by the random sea draws.

This is obstacle avoidance on a continuous ocean, not a shortest-path
search on a graph: no optimality is claimed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidEndpoint, NoDetourFound, NoRouteFound, NoSeaFound, UnknownPlace
from .geo import (
    DEFAULT_MIN_ISLAND_AREA_KM2,
    DEFAULT_OFFSHORE_KM,
    CoastIndex,
    GeoPoint,
    Polyline,
    coast_detour_points,
    haversine_distance,
    midpoint,
    point_on_land,
    project_offshore,
    reflect_across_coast,
    segment_intersects_land,
)

# calibration anchors for automatic parameter adjustment: short coastal legs
# run with a tight buffer, long legs pass wider and sparser
ADAPT_SHORT_KM = 60.0
ADAPT_LONG_KM = 150.0
ADAPT_SHORT = (5.0, 10.0)
ADAPT_LONG = (20.0, 20.0)

ESCALATION_LEVELS = 4  # offset/spacing double this many times before giving up


@dataclass(frozen=True)
class RouteParams:
    offset_km: float = ADAPT_SHORT[0]
    spacing_km: float = ADAPT_SHORT[1]
    offshore_km: float = DEFAULT_OFFSHORE_KM
    min_island_area_km2: float = DEFAULT_MIN_ISLAND_AREA_KM2
    max_depth: int = 16
    max_retries: int = 64
    rng_seed: int = 0
    auto_adapt: bool = True

    def __post_init__(self):
        for name in ("offset_km", "spacing_km", "offshore_km"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


@dataclass
class RouteResult:
    path: Polyline
    offset_used_km: float
    spacing_used_km: float
    duration_ms: float
    recursion_depth_reached: int
    point_count: int
    cache_hit: bool = False


def adapt_params(straight_distance_km: float, base: RouteParams) -> RouteParams:
    """Offset and spacing as a non-decreasing function of leg length.

    Clamped to the two calibration anchors, linearly interpolated between
    them.
    """
    if straight_distance_km < 0:
        raise ValueError("distance must be >= 0")
    if straight_distance_km <= ADAPT_SHORT_KM:
        offset, spacing = ADAPT_SHORT
    elif straight_distance_km >= ADAPT_LONG_KM:
        offset, spacing = ADAPT_LONG
    else:
        f = (straight_distance_km - ADAPT_SHORT_KM) / (ADAPT_LONG_KM - ADAPT_SHORT_KM)
        offset = ADAPT_SHORT[0] + f * (ADAPT_LONG[0] - ADAPT_SHORT[0])
        spacing = ADAPT_SHORT[1] + f * (ADAPT_LONG[1] - ADAPT_SHORT[1])
    return replace(base, offset_km=offset, spacing_km=spacing)


# ---------------------------------------------------------------------------
# loop removal
# ---------------------------------------------------------------------------

_SIMPLIFY_EPS = 1e-12


def _crossing(ax, ay, bx, by, cx, cy, dx, dy):
    """(hit, ix, iy) for segments (a,b) and (c,d), shared-endpoint free."""
    rx, ry = bx - ax, by - ay
    sx, sy = dx - cx, dy - cy
    denom = rx * sy - ry * sx
    qx, qy = cx - ax, cy - ay
    if abs(denom) > 1e-18:
        t = (qx * sy - qy * sx) / denom
        u = (qx * ry - qy * rx) / denom
        if -_SIMPLIFY_EPS <= t <= 1.0 + _SIMPLIFY_EPS and -_SIMPLIFY_EPS <= u <= 1.0 + _SIMPLIFY_EPS:
            return True, ax + t * rx, ay + t * ry
        return False, 0.0, 0.0
    # near-parallel: report a touch when an endpoint sits on the other segment
    for px, py, x1, y1, x2, y2 in ((cx, cy, ax, ay, bx, by),
                                   (dx, dy, ax, ay, bx, by),
                                   (ax, ay, cx, cy, dx, dy),
                                   (bx, by, cx, cy, dx, dy)):
        ddx, ddy = x2 - x1, y2 - y1
        dd = ddx * ddx + ddy * ddy
        if dd == 0.0:
            continue
        tt = ((px - x1) * ddx + (py - y1) * ddy) / dd
        tt = min(1.0, max(0.0, tt))
        ex = px - (x1 + tt * ddx)
        ey = py - (y1 + tt * ddy)
        if ex * ex + ey * ey <= _SIMPLIFY_EPS * _SIMPLIFY_EPS:
            return True, px, py
    return False, 0.0, 0.0


def simplify_remove_loops(path: Polyline) -> Polyline:
    """Excise self-intersection loops from a path.

    Single forward pass: every new segment is checked against the earlier
    non-adjacent ones through a uniform spatial grid; on a crossing, the
    path is cut back to the crossing point and the loop dropped. Endpoints
    are preserved and the output is a subsequence of the input spliced at
    crossing points. Expected cost is close to linear in the point count.
    """
    pts = [(p.lon, p.lat) for p in path.points]
    if len(pts) <= 3:
        return path  # two adjacent segments cannot form a loop

    lens = [math.hypot(x2 - x1, y2 - y1) for (x1, y1), (x2, y2) in zip(pts, pts[1:])]
    nonzero = sorted(l for l in lens if l > 0)
    cell = nonzero[len(nonzero) // 2] if nonzero else 1.0
    cell = max(cell, 1e-9)

    grid: dict[tuple[int, int], list[int]] = {}
    seg_idx: list[int] = []    # serial -> position in `out`
    seg_box: list[tuple] = []  # serial -> coordinates
    alive: list[bool] = []
    out: list[tuple[float, float]] = [pts[0]]
    out_serial: list[int] = []

    def cells_of(x1, y1, x2, y2):
        gx0 = int(math.floor((min(x1, x2) - cell) / cell))
        gx1 = int(math.floor((max(x1, x2) + cell) / cell))
        gy0 = int(math.floor((min(y1, y2) - cell) / cell))
        gy1 = int(math.floor((max(y1, y2) + cell) / cell))
        for gx in range(gx0, gx1 + 1):
            for gy in range(gy0, gy1 + 1):
                yield gx, gy

    def add_segment(x1, y1, x2, y2):
        serial = len(seg_idx)
        seg_idx.append(len(out) - 1)
        seg_box.append((x1, y1, x2, y2))
        alive.append(True)
        for key in cells_of(x1, y1, x2, y2):
            grid.setdefault(key, []).append(serial)
        out_serial.append(serial)

    for px, py in pts[1:]:
        while True:
            ux, uy = out[-1]
            if (ux, uy) == (px, py):
                break
            candidates = set()
            for key in cells_of(ux, uy, px, py):
                candidates.update(grid.get(key, ()))
            best = None
            for serial in sorted(candidates):
                if not alive[serial]:
                    continue
                idx = seg_idx[serial]
                if idx >= len(out) - 2:  # adjacent: shares the current tail
                    continue
                x1, y1, x2, y2 = seg_box[serial]
                hit, ix, iy = _crossing(ux, uy, px, py, x1, y1, x2, y2)
                if hit and (best is None or idx < best[0]):
                    best = (idx, ix, iy)
            if best is None:
                break
            k, ix, iy = best
            for i in range(k, len(out) - 1):
                alive[out_serial[i]] = False
            del out[k + 1:]
            del out_serial[k:]
            if (ix, iy) != out[-1]:
                add_segment(out[-1][0], out[-1][1], ix, iy)
                out.append((ix, iy))
        if (px, py) != out[-1]:
            add_segment(out[-1][0], out[-1][1], px, py)
            out.append((px, py))

    if len(out) == 1:  # fully degenerate input collapses to its endpoint
        out.append(out[0])
    return Polyline(tuple(GeoPoint(x, y) for x, y in out))


# ---------------------------------------------------------------------------
# route computation
# ---------------------------------------------------------------------------

class _DepthTracker:
    __slots__ = ("max_depth",)

    def __init__(self):
        self.max_depth = 0


# below this length a crossing segment is only grazing the coast: nudging
# its midpoint to sea beats sampling a micro-detour
_NUDGE_LENGTH_KM = 0.25


def _connect(a: GeoPoint, b: GeoPoint, index: CoastIndex, offset_km: float,
             spacing_km: float, params: RouteParams, rng, depth: int,
             tracker: _DepthTracker) -> list[GeoPoint]:
    tracker.max_depth = max(tracker.max_depth, depth)
    if a == b:
        return [a]
    if not segment_intersects_land(a, b, index):
        return [a, b]
    if depth >= params.max_depth:
        raise NoRouteFound(f"recursion budget exhausted at depth {depth}")

    detour: list[GeoPoint] | None = None
    if haversine_distance(a, b) > _NUDGE_LENGTH_KM:
        try:
            detour = coast_detour_points(a, b, index, offset_km, spacing_km,
                                         rng, params.max_retries)
        except NoDetourFound:
            detour = None  # boundary touch without a proper crossing

    if detour is None:
        # push the midpoint off the coast and stitch the halves
        m = midpoint(a, b)
        if point_on_land(m, index):
            m = reflect_across_coast(m, index, rng, params.max_retries)
        if m == a or m == b:
            raise NoRouteFound("split point degenerated onto an endpoint")
        left = _connect(a, m, index, offset_km, spacing_km, params, rng,
                        depth + 1, tracker)
        right = _connect(m, b, index, offset_km, spacing_km, params, rng,
                         depth + 1, tracker)
        return left + right[1:]

    way: list[GeoPoint] = [a]
    for pt in [*detour, b]:
        if pt != way[-1]:
            way.append(pt)
    out = [a]
    for u, v in zip(way, way[1:]):
        leg = _connect(u, v, index, offset_km, spacing_km, params, rng,
                       depth + 1, tracker)
        out.extend(leg[1:])
    return out


def compute_sea_route(from_pt: GeoPoint, to_pt: GeoPoint, index: CoastIndex,
                      params: RouteParams | None = None) -> RouteResult:
    """Land-free polyline between the offshore projections of two points.

    Deterministic for a fixed seed; raises InvalidEndpoint when an endpoint
    cannot be projected to sea and NoRouteFound when every escalation level
    fails.
    """
    t0 = time.perf_counter()
    base = params or RouteParams()
    if base.auto_adapt:
        base = adapt_params(haversine_distance(from_pt, to_pt), base)

    try:
        start = project_offshore(from_pt, index, base.offshore_km)
        end = project_offshore(to_pt, index, base.offshore_km)
    except NoSeaFound as exc:
        raise InvalidEndpoint(str(exc)) from exc

    if start == end:
        return RouteResult(
            path=Polyline((start, end)),
            offset_used_km=base.offset_km,
            spacing_used_km=base.spacing_km,
            duration_ms=(time.perf_counter() - t0) * 1000.0,
            recursion_depth_reached=0,
            point_count=2,
        )

    last_error: Exception | None = None
    raw = None
    offset_used = base.offset_km
    spacing_used = base.spacing_km
    tracker = _DepthTracker()
    for level in range(ESCALATION_LEVELS + 1):
        offset_used = base.offset_km * (2 ** level)
        spacing_used = base.spacing_km * (2 ** level)
        rng = np.random.default_rng(base.rng_seed)
        tracker = _DepthTracker()
        try:
            raw = _connect(start, end, index, offset_used, spacing_used,
                           base, rng, 0, tracker)
            break
        except (NoDetourFound, NoSeaFound, NoRouteFound) as exc:
            last_error = exc
    if raw is None:
        raise NoRouteFound(
            f"no land-free route after {ESCALATION_LEVELS} escalations"
        ) from last_error

    path = simplify_remove_loops(Polyline(tuple(raw)))
    return RouteResult(
        path=path,
        offset_used_km=offset_used,
        spacing_used_km=spacing_used,
        duration_ms=(time.perf_counter() - t0) * 1000.0,
        recursion_depth_reached=tracker.max_depth,
        point_count=len(path),
    )


def route_between_stops(from_stop: str, to_stop: str, index: CoastIndex,
                        gazetteer, cache=None,
                        params: RouteParams | None = None,
                        reverse_reuse: bool = True) -> RouteResult:
    """Resolve two gazetteer ids and compute (or recall) their sea route.

    The cache key is the ordered id pair plus the coastline fingerprint;
    with ``reverse_reuse`` the mirrored pair is answered by reversing the
    stored path.
    """
    for place in (from_stop, to_stop):
        if place not in gazetteer:
            raise UnknownPlace(f"unknown gazetteer id {place!r}")
    if cache is not None:
        hit = cache.get(from_stop, to_stop, index.fingerprint)
        if hit is not None:
            return hit
        if reverse_reuse:
            rev = cache.get(to_stop, from_stop, index.fingerprint)
            if rev is not None:
                result = replace(rev, path=rev.path.reversed(), cache_hit=True)
                cache.put(from_stop, to_stop, index.fingerprint, result)
                return result
    a = gazetteer[from_stop]
    b = gazetteer[to_stop]
    result = compute_sea_route(GeoPoint(a.lon, a.lat), GeoPoint(b.lon, b.lat),
                               index, params)
    if cache is not None:
        cache.put(from_stop, to_stop, index.fingerprint, result)
    return result
