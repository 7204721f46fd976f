#!/usr/bin/env python3
"""Benchmark the numba kernel lane against the pure-numpy fallback.

Micro-benchmarks run both lanes in one process; the end-to-end route
benchmark uses whichever lane is active (re-run with CABOTAGE_NUMBA=0 to
compare):

    python benchmarks/bench_kernels.py
    CABOTAGE_NUMBA=0 python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import math
import time

import numpy as np

from cabotage import kernels
from cabotage.geo import EPS_DEG, KM_PER_DEG, CoastIndex, GeoPoint, LandPolygon, point_on_land
from cabotage.pathfinder import RouteParams, compute_sea_route


def synthetic_coast(n_islands: int = 40, seed: int = 7) -> CoastIndex:
    rng = np.random.default_rng(seed)
    polys = []
    for n in range(n_islands):
        lon = rng.uniform(0.5, 11.5)
        lat = rng.uniform(41.5, 48.5)
        radius = rng.uniform(4.0, 30.0)
        verts = int(rng.integers(8, 40))
        angles = np.sort(rng.uniform(0, 2 * math.pi, size=verts))
        radii = radius * rng.uniform(0.6, 1.0, size=verts)
        kx = math.cos(math.radians(lat))
        pts = [GeoPoint(lon + r * math.cos(t) / KM_PER_DEG / kx,
                        lat + r * math.sin(t) / KM_PER_DEG)
               for t, r in zip(angles, radii)]
        pts.append(pts[0])
        polys.append(LandPolygon(id=f"isle_{n}", ring=tuple(pts),
                                 area_km2=math.pi * radius * radius * 0.6))
    return CoastIndex(polys)


def bench_kernel_lanes(index: CoastIndex, n_queries: int = 20_000) -> None:
    rng = np.random.default_rng(13)
    pxs = rng.uniform(0.0, 12.0, size=n_queries)
    pys = rng.uniform(41.0, 49.0, size=n_queries)
    qxs = pxs + rng.uniform(-1.0, 1.0, size=n_queries)
    qys = np.clip(pys + rng.uniform(-1.0, 1.0, size=n_queries), 41.0, 49.0)
    args = index._kernel_args()
    mask = index.mask(True)

    lanes = kernels.available_lanes()
    print(f"\ncoast: {len(index)} polygons, {len(index.edge_arrays[0])} edges, "
          f"{n_queries} queries per kernel")
    print(f"{'kernel':<22} {'lane':<8} {'total s':>9} {'per query us':>14}")
    print("-" * 56)
    timings: dict[tuple[str, str], float] = {}
    for lane_name, fns in lanes.items():
        # trigger JIT before timing
        fns["point_on_land"](pxs[0], pys[0], *args, mask, EPS_DEG)
        fns["segment_hits_land"](pxs[0], pys[0], qxs[0], qys[0], *args, mask,
                                 EPS_DEG)
        fns["nearest_edge"](pxs[0], pys[0], 0.7, *index.edge_arrays, mask)

        t0 = time.perf_counter()
        for i in range(n_queries):
            fns["point_on_land"](pxs[i], pys[i], *args, mask, EPS_DEG)
        timings[("point_on_land", lane_name)] = time.perf_counter() - t0

        t0 = time.perf_counter()
        for i in range(n_queries):
            fns["segment_hits_land"](pxs[i], pys[i], qxs[i], qys[i], *args,
                                     mask, EPS_DEG)
        timings[("segment_hits_land", lane_name)] = time.perf_counter() - t0

        t0 = time.perf_counter()
        for i in range(n_queries):
            kx = max(math.cos(math.radians(pys[i])), 1e-6)
            fns["nearest_edge"](pxs[i], pys[i], kx, *index.edge_arrays, mask)
        timings[("nearest_edge", lane_name)] = time.perf_counter() - t0

    for kernel in ("point_on_land", "segment_hits_land", "nearest_edge"):
        for lane_name in lanes:
            total = timings[(kernel, lane_name)]
            print(f"{kernel:<22} {lane_name:<8} {total:>9.3f} "
                  f"{total / n_queries * 1e6:>14.2f}")
        if "numba" in lanes:
            speedup = timings[(kernel, "numpy")] / timings[(kernel, "numba")]
            print(f"{'':<22} numba speedup: {speedup:.1f}x")


def bench_routes(index: CoastIndex, n_routes: int = 200) -> None:
    rng = np.random.default_rng(17)

    def sea(max_tries=1000):
        for _ in range(max_tries):
            p = GeoPoint(rng.uniform(0.5, 11.5), rng.uniform(41.5, 48.5))
            if not point_on_land(p, index):
                return p
        raise RuntimeError("no sea point found")

    pairs = [(sea(), sea()) for _ in range(n_routes)]
    compute_sea_route(*pairs[0], index, RouteParams(rng_seed=0))  # warm-up
    t0 = time.perf_counter()
    points = 0
    for i, (a, b) in enumerate(pairs):
        res = compute_sea_route(a, b, index, RouteParams(rng_seed=i))
        points += res.point_count
    total = time.perf_counter() - t0
    print(f"\nend-to-end ({kernels.lane_name()} lane): {n_routes} routes in "
          f"{total:.2f} s ({total / n_routes * 1000:.1f} ms/route, "
          f"{points / n_routes:.1f} pts/route)")


if __name__ == "__main__":
    print(f"active lane: {kernels.lane_name()}")
    coast = synthetic_coast()
    bench_kernel_lanes(coast)
    bench_routes(coast)
