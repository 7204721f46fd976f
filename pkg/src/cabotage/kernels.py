"""Low-level geometry kernels over flattened coastline arrays.

Two interchangeable lanes compute every predicate:

* a scalar-loop lane compiled with numba ``@njit`` (default when numba
  imports cleanly), and
* a pure-numpy lane vectorised per polygon.

Set ``CABOTAGE_NUMBA=0`` to force the numpy lane. Both lanes evaluate the
same arithmetic expressions in the same order, so results are identical
bit for bit; ``tests/test_kernels.py`` asserts this and
``benchmarks/bench_kernels.py`` compares their speed.

Coastlines are passed as flat edge arrays in CSR layout: ``starts`` holds
one offset per polygon (length ``n_polygons + 1``), ``ex1/ey1 -> ex2/ey2``
the edge endpoints in lon/lat degrees, ``b*`` the per-polygon bounding
boxes and ``active`` the island-area filter mask.
"""

from __future__ import annotations

import os

import numpy as np

ENV_FLAG = "CABOTAGE_NUMBA"

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


def numba_requested() -> bool:
    return os.environ.get(ENV_FLAG, "1") != "0"


# ---------------------------------------------------------------------------
# scalar lane (jit-compiled; runs as plain Python only if numba is absent)
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _point_min_d2(px, py, x1, y1, x2, y2):
    # squared distance from (px,py) to segment (x1,y1)-(x2,y2), degree units
    dx = x2 - x1
    dy = y2 - y1
    ex = px - x1
    ey = py - y1
    dd = dx * dx + dy * dy
    if dd > 0.0:
        t = (ex * dx + ey * dy) / dd
    else:
        t = 0.0
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    rx = ex - t * dx
    ry = ey - t * dy
    return rx * rx + ry * ry


@njit(cache=True, nogil=True)
def _segments_hit(ax, ay, bx, by, cx, cy, dx, dy, eps):
    # True when segments (a,b) and (c,d) cross or touch within eps.
    eps2 = eps * eps
    o1 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    o2 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
    o3 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
    o4 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
    if ((o1 > 0.0) != (o2 > 0.0)) and ((o3 > 0.0) != (o4 > 0.0)):
        return True
    if _point_min_d2(cx, cy, ax, ay, bx, by) <= eps2:
        return True
    if _point_min_d2(dx, dy, ax, ay, bx, by) <= eps2:
        return True
    if _point_min_d2(ax, ay, cx, cy, dx, dy) <= eps2:
        return True
    if _point_min_d2(bx, by, cx, cy, dx, dy) <= eps2:
        return True
    return False


@njit(cache=True, nogil=True)
def _point_in_ring(px, py, ex1, ey1, ex2, ey2, s, e, eps):
    eps2 = eps * eps
    inside = False
    for j in range(s, e):
        x1 = ex1[j]
        y1 = ey1[j]
        x2 = ex2[j]
        y2 = ey2[j]
        if _point_min_d2(px, py, x1, y1, x2, y2) <= eps2:
            return True
        if (y1 > py) != (y2 > py):
            xi = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            if px < xi:
                inside = not inside
    return inside


@njit(cache=True, nogil=True)
def nb_point_on_land(px, py, ex1, ey1, ex2, ey2, starts,
                     bminx, bminy, bmaxx, bmaxy, active, eps):
    npoly = starts.shape[0] - 1
    for pi in range(npoly):
        if not active[pi]:
            continue
        if (px < bminx[pi] - eps or px > bmaxx[pi] + eps
                or py < bminy[pi] - eps or py > bmaxy[pi] + eps):
            continue
        if _point_in_ring(px, py, ex1, ey1, ex2, ey2,
                          starts[pi], starts[pi + 1], eps):
            return True
    return False


@njit(cache=True, nogil=True)
def nb_segment_hits_land(ax, ay, bx, by, ex1, ey1, ex2, ey2, starts,
                         bminx, bminy, bmaxx, bmaxy, active, eps):
    sminx = min(ax, bx) - eps
    smaxx = max(ax, bx) + eps
    sminy = min(ay, by) - eps
    smaxy = max(ay, by) + eps
    mx = 0.5 * (ax + bx)
    my = 0.5 * (ay + by)
    npoly = starts.shape[0] - 1
    for pi in range(npoly):
        if not active[pi]:
            continue
        if (smaxx < bminx[pi] or sminx > bmaxx[pi]
                or smaxy < bminy[pi] or sminy > bmaxy[pi]):
            continue
        s = starts[pi]
        e = starts[pi + 1]
        hit = False
        for j in range(s, e):
            if _segments_hit(ax, ay, bx, by,
                             ex1[j], ey1[j], ex2[j], ey2[j], eps):
                hit = True
                break
        if hit:
            return True
        # no boundary contact: the segment crosses this polygon iff it lies
        # wholly inside, which its midpoint decides
        if _point_in_ring(mx, my, ex1, ey1, ex2, ey2, s, e, eps):
            return True
    return False


@njit(cache=True, nogil=True)
def nb_nearest_edge(px, py, kx, ex1, ey1, ex2, ey2, starts, active):
    # Nearest point over all active edges in the locally-scaled plane
    # (x stretched by kx = cos(lat)). Returns (edge index, qx, qy, d2).
    best = np.inf
    besti = -1
    bqx = 0.0
    bqy = 0.0
    npoly = starts.shape[0] - 1
    for pi in range(npoly):
        if not active[pi]:
            continue
        s = starts[pi]
        e = starts[pi + 1]
        for j in range(s, e):
            x1 = ex1[j]
            y1 = ey1[j]
            x2 = ex2[j]
            y2 = ey2[j]
            dx = (x2 - x1) * kx
            dy = y2 - y1
            ex = (px - x1) * kx
            ey = py - y1
            dd = dx * dx + dy * dy
            if dd > 0.0:
                t = (ex * dx + ey * dy) / dd
            else:
                t = 0.0
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            rx = ex - t * dx
            ry = ey - t * dy
            d2 = rx * rx + ry * ry
            if d2 < best:
                best = d2
                besti = j
                bqx = x1 + t * (x2 - x1)
                bqy = y1 + t * (y2 - y1)
    return besti, bqx, bqy, best


# ---------------------------------------------------------------------------
# numpy lane
# ---------------------------------------------------------------------------

def _np_min_d2_to_edges(px, py, x1, y1, x2, y2):
    dx = x2 - x1
    dy = y2 - y1
    ex = px - x1
    ey = py - y1
    dd = dx * dx + dy * dy
    safe = np.where(dd > 0.0, dd, 1.0)
    t = np.where(dd > 0.0, (ex * dx + ey * dy) / safe, 0.0)
    t = np.clip(t, 0.0, 1.0)
    rx = ex - t * dx
    ry = ey - t * dy
    return rx * rx + ry * ry


def _np_ring_parity(px, py, x1, y1, x2, y2):
    cond = (y1 > py) != (y2 > py)
    if not cond.any():
        return False
    xi = x1[cond] + (py - y1[cond]) * (x2[cond] - x1[cond]) / (y2[cond] - y1[cond])
    return bool(np.count_nonzero(px < xi) & 1)


def np_point_on_land(px, py, ex1, ey1, ex2, ey2, starts,
                     bminx, bminy, bmaxx, bmaxy, active, eps):
    eps2 = eps * eps
    npoly = starts.shape[0] - 1
    for pi in range(npoly):
        if not active[pi]:
            continue
        if (px < bminx[pi] - eps or px > bmaxx[pi] + eps
                or py < bminy[pi] - eps or py > bmaxy[pi] + eps):
            continue
        s, e = starts[pi], starts[pi + 1]
        x1, y1 = ex1[s:e], ey1[s:e]
        x2, y2 = ex2[s:e], ey2[s:e]
        if _np_min_d2_to_edges(px, py, x1, y1, x2, y2).min() <= eps2:
            return True
        if _np_ring_parity(px, py, x1, y1, x2, y2):
            return True
    return False


def _np_point_to_one_segment(px, py, ax, ay, bx, by):
    dx = bx - ax
    dy = by - ay
    ex = px - ax
    ey = py - ay
    dd = dx * dx + dy * dy
    if dd > 0.0:
        t = np.clip((ex * dx + ey * dy) / dd, 0.0, 1.0)
    else:
        t = np.zeros_like(ex)
    rx = ex - t * dx
    ry = ey - t * dy
    return rx * rx + ry * ry


def _np_edges_hit_segment(ax, ay, bx, by, x1, y1, x2, y2, eps):
    eps2 = eps * eps
    o1 = (bx - ax) * (y1 - ay) - (by - ay) * (x1 - ax)
    o2 = (bx - ax) * (y2 - ay) - (by - ay) * (x2 - ax)
    o3 = (x2 - x1) * (ay - y1) - (y2 - y1) * (ax - x1)
    o4 = (x2 - x1) * (by - y1) - (y2 - y1) * (bx - x1)
    proper = ((o1 > 0.0) != (o2 > 0.0)) & ((o3 > 0.0) != (o4 > 0.0))
    if proper.any():
        return True
    if _np_point_to_one_segment(x1, y1, ax, ay, bx, by).min() <= eps2:
        return True
    if _np_point_to_one_segment(x2, y2, ax, ay, bx, by).min() <= eps2:
        return True
    if _np_min_d2_to_edges(ax, ay, x1, y1, x2, y2).min() <= eps2:
        return True
    return bool(_np_min_d2_to_edges(bx, by, x1, y1, x2, y2).min() <= eps2)


def np_segment_hits_land(ax, ay, bx, by, ex1, ey1, ex2, ey2, starts,
                         bminx, bminy, bmaxx, bmaxy, active, eps):
    sminx = min(ax, bx) - eps
    smaxx = max(ax, bx) + eps
    sminy = min(ay, by) - eps
    smaxy = max(ay, by) + eps
    mx = 0.5 * (ax + bx)
    my = 0.5 * (ay + by)
    eps2 = eps * eps
    npoly = starts.shape[0] - 1
    for pi in range(npoly):
        if not active[pi]:
            continue
        if (smaxx < bminx[pi] or sminx > bmaxx[pi]
                or smaxy < bminy[pi] or sminy > bmaxy[pi]):
            continue
        s, e = starts[pi], starts[pi + 1]
        x1, y1 = ex1[s:e], ey1[s:e]
        x2, y2 = ex2[s:e], ey2[s:e]
        if _np_edges_hit_segment(ax, ay, bx, by, x1, y1, x2, y2, eps):
            return True
        if _np_min_d2_to_edges(mx, my, x1, y1, x2, y2).min() <= eps2:
            return True
        if _np_ring_parity(mx, my, x1, y1, x2, y2):
            return True
    return False


def np_nearest_edge(px, py, kx, ex1, ey1, ex2, ey2, starts, active):
    best = np.inf
    besti = -1
    bqx = 0.0
    bqy = 0.0
    npoly = starts.shape[0] - 1
    for pi in range(npoly):
        if not active[pi]:
            continue
        s, e = starts[pi], starts[pi + 1]
        x1, y1 = ex1[s:e], ey1[s:e]
        x2, y2 = ex2[s:e], ey2[s:e]
        dx = (x2 - x1) * kx
        dy = y2 - y1
        ex = (px - x1) * kx
        ey = py - y1
        dd = dx * dx + dy * dy
        safe = np.where(dd > 0.0, dd, 1.0)
        t = np.where(dd > 0.0, (ex * dx + ey * dy) / safe, 0.0)
        t = np.clip(t, 0.0, 1.0)
        rx = ex - t * dx
        ry = ey - t * dy
        d2 = rx * rx + ry * ry
        j = int(np.argmin(d2))
        if d2[j] < best:
            best = float(d2[j])
            besti = s + j
            bqx = float(x1[j] + t[j] * (x2[j] - x1[j]))
            bqy = float(y1[j] + t[j] * (y2[j] - y1[j]))
    return besti, bqx, bqy, best


# ---------------------------------------------------------------------------
# lane selection
# ---------------------------------------------------------------------------

USING_NUMBA = HAVE_NUMBA and numba_requested()

if USING_NUMBA:
    point_on_land_kernel = nb_point_on_land
    segment_hits_land_kernel = nb_segment_hits_land
    nearest_edge_kernel = nb_nearest_edge
else:
    point_on_land_kernel = np_point_on_land
    segment_hits_land_kernel = np_segment_hits_land
    nearest_edge_kernel = np_nearest_edge


def lane_name() -> str:
    return "numba" if USING_NUMBA else "numpy"


def available_lanes() -> dict[str, dict]:
    """Kernel sets per lane, for equivalence tests and benchmarks."""
    lanes = {
        "numpy": {
            "point_on_land": np_point_on_land,
            "segment_hits_land": np_segment_hits_land,
            "nearest_edge": np_nearest_edge,
        }
    }
    if HAVE_NUMBA:
        lanes["numba"] = {
            "point_on_land": nb_point_on_land,
            "segment_hits_land": nb_segment_hits_land,
            "nearest_edge": nb_nearest_edge,
        }
    return lanes
