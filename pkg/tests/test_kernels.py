"""Both kernel lanes must agree bit for bit on every predicate."""

import os
import subprocess
import sys

import numpy as np
import pytest

from cabotage import kernels
from cabotage.geo import EPS_DEG


@pytest.fixture(scope="module")
def coast_args(archipelago):
    index = archipelago
    return (*index._kernel_args(), index.mask(True))


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")
def test_point_on_land_lanes_agree(coast_args):
    lanes = kernels.available_lanes()
    rng = np.random.default_rng(31)
    for _ in range(3000):
        px = rng.uniform(0.0, 8.0)
        py = rng.uniform(42.0, 48.0)
        got = {name: fns["point_on_land"](px, py, *coast_args, EPS_DEG)
               for name, fns in lanes.items()}
        assert bool(got["numpy"]) == bool(got["numba"])


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")
def test_segment_hits_land_lanes_agree(coast_args):
    lanes = kernels.available_lanes()
    rng = np.random.default_rng(32)
    for _ in range(3000):
        ax = rng.uniform(0.0, 8.0)
        ay = rng.uniform(42.0, 48.0)
        bx = ax + rng.uniform(-1.0, 1.0)
        by = ay + rng.uniform(-1.0, 1.0)
        got = {name: fns["segment_hits_land"](ax, ay, bx, by, *coast_args,
                                              EPS_DEG)
               for name, fns in lanes.items()}
        assert bool(got["numpy"]) == bool(got["numba"])


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")
def test_nearest_edge_lanes_agree(archipelago):
    lanes = kernels.available_lanes()
    index = archipelago
    args = (*index.edge_arrays, index.mask(True))
    rng = np.random.default_rng(33)
    for _ in range(2000):
        px = rng.uniform(0.0, 8.0)
        py = rng.uniform(42.0, 48.0)
        kx = max(np.cos(np.radians(py)), 1e-6)
        results = {name: fns["nearest_edge"](px, py, kx, *args)
                   for name, fns in lanes.items()}
        i_np, qx_np, qy_np, d2_np = results["numpy"]
        i_nb, qx_nb, qy_nb, d2_nb = results["numba"]
        assert int(i_np) == int(i_nb)
        assert float(qx_np) == float(qx_nb)
        assert float(qy_np) == float(qy_nb)
        assert float(d2_np) == float(d2_nb)


def test_lane_selection_reports_numba_by_default():
    if kernels.HAVE_NUMBA and kernels.numba_requested():
        assert kernels.lane_name() == "numba"
    else:
        assert kernels.lane_name() == "numpy"


def test_env_flag_forces_numpy_lane():
    env = dict(os.environ, CABOTAGE_NUMBA="0")
    out = subprocess.run(
        [sys.executable, "-c",
         "from cabotage import kernels; print(kernels.lane_name())"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_numpy_lane_runs_the_geometry_stack():
    script = (
        "import numpy as np\n"
        "from cabotage import kernels\n"
        "assert kernels.lane_name() == 'numpy'\n"
        "from cabotage.geo import CoastIndex, GeoPoint, point_on_land, "
        "segment_intersects_land\n"
        "from cabotage.pathfinder import compute_sea_route, RouteParams\n"
        "from conftest import square_island\n"
        "idx = CoastIndex([square_island(0.0, 45.0, 20.0, 'sq')])\n"
        "assert point_on_land(GeoPoint(0, 45), idx)\n"
        "res = compute_sea_route(GeoPoint(-1, 45), GeoPoint(1, 45), idx, "
        "RouteParams())\n"
        "assert all(not segment_intersects_land(u, v, idx) "
        "for u, v in zip(res.path, res.path[1:]))\n"
        "print('ok', res.point_count)\n"
    )
    env = dict(os.environ, CABOTAGE_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", script], env=env,
                         capture_output=True, text=True, check=True,
                         cwd=os.path.dirname(__file__))
    assert out.stdout.startswith("ok")
