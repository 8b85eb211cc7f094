"""Surface-to-surface distances: bidirectional Hausdorff and ASSD.

Both are exact: nearest neighbors come from a k-d tree over voxel centers,
which returns the true Euclidean minimum.
"""

import math
import os

import numpy as np
from scipy.spatial import cKDTree

from .errors import EmptySurfaceError
from .mask_core import check_same_shape, surface_coords


def thread_count() -> int:
    """Worker cap from ``RUGOSITY_THREADS`` (default 1)."""
    raw = os.environ.get("RUGOSITY_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def _points(gp, gg):
    gp = np.asarray(gp, dtype=bool)
    gg = np.asarray(gg, dtype=bool)
    check_same_shape(gp, gg)
    a, b = surface_coords(gp), surface_coords(gg)
    if len(a) == 0 or len(b) == 0:
        raise EmptySurfaceError("boundary metrics need two non-empty surfaces")
    return a, b


def nearest_distances(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Distance from every point of ``src`` to its nearest point in ``dst``."""
    dist, _ = cKDTree(dst).query(src, k=1, workers=thread_count())
    return np.asarray(dist, dtype=float)


def directed_hausdorff(src_surface, dst_surface) -> float:
    a, b = _points(src_surface, dst_surface)
    return float(nearest_distances(a, b).max())


def hausdorff(gp, gg) -> float:
    """max of the two directed Hausdorff distances between the surfaces."""
    p, g = _points(gp, gg)
    return float(max(nearest_distances(g, p).max(), nearest_distances(p, g).max()))


def assd(gp, gg) -> float:
    """Average symmetric surface distance."""
    p, g = _points(gp, gg)
    d_gp = nearest_distances(g, p)
    d_pg = nearest_distances(p, g)
    # fsum keeps the result independent of any internal reduction order
    return math.fsum(d_gp.tolist() + d_pg.tolist()) / (len(g) + len(p))
