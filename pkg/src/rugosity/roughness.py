"""
Surface roughness from distances to the center of gravity.

Every surface voxel carries its distance ``zeta`` to the surface centroid.
Two quantities are built on top of that:

* the roughness field, a per-voxel sum of ``zeta`` differences to the
  neighboring surface voxels (positive for a voxel that sticks out, negative
  for one that sits in a dip);
* the roughness index, the mean absolute deviation of ``zeta`` inside
  stride-``w`` windows, averaged over all windows that touch the surface.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EmptySurfaceError, UndefinedMetricError
from .mask_core import (
    as_mask,
    box_offsets,
    centroid,
    distance_field,
    extract_surface,
    shifted,
    surface_coords,
)


@dataclass(frozen=True)
class NeighborhoodSpec:
    """Cube neighborhood of the given radius, center excluded.

    Radius 1 gives 8 neighbors in 2D and 26 in 3D.
    """

    radius: int = 1

    def __post_init__(self):
        if int(self.radius) != self.radius or self.radius < 1:
            raise ValueError(f"neighborhood radius must be a positive integer, got {self.radius}")

    def offsets(self, ndim: int) -> list:
        return box_offsets(ndim, self.radius)


@dataclass(frozen=True)
class WindowSpec:
    """Edge length of the cubic windows; the stride always equals ``w``."""

    w: int

    def __post_init__(self):
        if int(self.w) != self.w or self.w < 1:
            raise ValueError(f"window size must be a positive integer, got {self.w}")

    def check(self, shape) -> None:
        if self.w > min(shape):
            raise ValueError(f"window {self.w} exceeds smallest grid extent {min(shape)}")


@dataclass(frozen=True)
class RoughnessStats:
    ri: float
    window: WindowSpec
    m_windows: int
    residual: Optional[float] = None

    @property
    def absolute(self) -> Optional[float]:
        if self.residual is None:
            return None
        return absolute_ri(self.ri, self.residual)

    def with_residual(self, residual: float) -> "RoughnessStats":
        return RoughnessStats(self.ri, self.window, self.m_windows, residual)


def default_window(shape) -> int:
    """7% of the smallest extent, rounded half up, never below 3."""
    return max(3, int(math.floor(0.07 * min(shape) + 0.5)))


# --------------------------------------------------------------------------
# roughness field and thresholding
# --------------------------------------------------------------------------

def roughness_field(zm, surface, nb: NeighborhoodSpec = NeighborhoodSpec()) -> np.ndarray:
    """Sum of ``zeta(v) - zeta(u)`` over surface neighbors ``u`` of each surface voxel ``v``."""
    zm = np.asarray(zm, dtype=float)
    surface = np.asarray(surface, dtype=bool)
    out = np.zeros(zm.shape, dtype=float)
    for off in nb.offsets(zm.ndim):
        nb_surface = shifted(surface, off, fill=False)
        nb_zeta = shifted(zm, off, fill=0.0)
        out += np.where(nb_surface, zm - nb_zeta, 0.0)
    return np.where(surface, out, 0.0)


def mask_roughness(mask, nb: NeighborhoodSpec = NeighborhoodSpec(), c0=None) -> np.ndarray:
    """Roughness field of a mask, about its own surface centroid unless ``c0`` is given."""
    surface = extract_surface(mask)
    if c0 is None:
        c0 = centroid(surface)
    return roughness_field(distance_field(surface, c0), surface, nb)


def detect_irregularities(df, kappa: float) -> np.ndarray:
    """Flag voxels whose roughness magnitude exceeds ``kappa``."""
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    return np.abs(np.asarray(df, dtype=float)) > kappa


# --------------------------------------------------------------------------
# roughness index
# --------------------------------------------------------------------------

def window_ids(coords: np.ndarray, shape, w: int) -> np.ndarray:
    """Flat index of the stride-``w`` window (anchored at the origin) holding each point."""
    counts = [-(-n // w) for n in shape]
    return np.ravel_multi_index(tuple((coords // w).T), counts)


def roughness_index(surface, c0=None, win: Optional[WindowSpec] = None) -> RoughnessStats:
    """Mean over surface-touching windows of the windowed mean absolute deviation of zeta.

    Windows tile the grid from the origin with stride ``w``; partial windows at
    the far edges are kept, and windows without surface voxels are skipped.
    """
    surface = np.asarray(surface, dtype=bool)
    pts = surface_coords(surface)
    if len(pts) == 0:
        raise EmptySurfaceError("roughness index of an empty surface is undefined")
    if c0 is None:
        c0 = centroid(surface)
    if win is None:
        win = WindowSpec(default_window(surface.shape))
    win.check(surface.shape)

    c0 = np.asarray(c0, dtype=float)
    zeta = np.sqrt(((pts - c0) ** 2).sum(axis=1))
    ids = window_ids(pts, surface.shape, win.w)
    # compact ids so bincount stays small on big grids
    uniq, inv = np.unique(ids, return_inverse=True)
    n = np.bincount(inv).astype(float)
    mean = np.bincount(inv, weights=zeta) / n
    dev = np.bincount(inv, weights=np.abs(zeta - mean[inv])) / n
    return RoughnessStats(ri=float(dev.sum() / len(uniq)), window=win, m_windows=len(uniq))


def mask_roughness_index(mask, w: Optional[int] = None, c0=None) -> RoughnessStats:
    surface = extract_surface(as_mask(mask))
    return roughness_index(surface, c0, WindowSpec(w) if w is not None else None)


def absolute_ri(ri_pred: float, ri_ref: float) -> float:
    """RI minus the residual RI of a reference; negative when smoother than the reference."""
    return ri_pred - ri_ref


def roughness_ratio(ri_p: float, ri_g: float) -> float:
    """|RI_P - RI_G| / RI_G."""
    if ri_g == 0:
        raise UndefinedMetricError("roughness ratio is undefined for a reference RI of 0")
    return abs(ri_p - ri_g) / ri_g
