"""Cross-surface roughness comparison about the reference centroid."""

import numpy as np

from .errors import EmptySurfaceError
from .mask_core import centroid, check_same_shape, distance_field


def roughness_distance_field(p, g, c0=None) -> np.ndarray:
    """Elementwise ``zeta_P - zeta_G`` with both fields taken about ``g``'s centroid.

    ``p`` and ``g`` are surfaces. Passing ``c0`` overrides the shared center.
    """
    p = np.asarray(p, dtype=bool)
    g = np.asarray(g, dtype=bool)
    check_same_shape(p, g)
    if c0 is None:
        if not g.any():
            raise EmptySurfaceError("reference surface is empty")
        c0 = centroid(g)
    return distance_field(p, c0) - distance_field(g, c0)


def ard(f) -> float:
    """Mean of |zeta_hat| over every grid element, so padding dilutes it."""
    f = np.asarray(f, dtype=float)
    return float(np.abs(f).mean())


def ard_surface(f, p, g) -> float:
    """Mean of |zeta_hat| restricted to the union of both surfaces."""
    support = np.asarray(p, dtype=bool) | np.asarray(g, dtype=bool)
    if not support.any():
        return 0.0
    return float(np.abs(np.asarray(f, dtype=float)[support]).mean())


def detect_vs_reference(f, kappa_c: float) -> np.ndarray:
    if kappa_c < 0:
        raise ValueError(f"kappa_c must be non-negative, got {kappa_c}")
    return np.abs(np.asarray(f, dtype=float)) > kappa_c
