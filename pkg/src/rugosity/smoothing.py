"""
Spike removal and hole filling driven by flagged voxels.

Two routes produce the flags:

* the roughness route thresholds the mask's own roughness field: flagged
  voxels sticking out are deleted, and flagged voxels sitting in a dip get
  their face-adjacent background neighbors filled when those neighbors lie
  closer to the local mean radius than the dip voxel itself;
* the reference route thresholds the roughness distance to a ground truth:
  flagged prediction-only material outside the reference is deleted and
  flagged reference surface missing from the prediction is filled.
"""

import hashlib

import numpy as np

from .mask_core import (
    as_mask,
    box_offsets,
    centroid,
    check_same_shape,
    distance_field,
    extract_surface,
    face_offsets,
    radial_distance,
    shifted,
)
from .roughness import NeighborhoodSpec, detect_irregularities, roughness_field
from .roughness_distance import detect_vs_reference, roughness_distance_field


def local_mean_radius(zm, surface, nb: NeighborhoodSpec = NeighborhoodSpec()) -> np.ndarray:
    """Median zeta of the surface neighbors of each surface voxel.

    The median keeps a notch or spike from dragging the reference level of
    its own rim. NaN off the surface and where a voxel has no surface neighbor.
    """
    zm = np.asarray(zm, dtype=float)
    surface = np.asarray(surface, dtype=bool)
    out = np.full(zm.shape, np.nan)
    pts = np.argwhere(surface)
    if len(pts) == 0:
        return out
    offs = np.asarray(nb.offsets(zm.ndim))
    cand = pts[:, None, :] + offs[None, :, :]
    inside = np.all((cand >= 0) & (cand < np.asarray(zm.shape)), axis=2)
    cand = np.where(inside[..., None], cand, 0)
    idx = tuple(cand[..., k] for k in range(zm.ndim))
    vals = np.where(inside & surface[idx], zm[idx], np.nan)
    has = ~np.all(np.isnan(vals), axis=1)
    med = np.full(len(pts), np.nan)
    med[has] = np.nanmedian(vals[has], axis=1)
    out[tuple(pts.T)] = med
    return out


def _fill_next_to(sources, candidates, ndim) -> np.ndarray:
    """Voxels in ``candidates`` face-adjacent to at least one ``sources`` voxel."""
    out = np.zeros(candidates.shape, dtype=bool)
    for off in face_offsets(ndim):
        out |= shifted(sources, off, fill=False)
    return out & candidates


def _has_box_neighbor(m) -> np.ndarray:
    out = np.zeros(m.shape, dtype=bool)
    for off in box_offsets(m.ndim):
        out |= shifted(m, off, fill=False)
    return out


def _drop_stranded(before, after) -> np.ndarray:
    """Remove voxels that had a foreground neighbor in ``before`` but none in ``after``.

    Thin diagonal spikes hang together through corners, and peeling one can
    leave a lone voxel whose roughness is 0, which no threshold would flag.
    """
    stranded = after & ~_has_box_neighbor(after) & _has_box_neighbor(before)
    return after & ~stranded


# half-width of the box over which the local mean radius is taken; matches
# the default 7-voxel roughness window
MEAN_RADIUS = 3
# a move must bring the surface at least this much closer to the local mean
# radius; smaller gains are below grid resolution and only reshuffle run ends
MIN_GAIN = 0.5


def smooth(p, flags, roughness, c0=None, nb: NeighborhoodSpec = NeighborhoodSpec(),
           mean_radius: int = MEAN_RADIUS, min_gain: float = MIN_GAIN) -> np.ndarray:
    """One pass of the roughness route.

    ``roughness`` is the field the flags were thresholded from; its sign tells
    spikes (> 0) from holes (< 0). A spike voxel is deleted when the
    foreground behind it lies closer to the local mean radius than the voxel
    itself; a hole voxel fills those face-adjacent background neighbors that
    lie closer to the local mean radius than it does.
    """
    p = as_mask(p)
    flags = np.asarray(flags, dtype=bool)
    roughness = np.asarray(roughness, dtype=float)
    check_same_shape(p, flags)
    check_same_shape(p, roughness)
    assert not np.any(flags & (roughness == 0)), "flagged voxel with zero roughness"
    if not flags.any():
        return p.copy()

    surface = extract_surface(p)
    if c0 is None:
        c0 = centroid(surface)
    zm = distance_field(surface, c0)
    local = local_mean_radius(zm, surface, NeighborhoodSpec(mean_radius))
    radius = radial_distance(p.shape, c0)

    spikes = flags & (roughness > 0) & p
    holes = flags & (roughness < 0) & p
    own_gap = np.abs(zm - local)

    # a spike voxel goes when the surface left behind sits closer to the local
    # mean radius: the interior voxels its removal exposes, or, on thin
    # structures that expose nothing, its inward foreground neighbor
    exposed_gap = np.full(p.shape, np.inf)
    inward_gap = np.full(p.shape, np.inf)
    # spikes are peeled from the tip: a voxel that still carries foreground
    # further out stays, or the tip would be cut loose as an island
    carries = np.zeros(p.shape, dtype=bool)
    for off in face_offsets(p.ndim):
        nb_fg = shifted(p, off, fill=False)
        nb_surf = shifted(surface, off, fill=False)
        nb_r = shifted(radius, off, fill=np.inf)
        with np.errstate(invalid="ignore"):
            gap = np.abs(nb_r - local)
        exposed_gap = np.fmin(exposed_gap, np.where(nb_fg & ~nb_surf, gap, np.inf))
        inward_gap = np.fmin(inward_gap, np.where(nb_fg & (nb_r < zm), gap, np.inf))
        carries |= nb_fg & (nb_r > zm + min_gain)
    behind_gap = np.where(np.isfinite(exposed_gap), exposed_gap, inward_gap)
    with np.errstate(invalid="ignore"):
        delete = spikes & ~carries & (behind_gap + min_gain <= own_gap)

    # the flanks of a spike read as holes, so filling waits until no spike is
    # left to peel; otherwise every pass would fillet the spike's base
    if delete.any():
        return _drop_stranded(p, p & ~delete)

    fill = np.zeros(p.shape, dtype=bool)
    for off in face_offsets(p.ndim):
        # view every voxel b as the neighbor b = v + off of a hole voxel v
        back = tuple(-o for o in off)
        from_hole = shifted(holes, back, fill=False)
        mean_v = shifted(local, back, fill=np.nan)
        gap_v = shifted(own_gap, back, fill=np.nan)
        with np.errstate(invalid="ignore"):
            closer = np.abs(radius - mean_v) + min_gain <= gap_v
        fill |= from_hole & ~p & closer

    return (p & ~delete) | fill


def smooth_to_reference(p, g, flags, zhat) -> np.ndarray:
    """One pass of the reference route.

    Flagged voxels with ``zhat > 0`` are prediction surface. Those outside the
    reference mask are deleted; those inside it are walls of a hole, and their
    background neighbors inside the reference are filled. Flagged voxels with
    ``zhat < 0`` are reference surface and are filled where the prediction is
    background.
    """
    p, g = as_mask(p), as_mask(g)
    flags = np.asarray(flags, dtype=bool)
    zhat = np.asarray(zhat, dtype=float)
    check_same_shape(p, g)
    check_same_shape(p, flags)
    check_same_shape(p, zhat)
    if not flags.any():
        return p.copy()

    pos = flags & (zhat > 0) & p
    delete = pos & ~g
    walls = pos & g
    fill = (flags & (zhat < 0) & ~p) | _fill_next_to(walls, ~p & g, p.ndim)
    return (p & ~delete) | fill


def smooth_iterative(p, kappa: float, max_iters: int = 50,
                     nb: NeighborhoodSpec = NeighborhoodSpec(), reference=None):
    """Alternate detection and smoothing until nothing is flagged or a state repeats.

    With ``reference`` (a ground-truth mask) the reference route is used and
    ``kappa`` thresholds the roughness distance; otherwise the mask's own
    roughness field is thresholded. Returns ``(mask, iterations)`` where
    ``iterations`` counts detection passes.
    """
    if kappa < 0:
        raise ValueError(f"kappa must be non-negative, got {kappa}")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    mask = as_mask(p).copy()
    if reference is not None:
        reference = as_mask(reference)
        check_same_shape(mask, reference)
        g_surface = extract_surface(reference)
        c_ref = centroid(g_surface)

    seen = {hashlib.sha1(np.packbits(mask).tobytes()).digest()}
    for it in range(1, max_iters + 1):
        if not mask.any():
            return mask, it
        surface = extract_surface(mask)
        if reference is not None:
            zhat = roughness_distance_field(surface, g_surface, c_ref)
            flags = detect_vs_reference(zhat, kappa)
            if not flags.any():
                return mask, it
            mask = smooth_to_reference(mask, reference, flags, zhat)
        else:
            c0 = centroid(surface)
            field = roughness_field(distance_field(surface, c0), surface, nb)
            flags = detect_irregularities(field, kappa)
            if not flags.any():
                return mask, it
            mask = smooth(mask, flags, field, c0, nb)
            # flags never clear on a digital surface at small kappa, so a pass
            # that returns to an earlier state (or changes nothing) ends the loop
            key = hashlib.sha1(np.packbits(mask).tobytes()).digest()
            if key in seen:
                return mask, it
            seen.add(key)
    return mask, max_iters
