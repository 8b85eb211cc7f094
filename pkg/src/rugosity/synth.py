"""
Deterministic synthetic masks: disks, balls and stars with spikes and holes.

All shapes are centered at ``extent // 2`` on every axis. A perturbation
pushes the boundary outward (spike) or inward (hole) around one direction:

* ``irregular`` perturbations are straight beams with a square cross
  section of ``width`` voxels, so the distance to the center jumps abruptly;
* ``regular`` perturbations follow a raised-cosine profile in the angle to
  the direction, so the boundary ramps up and down gradually.

2D directions are angles in degrees, measured from the +axis1 direction
towards +axis0. 3D directions are ``(azimuth, elevation)`` pairs in degrees,
elevation towards +axis0. Axis strings such as ``"+1"`` or ``"-0"`` are
accepted in both cases. ``None`` draws a direction from the spec's seed.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

Direction = Union[None, float, Tuple[float, float], str]

KINDS = {"disk": 2, "ball": 3, "star": 2}

# five-pointed star: inner vertices at this fraction of the outer radius,
# first outer point towards -axis0
STAR_POINTS = 5
STAR_INNER_RATIO = 0.5
STAR_PHASE_DEG = -90.0

# angular half-width of a regular perturbation, as arc length in units of its length
REGULAR_SPREAD = 3.0

_EPS = 1e-9


@dataclass(frozen=True)
class Perturbation:
    type: str = "spike"
    length: int = 1
    width: int = 1
    regularity: str = "irregular"
    direction: Direction = None

    def __post_init__(self):
        if self.type not in ("spike", "hole"):
            raise ValueError(f"perturbation type must be spike or hole, got {self.type!r}")
        if self.regularity not in ("regular", "irregular"):
            raise ValueError(f"regularity must be regular or irregular, got {self.regularity!r}")
        if self.length < 1 or self.width < 1:
            raise ValueError("perturbation length and width must be >= 1")


@dataclass(frozen=True)
class ShapeSpec:
    kind: str
    extent: int
    radius: float
    seed: int = 0
    perturbations: Tuple[Perturbation, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown shape kind {self.kind!r}; expected one of {sorted(KINDS)}")
        if self.extent < 1:
            raise ValueError("extent must be positive")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "perturbations", tuple(self.perturbations))

    @property
    def ndim(self) -> int:
        return KINDS[self.kind]


# --------------------------------------------------------------------------
# directions
# --------------------------------------------------------------------------

def unit_vector(direction: Direction, ndim: int, rng: np.random.Generator) -> np.ndarray:
    if direction is None:
        if ndim == 2:
            direction = float(rng.uniform(0.0, 360.0))
        else:
            v = rng.normal(size=3)
            return _clean(v / np.linalg.norm(v))
    if isinstance(direction, str):
        sign = -1.0 if direction.startswith("-") else 1.0
        axis = int(direction.lstrip("+-"))
        if not 0 <= axis < ndim:
            raise ValueError(f"axis {axis} out of range for {ndim}D")
        u = np.zeros(ndim)
        u[axis] = sign
        return u
    if ndim == 2:
        if not np.isscalar(direction):
            raise ValueError("2D directions are a single angle in degrees")
        a = math.radians(float(direction))
        return _clean(np.array([math.sin(a), math.cos(a)]))
    az, el = (math.radians(float(x)) for x in direction)
    return _clean(np.array([math.sin(el), math.cos(el) * math.sin(az), math.cos(el) * math.cos(az)]))


def _clean(u: np.ndarray) -> np.ndarray:
    # exact zeros/ones on axis-aligned directions keep beams one voxel wide
    u = np.round(u, 12)
    return u / np.linalg.norm(u)


def _perp_basis(u: np.ndarray) -> list:
    if len(u) == 2:
        return [np.array([-u[1], u[0]])]
    e = np.zeros(3)
    e[int(np.argmin(np.abs(u)))] = 1.0
    n1 = _clean(np.cross(u, e))
    n2 = _clean(np.cross(u, n1))
    return [n1, n2]


# --------------------------------------------------------------------------
# base shapes
# --------------------------------------------------------------------------

def star_vertices(radius: float) -> np.ndarray:
    """Polygon vertices (axis0, axis1) offsets from the center."""
    out = []
    for k in range(2 * STAR_POINTS):
        r = radius if k % 2 == 0 else radius * STAR_INNER_RATIO
        a = math.radians(STAR_PHASE_DEG + 180.0 * k / STAR_POINTS)
        out.append((r * math.sin(a), r * math.cos(a)))
    return np.array(out)


def scanline_fill(vertices: np.ndarray, shape) -> np.ndarray:
    """Rasterize a closed polygon (vertex rows are (axis0, axis1)) by even-odd scanlines.

    A voxel is filled when its center lies between a pair of edge crossings
    of its row; edges use the half-open rule on their axis0 span.
    """
    out = np.zeros(shape, dtype=bool)
    ys, xs = vertices[:, 0], vertices[:, 1]
    nv = len(vertices)
    for row in range(shape[0]):
        y = float(row)
        crossings = []
        for k in range(nv):
            y0, x0, y1, x1 = ys[k], xs[k], ys[(k + 1) % nv], xs[(k + 1) % nv]
            if (y0 <= y < y1) or (y1 <= y < y0):
                crossings.append(x0 + (y - y0) * (x1 - x0) / (y1 - y0))
        crossings.sort()
        for xa, xb in zip(crossings[0::2], crossings[1::2]):
            lo = max(0, math.ceil(xa - _EPS))
            hi = min(shape[1] - 1, math.floor(xb + _EPS))
            if lo <= hi:
                out[row, lo:hi + 1] = True
    return out


def _ray_polygon_radius(dirs: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Distance from the origin to the polygon boundary along each unit direction."""
    best = np.zeros(len(dirs))
    nv = len(vertices)
    for k in range(nv):
        a, b = vertices[k], vertices[(k + 1) % nv]
        e = b - a
        # solve t*d = a + s*e  for t >= 0, s in [0, 1]
        den = dirs[:, 0] * (-e[1]) - dirs[:, 1] * (-e[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (a[0] * (-e[1]) - a[1] * (-e[0])) / den
            s = (dirs[:, 0] * a[1] - dirs[:, 1] * a[0]) / den
        ok = (np.abs(den) > 1e-12) & (t >= 0) & (s >= -1e-12) & (s <= 1 + 1e-12)
        best = np.where(ok, np.maximum(best, np.where(ok, t, 0.0)), best)
    return best


def boundary_radius(spec: ShapeSpec, dirs: np.ndarray) -> np.ndarray:
    """Radial distance from the center to the base shape's boundary along unit ``dirs``."""
    if spec.kind == "star":
        return _ray_polygon_radius(dirs, star_vertices(spec.radius))
    return np.full(len(dirs), float(spec.radius))


def base_shape(spec: ShapeSpec) -> np.ndarray:
    shape = (spec.extent,) * spec.ndim
    c = spec.extent // 2
    if spec.kind == "star":
        return scanline_fill(star_vertices(spec.radius) + c, shape)
    d = np.indices(shape, dtype=float) - c
    return (d ** 2).sum(axis=0) <= spec.radius ** 2 + _EPS


# --------------------------------------------------------------------------
# perturbations
# --------------------------------------------------------------------------

def _offsets(spec: ShapeSpec) -> np.ndarray:
    shape = (spec.extent,) * spec.ndim
    return (np.indices(shape, dtype=float) - spec.extent // 2).reshape(spec.ndim, -1).T


def _beam(spec: ShapeSpec, pert: Perturbation, u: np.ndarray, d: np.ndarray):
    """Along-beam coordinate and cross-section membership of each voxel offset."""
    t = d @ u
    k = (pert.width - 1) // 2
    inside = t >= -_EPS
    for n in _perp_basis(u):
        s = d @ n
        inside &= (s >= -0.5 - k - _EPS) & (s < pert.width - 0.5 - k - _EPS)
    return t, inside


def _apply(mask: np.ndarray, spec: ShapeSpec, pert: Perturbation, u: np.ndarray) -> None:
    d = _offsets(spec)
    r_u = float(boundary_radius(spec, u[None, :])[0])
    flat = mask.reshape(-1)
    if pert.regularity == "irregular":
        t, beam = _beam(spec, pert, u, d)
        if pert.type == "spike":
            flat |= beam & (t <= r_u + pert.length + _EPS)
        else:
            flat &= ~(beam & (t > r_u - pert.length + _EPS))
        return

    norm = np.sqrt((d ** 2).sum(axis=1))
    safe = np.where(norm > 0, norm, 1.0)
    dirs = d / safe[:, None]
    phi = np.arccos(np.clip(dirs @ u, -1.0, 1.0))
    plateau = (pert.width - 1) / (2.0 * r_u)
    spread = min(math.pi / 2, REGULAR_SPREAD * pert.length / r_u)
    x = np.clip((phi - plateau) / spread, 0.0, 1.0)
    h = np.where(x < 1.0, pert.length * 0.5 * (1.0 + np.cos(math.pi * x)), 0.0)
    r_dir = boundary_radius(spec, dirs) if spec.kind == "star" else np.full(len(d), r_u)
    if pert.type == "spike":
        flat |= (h > 0) & (norm <= r_dir + h + _EPS)
    else:
        flat &= ~((h > 0) & (norm > r_dir - h + _EPS))


def _check_fit(spec: ShapeSpec, tips: list) -> None:
    c = spec.extent // 2
    if c - spec.radius < -0.5 or c + spec.radius > spec.extent - 0.5:
        raise ValueError(f"radius {spec.radius} does not fit in extent {spec.extent}")
    for tip in tips:
        pos = c + tip
        if np.any(pos < -0.5) or np.any(pos > spec.extent - 0.5):
            raise ValueError(f"perturbation tip at {np.round(pos, 3).tolist()} lies outside the grid")


def generate(spec: ShapeSpec) -> np.ndarray:
    """Rasterize ``spec`` into a boolean mask; same spec gives the same mask."""
    rng = np.random.default_rng(np.uint64(spec.seed % 2 ** 64))
    units = [unit_vector(p.direction, spec.ndim, rng) for p in spec.perturbations]
    tips = []
    for pert, u in zip(spec.perturbations, units):
        if pert.type == "spike":
            tips.append(u * (float(boundary_radius(spec, u[None, :])[0]) + pert.length))
    _check_fit(spec, tips)
    for pert, u in zip(spec.perturbations, units):
        if pert.type == "hole" and pert.length >= float(boundary_radius(spec, u[None, :])[0]):
            raise ValueError("hole is deeper than the shape")

    mask = base_shape(spec)
    for pert, u in zip(spec.perturbations, units):
        _apply(mask, spec, pert, u)
    return mask


# --------------------------------------------------------------------------
# reconstruction of the little/many-spike experiment
# --------------------------------------------------------------------------

SUITE_EXTENT = 100
SUITE_RADIUS_2D = 29
SUITE_RADIUS_3D = 29
SUITE_SPIKE_WIDTH = 2
MANY_SPIKE_LENGTHS = (20, 14, 12, 10, 8, 6, 4, 3)
MANY_SPIKE_DIRECTIONS_2D = (0.0, 45.0, 90.0, 135.0, 180.0, 225.0, 270.0, 315.0)
MANY_SPIKE_DIRECTIONS_3D = ("+2", "-2", "+1", "-1", "+0", "-0", (45.0, 45.0), (225.0, -45.0))


def _spikes(lengths, directions, width) -> tuple:
    return tuple(
        Perturbation("spike", length, width, "irregular", direction)
        for length, direction in zip(lengths, directions)
    )


def paper_suite_specs() -> dict:
    w = SUITE_SPIKE_WIDTH
    return {
        "gt2d": ShapeSpec("disk", SUITE_EXTENT, SUITE_RADIUS_2D),
        "little2d": ShapeSpec("disk", SUITE_EXTENT, SUITE_RADIUS_2D,
                              perturbations=_spikes((20,), (0.0,), w)),
        "many2d": ShapeSpec("disk", SUITE_EXTENT, SUITE_RADIUS_2D,
                            perturbations=_spikes(MANY_SPIKE_LENGTHS, MANY_SPIKE_DIRECTIONS_2D, w)),
        "gt3d": ShapeSpec("ball", SUITE_EXTENT, SUITE_RADIUS_3D),
        "little3d": ShapeSpec("ball", SUITE_EXTENT, SUITE_RADIUS_3D,
                              perturbations=_spikes((20,), ("+2",), w)),
        "many3d": ShapeSpec("ball", SUITE_EXTENT, SUITE_RADIUS_3D,
                            perturbations=_spikes(MANY_SPIKE_LENGTHS, MANY_SPIKE_DIRECTIONS_3D, w)),
    }


def paper_suite() -> dict:
    """Ground truth, single-spike and many-spike masks in 2D and 3D, keyed by file stem."""
    return {name: generate(spec) for name, spec in paper_suite_specs().items()}
