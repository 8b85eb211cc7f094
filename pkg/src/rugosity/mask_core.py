"""
Voxel-grid foundation.

Masks are plain numpy arrays of dtype ``bool`` with 2 or 3 axes. Surfaces
are boolean arrays of the same shape, and distance fields are ``float64``
arrays that are zero away from the surface.
"""

import itertools
import re

import numpy as np

from .errors import EmptySurfaceError, FormatError, ShapeError

MAGIC = b"MVOX"
_HEADER_RE = re.compile(rb"MVOX (2|3)((?: [0-9]+){2,3})\Z")


def as_mask(data) -> np.ndarray:
    """Validate ``data`` as a binary 2D/3D mask and return it as a bool array.

    Raises ``ValueError`` if any element is not exactly 0 or 1 and
    ``ShapeError`` for unsupported dimensionality or empty extents.
    """
    arr = np.asarray(data)
    if arr.ndim not in (2, 3):
        raise ShapeError(f"mask must be 2D or 3D, got {arr.ndim} axes")
    if any(n < 1 for n in arr.shape):
        raise ShapeError(f"mask extents must be positive, got {arr.shape}")
    if arr.dtype == bool:
        return arr
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("mask values must be 0 or 1")
    return arr.astype(bool)


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"grid shapes differ: {a.shape} vs {b.shape}")


# --------------------------------------------------------------------------
# MVOX serialization
# --------------------------------------------------------------------------

def parse_mask(raw: bytes) -> np.ndarray:
    """Decode an MVOX byte string into a mask.

    The format is an ASCII header ``MVOX <ndim> <d0> <d1> [<d2>]`` terminated
    by a newline, followed by exactly ``prod(dims)`` bytes in C order, each
    0x00 or 0x01.
    """
    raw = bytes(raw)
    if not raw.startswith(MAGIC):
        raise FormatError("bad magic: expected MVOX header")
    end = raw.find(b"\n")
    if end < 0:
        raise FormatError("unterminated MVOX header")
    match = _HEADER_RE.match(raw[:end])
    if match is None:
        raise FormatError(f"malformed MVOX header: {raw[:end]!r}")
    ndim = int(match.group(1))
    dims = tuple(int(tok) for tok in match.group(2).split())
    if len(dims) != ndim:
        raise FormatError(f"header declares {ndim} axes but lists {len(dims)} extents")
    if any(d < 1 for d in dims):
        raise FormatError(f"extents must be positive, got {dims}")
    payload = raw[end + 1:]
    expected = int(np.prod(dims))
    if len(payload) != expected:
        raise FormatError(f"payload has {len(payload)} bytes, header requires {expected}")
    data = np.frombuffer(payload, dtype=np.uint8)
    if data.size and data.max() > 1:
        raise ValueError("payload bytes must be 0x00 or 0x01")
    return data.reshape(dims).astype(bool)


def serialize_mask(mask) -> bytes:
    mask = as_mask(mask)
    header = "MVOX {} {}\n".format(mask.ndim, " ".join(str(d) for d in mask.shape))
    return header.encode("ascii") + np.ascontiguousarray(mask, dtype=np.uint8).tobytes()


def read_mask(path) -> np.ndarray:
    with open(path, "rb") as fh:
        return parse_mask(fh.read())


def write_mask(path, mask) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_mask(mask))


# --------------------------------------------------------------------------
# neighborhoods
# --------------------------------------------------------------------------

def face_offsets(ndim: int) -> list:
    """Offsets of the 4- (2D) or 6- (3D) face neighborhood."""
    out = []
    for axis in range(ndim):
        for step in (-1, 1):
            off = [0] * ndim
            off[axis] = step
            out.append(tuple(off))
    return out


def box_offsets(ndim: int, radius: int = 1) -> list:
    """All offsets of the (2r+1)^ndim cube except the center."""
    rng = range(-radius, radius + 1)
    return [off for off in itertools.product(rng, repeat=ndim) if any(off)]


def shifted(arr: np.ndarray, offset, fill=0) -> np.ndarray:
    """Return ``out`` with ``out[v] = arr[v + offset]``, ``fill`` where out of grid."""
    out = np.full_like(arr, fill)
    src, dst = [], []
    for o, n in zip(offset, arr.shape):
        if abs(o) >= n:
            return out
        if o >= 0:
            src.append(slice(o, n))
            dst.append(slice(0, n - o))
        else:
            src.append(slice(0, n + o))
            dst.append(slice(-o, n))
    out[tuple(dst)] = arr[tuple(src)]
    return out


# --------------------------------------------------------------------------
# surface, centroid, distance field
# --------------------------------------------------------------------------

def extract_surface(mask) -> np.ndarray:
    """Foreground voxels with at least one face-adjacent background voxel.

    Voxels outside the grid count as background, so objects touching the
    border have surface there.
    """
    mask = as_mask(mask)
    interior = mask.copy()
    for off in face_offsets(mask.ndim):
        interior &= shifted(mask, off, fill=False)
    return mask & ~interior


def surface_coords(surface: np.ndarray) -> np.ndarray:
    """(n, ndim) integer coordinates of surface voxels in C order."""
    return np.argwhere(surface)


def centroid(surface) -> np.ndarray:
    """Mean position of the surface voxels, one real coordinate per axis."""
    surface = np.asarray(surface, dtype=bool)
    pts = surface_coords(surface)
    if len(pts) == 0:
        raise EmptySurfaceError("centroid of an empty surface is undefined")
    return pts.mean(axis=0)


def radial_distance(shape, c0) -> np.ndarray:
    """Euclidean distance of every voxel center of a grid to ``c0``."""
    c0 = np.asarray(c0, dtype=float)
    if c0.shape != (len(shape),):
        raise ShapeError(f"centroid has {c0.size} coordinates, grid has {len(shape)} axes")
    grids = np.indices(shape, dtype=float)
    sq = np.zeros(shape, dtype=float)
    for axis in range(len(shape)):
        sq += (grids[axis] - c0[axis]) ** 2
    return np.sqrt(sq)


def distance_field(surface, c0) -> np.ndarray:
    """Distance of each surface voxel to ``c0``; zero everywhere else."""
    surface = np.asarray(surface, dtype=bool)
    c0 = np.asarray(c0, dtype=float)
    if not np.all(np.isfinite(c0)):
        raise ValueError("centroid must be finite")
    return np.where(surface, radial_distance(surface.shape, c0), 0.0)
