import itertools
import math
import sys

import numpy as np
import pytest
from hypothesis import strategies as st


# --------------------------------------------------------------------------
# brute-force oracles, deliberately written without numpy vectorization
# --------------------------------------------------------------------------

def surface_by_scan(mask):
    """Per-voxel face-neighbor scan."""
    mask = np.asarray(mask, dtype=bool)
    out = np.zeros_like(mask)
    for v in itertools.product(*(range(n) for n in mask.shape)):
        if not mask[v]:
            continue
        for axis in range(mask.ndim):
            for step in (-1, 1):
                u = list(v)
                u[axis] += step
                if not 0 <= u[axis] < mask.shape[axis] or not mask[tuple(u)]:
                    out[v] = True
    return out


def points(surface):
    return [tuple(int(x) for x in v) for v in zip(*np.nonzero(surface))]


def nearest_all_pairs(src, dst):
    return [min(math.dist(a, b) for b in dst) for a in src]


def hausdorff_oracle(sp, sg):
    p, g = points(sp), points(sg)
    return max(max(nearest_all_pairs(g, p)), max(nearest_all_pairs(p, g)))


def assd_oracle(sp, sg):
    p, g = points(sp), points(sg)
    d = nearest_all_pairs(g, p) + nearest_all_pairs(p, g)
    return math.fsum(d) / len(d)


def counts_oracle(p, g):
    tp = fp = fn = tn = 0
    for a, b in zip(np.asarray(p).ravel().tolist(), np.asarray(g).ravel().tolist()):
        if a and b:
            tp += 1
        elif a:
            fp += 1
        elif b:
            fn += 1
        else:
            tn += 1
    return tp, fp, fn, tn


def ri_oracle(surface, w):
    """Explicit window loop."""
    surface = np.asarray(surface, dtype=bool)
    pts = np.argwhere(surface).astype(float)
    c0 = pts.mean(axis=0)
    devs = []
    for corner in itertools.product(*(range(0, n, w) for n in surface.shape)):
        zs = []
        for v in np.argwhere(surface):
            if all(corner[k] <= v[k] < corner[k] + w for k in range(surface.ndim)):
                zs.append(math.dist(v, c0))
        if zs:
            m = sum(zs) / len(zs)
            devs.append(sum(abs(z - m) for z in zs) / len(zs))
    return sum(devs) / len(devs)


def delta_zeta_oracle(zeta, surface, radius=1):
    """Per-voxel neighborhood sum of zeta differences."""
    out = np.zeros(zeta.shape)
    for v in zip(*np.nonzero(surface)):
        total = 0.0
        for off in itertools.product(range(-radius, radius + 1), repeat=zeta.ndim):
            if not any(off):
                continue
            u = tuple(a + b for a, b in zip(v, off))
            if all(0 <= u[k] < zeta.shape[k] for k in range(zeta.ndim)) and surface[u]:
                total += zeta[v] - zeta[u]
        out[v] = total
    return out


# --------------------------------------------------------------------------
# strategies
# --------------------------------------------------------------------------

@st.composite
def masks(draw, ndim=None, max_side=12, min_side=1, nonempty=False):
    if ndim is None:
        ndim = draw(st.sampled_from([2, 3]))
    side_cap = max_side if ndim == 2 else max(min_side, max_side // 2)
    shape = tuple(draw(st.integers(min_side, side_cap)) for _ in range(ndim))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    density = draw(st.floats(0.05, 0.95))
    rng = np.random.default_rng(seed)
    m = rng.random(shape) < density
    if nonempty and not m.any():
        m[tuple(rng.integers(0, n) for n in shape)] = True
    return m


@st.composite
def mask_pairs(draw, ndim=None, max_side=12, nonempty=False):
    a = draw(masks(ndim=ndim, max_side=max_side, nonempty=nonempty))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    density = draw(st.floats(0.05, 0.95))
    b = np.random.default_rng(seed).random(a.shape) < density
    if nonempty and not b.any():
        b.flat[0] = True
    return a, b


@pytest.fixture(scope="session")
def suite():
    from rugosity.synth import paper_suite
    return paper_suite()


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
