"""Overlap metrics computed from voxel confusion counts.

The complement universe is the mask pair's own grid, so padding a pair
changes ``tn`` and therefore specificity.
"""

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedMetricError
from .mask_core import as_mask, check_same_shape


@dataclass(frozen=True)
class OverlapCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def pred_size(self) -> int:
        return self.tp + self.fp

    @property
    def gt_size(self) -> int:
        return self.tp + self.fn


def overlap_counts(p, g) -> OverlapCounts:
    p, g = as_mask(p), as_mask(g)
    check_same_shape(p, g)
    tp = int(np.count_nonzero(p & g))
    fp = int(np.count_nonzero(p & ~g))
    fn = int(np.count_nonzero(~p & g))
    return OverlapCounts(tp=tp, fp=fp, fn=fn, tn=p.size - tp - fp - fn)


def _ratio(num: int, den: int, what: str) -> float:
    if den == 0:
        raise UndefinedMetricError(f"{what} is undefined: zero denominator")
    return num / den


def dsc(c: OverlapCounts) -> float:
    """Dice similarity coefficient, 2|P∩G| / (|P|+|G|)."""
    return _ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, "DSC")


def svd(c: OverlapCounts) -> float:
    """Symmetric volume difference, 1 - DSC."""
    return 1.0 - dsc(c)


def jsc(c: OverlapCounts) -> float:
    """Jaccard coefficient |P∩G| / |P∪G|."""
    return _ratio(c.tp, c.tp + c.fp + c.fn, "JSC")


def precision(c: OverlapCounts) -> float:
    return _ratio(c.tp, c.pred_size, "precision")


def recall(c: OverlapCounts) -> float:
    return _ratio(c.tp, c.gt_size, "recall")


sensitivity = recall


def specificity(c: OverlapCounts) -> float:
    """|(P∪G)^C| / |G^C| over the grid."""
    return _ratio(c.tn, c.tn + c.fp, "specificity")


def rvd(c: OverlapCounts) -> float:
    """Relative volume difference ||P| - |G|| / |G|; blind to overlap."""
    return _ratio(abs(c.pred_size - c.gt_size), c.gt_size, "RVD")
