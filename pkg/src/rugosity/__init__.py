"""Segmentation mask evaluation with surface roughness metrics."""

__version__ = "0.1.0"

from .boundary_metrics import assd, directed_hausdorff, hausdorff
from .errors import EmptySurfaceError, FormatError, RugosityError, ShapeError, UndefinedMetricError
from .mask_core import centroid, distance_field, extract_surface, parse_mask, read_mask, serialize_mask, write_mask
from .region_metrics import OverlapCounts, dsc, jsc, overlap_counts, precision, recall, rvd, sensitivity, specificity, svd
from .roughness import (
    NeighborhoodSpec,
    RoughnessStats,
    WindowSpec,
    absolute_ri,
    default_window,
    detect_irregularities,
    mask_roughness,
    mask_roughness_index,
    roughness_field,
    roughness_index,
    roughness_ratio,
)
from .roughness_distance import ard, ard_surface, detect_vs_reference, roughness_distance_field
from .smoothing import smooth, smooth_iterative, smooth_to_reference
from .synth import Perturbation, ShapeSpec, generate, paper_suite
