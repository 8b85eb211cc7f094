"""Command-line entry point: ``rugosity {metrics,sweep,smooth,synth}``.

Exit codes: 0 ok, 2 I/O or format error, 3 shape mismatch, 4 degenerate
metric under ``--strict``.
"""

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__
from .boundary_metrics import assd, hausdorff
from .errors import EmptySurfaceError, FormatError, ShapeError, UndefinedMetricError
from .mask_core import (
    centroid,
    check_same_shape,
    distance_field,
    extract_surface,
    read_mask,
    write_mask,
)
from .region_metrics import dsc, jsc, overlap_counts, precision, recall, rvd, specificity, svd
from .roughness import (
    NeighborhoodSpec,
    WindowSpec,
    default_window,
    detect_irregularities,
    roughness_field,
    roughness_index,
    roughness_ratio,
)
from .roughness_distance import ard, ard_surface, detect_vs_reference, roughness_distance_field
from .smoothing import smooth_iterative
from .synth import KINDS, Perturbation, ShapeSpec, generate, paper_suite

EXIT_OK = 0
EXIT_IO = 2
EXIT_SHAPE = 3
EXIT_DEGENERATE = 4

SWEEP_HEADER = ("window", "ri_gt", "ri_pred", "rr")
REPORT_HEADER = ("kind", "name", "value")


class Degenerate(Exception):
    """A metric was undefined and ``--strict`` was given."""


class Report:
    """Ordered metric values plus the parameters that produced them."""

    def __init__(self, strict: bool):
        self.strict = strict
        self.metrics = {}
        self.parameters = {}

    def add(self, name, fn, *args):
        try:
            value = fn(*args)
        except (UndefinedMetricError, EmptySurfaceError) as exc:
            self._skip(name, str(exc))
            return None
        if isinstance(value, float) and not math.isfinite(value):
            self._skip(name, f"non-finite value {value}")
            return None
        self.metrics[name] = value
        return value

    def _skip(self, name, why):
        if self.strict:
            raise Degenerate(f"{name}: {why}")
        print(f"warning: {name} omitted ({why})", file=sys.stderr)

    def as_dict(self):
        return {"version": __version__, "parameters": self.parameters, "metrics": self.metrics}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2) + "\n"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(REPORT_HEADER)
        w.writerow(("meta", "version", __version__))
        for k, v in self.parameters.items():
            w.writerow(("parameter", k, _fmt(v)))
        for k, v in self.metrics.items():
            w.writerow(("metric", k, _fmt(v)))
        return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "x".join(str(x) for x in v)
    if v is None:
        return ""
    return str(v)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_pair(pred_path, gt_path):
    p = read_mask(pred_path)
    g = read_mask(gt_path)
    check_same_shape(p, g)
    return p, g


def _window(args, shape) -> WindowSpec:
    win = WindowSpec(args.window if args.window is not None else default_window(shape))
    win.check(shape)
    return win


def _ri(surface, win):
    return roughness_index(surface, win=win).ri


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_metrics(args) -> int:
    p, g = _load_pair(args.pred, args.gt)
    win = _window(args, p.shape)
    nb = NeighborhoodSpec(args.radius)
    rep = Report(args.strict)
    rep.parameters.update(
        window=win.w, kappa=float(args.kappa), kappa_c=float(args.kappa_c),
        radius=nb.radius, dims=list(p.shape),
    )

    c = overlap_counts(p, g)
    for name, fn in (("DSC", dsc), ("SVD", svd), ("JSC", jsc), ("Pre", precision),
                     ("Rec", recall), ("Spec", specificity), ("RVD", rvd)):
        rep.add(name, fn, c)

    sp, sg = extract_surface(p), extract_surface(g)
    rep.add("HDD", hausdorff, sp, sg)
    rep.add("ASSD", assd, sp, sg)

    ri_p = rep.add("RI_pred", _ri, sp, win)
    ri_g = rep.add("RI_gt", _ri, sg, win)
    if ri_p is not None and ri_g is not None:
        rep.add("RI_Absolute", lambda: ri_p - ri_g)
        rep.add("RR", roughness_ratio, ri_p, ri_g)

    if sg.any():
        zhat = roughness_distance_field(sp, sg)
        rep.add("ARD", ard, zhat)
        rep.add("ARD_surface", ard_surface, zhat, sp, sg)
        rep.add("flags_distance", lambda: int(detect_vs_reference(zhat, args.kappa_c).sum()))
    else:
        rep._skip("ARD", "reference surface is empty")

    for name, s in (("flags_pred", sp), ("flags_gt", sg)):
        if s.any():
            field = roughness_field(distance_field(s, centroid(s)), s, nb)
            rep.metrics[name] = int(detect_irregularities(field, args.kappa).sum())
        else:
            rep._skip(name, "surface is empty")

    _emit(rep.render(args.format), args.out)
    return EXIT_OK


def _band(n: int):
    lo = max(1, int(math.floor(0.03 * n + 0.5)))
    hi = max(lo, int(math.floor(0.10 * n + 0.5)))
    return lo, min(hi, n)


def cmd_sweep(args) -> int:
    p, g = _load_pair(args.pred, args.gt)
    n = min(p.shape)
    lo, hi = _band(n)
    w_min = args.w_min if args.w_min is not None else lo
    w_max = args.w_max if args.w_max is not None else hi
    if not 1 <= w_min <= w_max <= n:
        raise ValueError(f"need 1 <= w_min <= w_max <= {n}, got {w_min}, {w_max}")
    sp, sg = extract_surface(p), extract_surface(g)
    windows = range(w_min, w_max + 1)
    if not sp.any() or not sg.any():
        if args.strict:
            raise Degenerate("sweep needs two non-empty surfaces")
        print("warning: empty surface, no rows written", file=sys.stderr)
        windows = range(0)

    rows = []
    for w in windows:
        win = WindowSpec(w)
        ri_g, ri_p = _ri(sg, win), _ri(sp, win)
        try:
            rr = roughness_ratio(ri_p, ri_g)
        except UndefinedMetricError as exc:
            if args.strict:
                raise Degenerate(f"rr at window {w}: {exc}")
            print(f"warning: rr omitted at window {w} ({exc})", file=sys.stderr)
            rr = None
        rows.append((w, ri_g, ri_p, rr))

    if args.format == "json":
        text = json.dumps({
            "version": __version__,
            "parameters": {"w_min": w_min, "w_max": w_max, "dims": list(p.shape)},
            "rows": [dict(zip(SWEEP_HEADER, r)) for r in rows],
        }, indent=2) + "\n"
    else:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(SWEEP_HEADER)
        for r in rows:
            wr.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def cmd_smooth(args) -> int:
    mask = read_mask(args.input)
    gt = None
    if args.gt:
        gt = read_mask(args.gt)
        check_same_shape(mask, gt)
    win = _window(args, mask.shape)
    nb = NeighborhoodSpec(args.radius)
    kappa = args.kappa_c if gt is not None else args.kappa
    out, iters = smooth_iterative(mask, kappa, args.max_iters, nb, reference=gt)
    write_mask(args.out, out)

    rep = Report(args.strict)
    rep.parameters.update(
        route="reference" if gt is not None else "roughness", window=win.w,
        kappa=float(args.kappa), kappa_c=float(args.kappa_c), radius=nb.radius,
        max_iters=args.max_iters, dims=list(mask.shape),
    )
    rep.metrics["iterations"] = iters
    rep.metrics["deleted"] = int((mask & ~out).sum())
    rep.metrics["filled"] = int((out & ~mask).sum())
    before = rep.add("RI_before", _ri, extract_surface(mask), win)
    after = rep.add("RI_after", _ri, extract_surface(out), win)
    if gt is not None:
        ri_g = rep.add("RI_gt", _ri, extract_surface(gt), win)
        if ri_g is not None:
            if before is not None:
                rep.add("RI_Absolute_before", lambda: before - ri_g)
            if after is not None:
                rep.add("RI_Absolute_after", lambda: after - ri_g)
    sys.stdout.write(rep.render(args.format))
    return EXIT_OK


def _direction(text: str, ndim: int):
    if text in ("", "random"):
        return None
    if text[0] in "+-" and text[1:].isdigit():
        return text
    parts = [float(x) for x in text.split(",")]
    if ndim == 2 and len(parts) == 1:
        return parts[0]
    if ndim == 3 and len(parts) == 2:
        return tuple(parts)
    raise ValueError(f"bad direction {text!r} for a {ndim}D shape")


def _perturbation(text: str, ndim: int) -> Perturbation:
    """``spike|hole:LENGTH[:WIDTH[:DIRECTION[:irregular|regular]]]``."""
    parts = text.split(":")
    if len(parts) < 2 or len(parts) > 5:
        raise ValueError(f"bad perturbation {text!r}")
    kind, length = parts[0], int(parts[1])
    width = int(parts[2]) if len(parts) > 2 and parts[2] else 1
    direction = _direction(parts[3], ndim) if len(parts) > 3 else None
    regularity = parts[4] if len(parts) > 4 else "irregular"
    return Perturbation(kind, length, width, regularity, direction)


def cmd_synth(args) -> int:
    if args.paper_suite:
        root = Path(args.paper_suite)
        root.mkdir(parents=True, exist_ok=True)
        for name, mask in paper_suite().items():
            write_mask(root / f"{name}.mvox", mask)
        return EXIT_OK
    if not args.out:
        raise ValueError("synth needs --out or --paper-suite")
    ndim = KINDS[args.shape]
    perts = tuple(_perturbation(t, ndim) for t in args.perturb)
    spec = ShapeSpec(args.shape, args.extent, args.size, args.seed, perts)
    write_mask(args.out, generate(spec))
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _non_negative(text: str) -> float:
    v = float(text)
    if not math.isfinite(v) or v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rugosity", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, kappas=True):
        sp.add_argument("--window", type=_positive_int, default=None,
                        help="roughness window edge (default: 7%% of the smallest extent)")
        if kappas:
            sp.add_argument("--kappa", type=_non_negative, default=0.0)
            sp.add_argument("--kappa-c", type=_non_negative, default=0.0)
            sp.add_argument("--radius", type=_positive_int, default=1,
                            help="neighborhood radius for the roughness field")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--strict", action="store_true",
                        help="exit 4 instead of omitting an undefined metric")

    m = sub.add_parser("metrics", help="overlap, boundary and roughness metrics for a pair")
    m.add_argument("pred")
    m.add_argument("gt")
    common(m)
    m.add_argument("--out", default=None, help="write the report here instead of stdout")
    m.set_defaults(func=cmd_metrics)

    s = sub.add_parser("sweep", help="RI and RR over a range of window sizes")
    s.add_argument("pred")
    s.add_argument("gt")
    s.add_argument("--w-min", type=_positive_int, default=None)
    s.add_argument("--w-max", type=_positive_int, default=None)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--strict", action="store_true")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sweep)

    sm = sub.add_parser("smooth", help="iterative spike removal and hole filling")
    sm.add_argument("input")
    sm.add_argument("--out", required=True, help="smoothed mask path")
    sm.add_argument("--gt", default=None, help="reference mask; switches to the reference route")
    sm.add_argument("--max-iters", type=_positive_int, default=50)
    common(sm)
    sm.set_defaults(func=cmd_smooth)

    sy = sub.add_parser("synth", help="synthetic disks, balls and stars")
    sy.add_argument("--shape", choices=sorted(KINDS), default="disk")
    sy.add_argument("--extent", type=_positive_int, default=100)
    sy.add_argument("--size", type=float, default=29.0, help="shape radius in voxels")
    sy.add_argument("--perturb", action="append", default=[],
                    metavar="TYPE:LEN[:WIDTH[:DIR[:REG]]]",
                    help="e.g. spike:20:2:0 or hole:5:1:45,30:regular (repeatable)")
    sy.add_argument("--seed", type=int, default=0)
    sy.add_argument("--out", default=None)
    sy.add_argument("--paper-suite", default=None, metavar="DIR",
                    help="write the six reference masks into DIR")
    sy.set_defaults(func=cmd_synth)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except Degenerate as exc:
        print(f"error: degenerate metric: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (OSError, FormatError, EmptySurfaceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
