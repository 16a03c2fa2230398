"""
hypermap - Hyperbolic Random Triangulations
Command-line entry point: analytic tables, samplers, the skeleton codec and verification runs
"""

import argparse
import os
import sys
from typing import Callable, Optional

# Add current dir to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import RunConfig, load_config
from experiments.report import report_json
from experiments.verify import EXPERIMENTS
from geodesics.slicing import slice_map
from geodesics.tree import geodesic_tree
from graph.workflow import run_hull_pipeline, run_verification
from model.series import SeriesKind, series_table
from planarmap.map import BOTTOM, PlanarMap
from planarmap.mapfile import dumps, loads, read_map, save_map
from planarmap.root_transform import inverse_root_transform, root_transform
from samplers.disk import DiskSampler, inner_vertex_count, sample_boltzmann_disk
from samplers.halfplane import sample_halfplane_ball
from samplers.reverse_tree import BALL, SPINE, TAU0, TAU1, TAU1_STAR, ReverseTreeSampler, sample_reverse_tree
from samplers.rng import RejectionBudgetExceeded, SizeCapExceeded, make_rng
from samplers.strip import S0, S1, sample_strip
from skeleton.codec import decode, dumps_skeleton, encode, filling_path, load_skeleton, save_skeleton
from skeleton.forest import dumps_forest
from skeleton.utree import dumps_geodesic_tree

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

DEFAULT_PMAX = 20
TABLE_KINDS = (SeriesKind.DISK_W, SeriesKind.CONE_C, SeriesKind.THETA, SeriesKind.PI, SeriesKind.MU)


class UsageError(ValueError):
    """Flags that parse but do not make sense together"""


class PipelineError(RuntimeError):
    """A sampling or verification stage failed on valid input"""


# ============================================================================
# Output helpers
# ============================================================================


def _emit(text: str, out: Optional[str]) -> None:
    """Data goes to stdout unless an output path is set"""
    if out:
        with open(out, "w") as f:
            f.write(text)
        print(f"✅ written to {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _numbered(out: str, i: int) -> str:
    stem, ext = os.path.splitext(out)
    return f"{stem}_{i}{ext}"


def _emit_many(texts: list[str], out: Optional[str]) -> None:
    if len(texts) == 1:
        _emit(texts[0], out)
        return
    if not out:
        raise UsageError("--samples > 1 needs --out; each sample goes to its own numbered file")
    for i, text in enumerate(texts):
        _emit(text, _numbered(out, i))


def _require_params(cfg: RunConfig):
    if cfg.params is None:
        raise UsageError("this command needs one of --lambda, --h, --m")
    return cfg.params


def _require_radius(cfg: RunConfig, minimum: int = 0) -> int:
    if cfg.radius is None:
        raise UsageError("this command needs --radius")
    if cfg.radius < minimum:
        raise UsageError(f"--radius must be at least {minimum}, got {cfg.radius}")
    return cfg.radius


def _read_map_arg(path: str) -> PlanarMap:
    if path == "-":
        return loads(sys.stdin.read())
    return read_map(path)


# ============================================================================
# Commands
# ============================================================================


def cmd_tables(cfg: RunConfig, args: argparse.Namespace) -> int:
    """w, c, theta, pi and mu up to --pmax, as 'kind index value' lines"""
    params = _require_params(cfg)
    kinds = list(TABLE_KINDS)
    if args.n is not None:
        kinds.append(SeriesKind.COUNT_TNP)
    lines = [f"# {params.describe()}"]
    for kind in kinds:
        table = series_table(params, kind, order=args.pmax, n=args.n or 0)
        lines.extend(f"{kind.value} {table.start + i} {v!r}" for i, v in enumerate(table.coefficients))
        if args.csv_dir:
            os.makedirs(args.csv_dir, exist_ok=True)
            path = os.path.join(args.csv_dir, f"{kind.value}.csv")
            table.to_csv(path)
            print(f"✅ {kind.value} table written to {path}", file=sys.stderr)
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_sample_disk(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = _require_params(cfg)
    rng = make_rng(cfg.seed)
    sampler = DiskSampler(params, cfg.size_cap)
    texts = []
    for _ in range(cfg.samples or 1):
        disk = sample_boltzmann_disk(params, args.perimeter, rng, cfg.size_cap, sampler)
        print(f"📍 disk of perimeter {args.perimeter}: {inner_vertex_count(disk)} inner vertices", file=sys.stderr)
        texts.append(dumps(disk))
    _emit_many(texts, cfg.out)
    return EXIT_OK


def cmd_sample_halfplane(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = _require_params(cfg)
    rng = make_rng(cfg.seed)
    disks = DiskSampler(params, cfg.size_cap)
    texts = []
    for _ in range(cfg.samples or 1):
        ball, log = sample_halfplane_ball(params, args.steps, rng, disks)
        cases = {c: sum(1 for case, _ in log if case == c) for c in ("I", "II", "III")}
        print(f"📍 {args.steps} peeling steps, cases {cases}", file=sys.stderr)
        texts.append(dumps(ball))
    _emit_many(texts, cfg.out)
    return EXIT_OK


def cmd_sample_hull(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = _require_params(cfg)
    r = _require_radius(cfg, minimum=1)
    rng = make_rng(cfg.seed)
    limits = {"size_cap": cfg.size_cap, "rejection_budget": cfg.rejection_budget}
    texts = []
    for _ in range(cfg.samples or 1):
        state = run_hull_pipeline(params, r, rng=rng, validate=args.validate, **limits)
        report = state.get("validation")
        if report is not None and not report.passed:
            return EXIT_FAILED
        if state.get("error"):
            raise PipelineError(state["error"])
        texts.append(dumps(state["hull"]))
    _emit_many(texts, cfg.out)
    return EXIT_OK


def cmd_sample_strip(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = _require_params(cfg)
    r = _require_radius(cfg, minimum=1)
    rng = make_rng(cfg.seed)
    trees = ReverseTreeSampler(params, cfg.rejection_budget)
    disks = DiskSampler(params, cfg.size_cap)
    texts = []
    for _ in range(cfg.samples or 1):
        strip = sample_strip(params, args.variant, r, rng, trees, disks)
        print(f"📍 strip {args.variant} of height {r}: {strip}", file=sys.stderr)
        texts.append(dumps(strip))
    _emit_many(texts, cfg.out)
    return EXIT_OK


def cmd_sample_tree(cfg: RunConfig, args: argparse.Namespace) -> int:
    params = _require_params(cfg)
    r = _require_radius(cfg)
    rng = make_rng(cfg.seed)
    sampler = ReverseTreeSampler(params, cfg.rejection_budget)
    texts = []
    for _ in range(cfg.samples or 1):
        forest = sample_reverse_tree(params, r, args.variant, rng, args.method, sampler)
        print(f"📍 ball of {args.variant}: {forest.num_trees} trees at the top, "
              f"{forest.bottom_size} vertices at reverse height 0", file=sys.stderr)
        texts.append(dumps_forest(forest))
    _emit_many(texts, cfg.out)
    return EXIT_OK


def cmd_encode(cfg: RunConfig, args: argparse.Namespace) -> int:
    """Cylinder (or hull in plane form) to forest file plus one map file per filling"""
    pmap = _read_map_arg(args.map)
    if BOTTOM not in pmap.holes:
        pmap = inverse_root_transform(pmap)
    sk = encode(pmap)
    if cfg.out:
        save_skeleton(sk, cfg.out, args.fills)
        print(f"✅ forest written to {cfg.out}, fillings under {args.fills}", file=sys.stderr)
    else:
        os.makedirs(args.fills, exist_ok=True)
        for v in sk.filled_vertices():
            save_map(sk.fillings[v], filling_path(args.fills, v))
        sys.stdout.write(dumps_skeleton(sk))
    print(f"📍 encoded {len(sk.forest)} forest vertices, {len(sk.fillings)} fillings", file=sys.stderr)
    return EXIT_OK


def cmd_decode(cfg: RunConfig, args: argparse.Namespace) -> int:
    sk = load_skeleton(args.forest, args.fills)
    pmap = decode(sk)
    if args.rooted:
        pmap = root_transform(pmap)
    _emit(dumps(pmap), cfg.out)
    return EXIT_OK


def cmd_geodesic_tree(cfg: RunConfig, args: argparse.Namespace) -> int:
    """Leftmost geodesic tree of a hull, optionally sliced into strips"""
    pmap = _read_map_arg(args.map)
    if BOTTOM in pmap.holes:
        pmap = root_transform(pmap)
    tree = geodesic_tree(pmap, cfg.radius)
    print(f"📍 {tree}", file=sys.stderr)
    if args.slices:
        os.makedirs(args.slices, exist_ok=True)
        for i, piece in enumerate(slice_map(pmap, tree)):
            save_map(piece.map, os.path.join(args.slices, f"slice{i}.map"))
        print(f"✅ {len(tree.leaves())} slices written under {args.slices}", file=sys.stderr)
    _emit(dumps_geodesic_tree(tree), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    overrides = {
        "lam": cfg.lam,
        "h": cfg.h,
        "m": cfg.m,
        "r": cfg.radius,
        "N": cfg.samples,
        "n": args.n,
        "p": args.p,
        "r_max": args.r_max,
        "radii": args.radii or ([cfg.radius] if cfg.radius is not None else None),
        "steps": args.steps,
        "lazy": True if args.lazy else None,
        "reference": args.reference,
        "lr_level": args.lr_level,
        "r_marginal": args.r_marginal,
    }
    state = run_verification(
        args.experiment,
        seed=cfg.seed,
        seeds=cfg.seeds,
        required=cfg.required,
        jobs=cfg.jobs,
        threshold=cfg.threshold,
        overrides={k: v for k, v in overrides.items() if v is not None},
        json_path=cfg.json_path,
        csv_path=cfg.csv_path,
        pdf_path=cfg.pdf_path,
    )
    if state.get("error"):
        raise PipelineError(state["error"])
    report = state["report"]
    if not cfg.json_path:
        sys.stdout.write(report_json(report) + "\n")
    return EXIT_OK if state["passed"] else EXIT_FAILED


COMMANDS: dict[str, Callable[[RunConfig, argparse.Namespace], int]] = {
    "tables": cmd_tables,
    "sample-disk": cmd_sample_disk,
    "sample-halfplane": cmd_sample_halfplane,
    "sample-hull": cmd_sample_hull,
    "sample-strip": cmd_sample_strip,
    "sample-tree": cmd_sample_tree,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "geodesic-tree": cmd_geodesic_tree,
    "verify": cmd_verify,
}


# ============================================================================
# Parser
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    model = common.add_mutually_exclusive_group()
    model.add_argument("--lambda", dest="lam", type=float, help="triangle weight, 0 < lambda <= lambda_c")
    model.add_argument("--h", type=float, help="0 < h <= 1/4")
    model.add_argument("--m", type=float, help="geodesic offspring parameter, 0 < m <= 1")
    common.add_argument("--radius", "--r", dest="radius", type=int)
    common.add_argument("--samples", "--N", dest="samples", type=int)
    common.add_argument("--seed", type=int, help="falls back to HYPERMAP_SEED")
    common.add_argument("--config", help="JSON file with RunConfig fields")
    common.add_argument("--out", help="write data here instead of stdout")
    common.add_argument("--size-cap", dest="size_cap", type=int)
    common.add_argument("--rejection-budget", dest="rejection_budget", type=int)

    parser = argparse.ArgumentParser(prog="hypermap", description="Hyperbolic random triangulations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", parents=[common], help="analytic tables")
    p.add_argument("--pmax", type=int, default=DEFAULT_PMAX)
    p.add_argument("--n", type=int, help="also tabulate the triangulation counts with n inner vertices")
    p.add_argument("--csv-dir", dest="csv_dir", help="one CSV (index, value) per table")

    p = sub.add_parser("sample-disk", parents=[common], help="Boltzmann triangulation of the p-gon")
    p.add_argument("--perimeter", "--p", dest="perimeter", type=int, default=1)

    p = sub.add_parser("sample-halfplane", parents=[common], help="peeling exploration of the half-plane")
    p.add_argument("--steps", type=int, default=10)

    p = sub.add_parser("sample-hull", parents=[common], help="hull of radius r of the plane")
    p.add_argument("--validate", action="store_true")

    p = sub.add_parser("sample-strip", parents=[common], help="strip of height r")
    p.add_argument("--variant", choices=[S0, S1], default=S0)

    p = sub.add_parser("sample-tree", parents=[common], help="ball of a reverse tree")
    p.add_argument("--variant", choices=[TAU0, TAU1, TAU1_STAR], default=TAU0)
    p.add_argument("--method", choices=[BALL, SPINE], default=BALL)

    p = sub.add_parser("encode", parents=[common], help="map file to forest and fillings")
    p.add_argument("map", help="map file, '-' for stdin")
    p.add_argument("--fills", default="fills", help="directory for the filling map files")

    p = sub.add_parser("decode", parents=[common], help="forest and fillings to map")
    p.add_argument("forest")
    p.add_argument("fills")
    p.add_argument("--rooted", action="store_true", help="remove the root loop")

    p = sub.add_parser("geodesic-tree", parents=[common], help="leftmost geodesic tree of a hull")
    p.add_argument("map", help="map file, '-' for stdin")
    p.add_argument("--slices", help="directory for the strips cut along the tree")

    p = sub.add_parser("verify", parents=[common], help="run a registered experiment")
    p.add_argument("experiment", choices=sorted(EXPERIMENTS))
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--r-max", dest="r_max", type=int)
    p.add_argument("--radii", nargs="+", type=int, help="radii of the reverse-tree check")
    p.add_argument("--steps", type=int)
    p.add_argument("--lazy", action="store_true")
    p.add_argument("--reference", choices=["yule", "exact"])
    p.add_argument("--lr-level", dest="lr_level", type=int)
    p.add_argument("--r-marginal", dest="r_marginal", type=int)
    p.add_argument("--seeds", type=int)
    p.add_argument("--required", type=int)
    p.add_argument("--jobs", type=int, help="worker processes for the replicates")
    p.add_argument("--threshold", type=float)
    p.add_argument("--json", dest="json_path")
    p.add_argument("--csv", dest="csv_path")
    p.add_argument("--pdf", dest="pdf_path")
    return parser


CONFIG_FLAGS = ("lam", "h", "m", "radius", "samples", "seed", "out", "size_cap", "rejection_budget",
                "seeds", "required", "jobs", "threshold", "json_path", "csv_path", "pdf_path")


def run(argv: Optional[list[str]] = None) -> int:
    """
    Parse argv, resolve the RunConfig and dispatch

    Returns:
        0 on success, 1 when a verification or a sampling stage fails, 2 on usage or domain errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    flags = {k: getattr(args, k, None) for k in CONFIG_FLAGS}
    try:
        cfg = load_config(args.command, flags, args.config)
        print(f"📍 config {cfg.audit()}", file=sys.stderr)
        return COMMANDS[args.command](cfg, args)
    except (PipelineError, SizeCapExceeded, RejectionBudgetExceeded) as e:
        print(f"⚠️ {args.command} failed: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (ValueError, OSError) as e:
        print(f"⚠️ {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(run())
