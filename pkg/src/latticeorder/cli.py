"""Command line: generate/ingest -> persist -> score -> report.

Exit codes: 0 success, 2 usage, 3 input format, 4 computation,
5 internal consistency. Every command is deterministic for fixed inputs:
re-runs produce byte-identical files.
"""

import argparse
import json
import os
import sys

import numpy as np

from .errors import FileFormatError, LatticeOrderError
from .imaging import (
    GrayImage,
    RegionGrowParams,
    default_max_region_px,
    match_grids,
    region_grow,
    to_grayscale,
)
from .imgio import read_pgm, read_png
from .lattice import (
    UNIT_NORMALIZED,
    UNIT_PIXELS,
    LatticeSpec,
    NominalGridSpec,
    PerturbationSpec,
    Point2,
    PointCloud,
    cloud_from_csv,
    cloud_from_json,
    cloud_to_csv,
    cloud_to_json,
    gen_lattice,
    gen_nominal_grid,
    perturb,
    scale_to_unit_box,
)
from .persistence import compute_persistence
from .scores import EPSILON_CATEGORY, EPSILON_SQUARE, compute_scores
from .serialize import (
    diagram_from_json,
    diagram_to_json,
    f17,
    match_to_json,
    report_to_csv,
    report_to_json,
)
from .svgplot import render_diagram_svg

_COMMANDS = ("gen", "persist", "score", "extract", "match", "pipeline")
_IMAGE_EXTENSIONS = (".pgm", ".png")


def _write_text(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read_text(path) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_image(path) -> GrayImage:
    lower = str(path).lower()
    if lower.endswith(".pgm"):
        return GrayImage(read_pgm(path))
    if lower.endswith(".png"):
        arr = read_png(path)
        if arr.ndim == 2:
            return GrayImage(arr)
        return to_grayscale(arr)
    raise FileFormatError(f"unsupported image format: {path} (expected .pgm or .png)")


def _load_points(path, unit: str) -> PointCloud:
    """Cloud loader that also accepts the extract stage's x,y,region_px CSV."""
    text = _read_text(path)
    if str(path).lower().endswith(".json"):
        return cloud_from_json(text)
    lines = text.splitlines()
    if lines and lines[0].strip().lower() == "x,y,region_px":
        pts = []
        for no, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise FileFormatError(f"line {no}: expected x,y,region_px")
            try:
                pts.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise FileFormatError(f"line {no}: could not parse {line!r}") from None
        if not pts:
            raise FileFormatError("no centers in CSV")
        return PointCloud(np.asarray(pts, dtype=np.float64), unit)
    return cloud_from_csv(text, unit)


def _load_seeds(path) -> list[Point2]:
    return _load_points(path, UNIT_PIXELS).points


def _centers_csv(center_set) -> str:
    lines = ["x,y,region_px"]
    for (x, y), size in zip(center_set.centers.xy, center_set.region_sizes):
        lines.append(f"{f17(x)},{f17(y)},{size}")
    return "\n".join(lines) + "\n"


def _format_from(args, default="csv"):
    if args.format:
        return args.format
    if args.output:
        ext = os.path.splitext(args.output)[1].lower().lstrip(".")
        if ext in ("csv", "json"):
            return ext
    return default


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args) -> int:
    if args.kind == "nominal":
        spec = NominalGridSpec(
            rows=args.rows,
            cols=args.cols,
            pitch_x=args.pitch_x,
            pitch_y=args.pitch_y if args.pitch_y is not None else args.pitch_x,
            datum=Point2(args.datum_x, args.datum_y),
            unit=args.unit,
        )
        cloud = gen_nominal_grid(spec)
    else:
        kind = "hexagonal" if args.kind == "hex" else args.kind
        cloud = gen_lattice(LatticeSpec(kind, args.n))
        if args.perturb:
            cloud = perturb(cloud, PerturbationSpec(args.perturb, args.seed))
    text = cloud_to_json(cloud) if _format_from(args) == "json" else cloud_to_csv(cloud)
    _write_text(args.output, text)
    return 0


def cmd_persist(args) -> int:
    cloud = _load_points(args.cloud, UNIT_NORMALIZED)
    if args.scale:
        cloud, _ = scale_to_unit_box(cloud)
    diagram = compute_persistence(cloud, args.threshold)
    if args.svg:
        _write_text(args.svg, render_diagram_svg(diagram))
    _write_text(args.output, diagram_to_json(diagram))
    return 0


def cmd_score(args) -> int:
    diagram = diagram_from_json(_read_text(args.diagram))
    scores = compute_scores(
        diagram, n=args.n, eps_square=args.eps_square, eps_category=args.eps_category
    )
    text = report_to_csv(scores) if _format_from(args, default="json") == "csv" else report_to_json(scores)
    _write_text(args.output, text)
    stream = sys.stdout if args.output else sys.stderr
    print(scores.summary, file=stream)
    return 0


def _extract_centers(args):
    img = _load_image(args.image)
    if args.seeds:
        seeds = _load_seeds(args.seeds)
    else:
        seeds = _load_seeds(args.auto_seeds)
    max_region = args.max_region
    if max_region is None and None not in (args.pitch_um, args.v_s, args.f):
        max_region = default_max_region_px(img, args.pitch_um, args.v_s, args.f)
    params = RegionGrowParams(
        seeds=seeds,
        tolerance=args.tolerance,
        connectivity=args.connectivity,
        max_region_px=max_region,
    )
    center_set = region_grow(img, params)
    for failure in center_set.failures:
        print(f"warning: seed #{failure.seed_index} failed: {failure.reason}", file=sys.stderr)
    return center_set


def cmd_extract(args) -> int:
    center_set = _extract_centers(args)
    _write_text(args.output, _centers_csv(center_set))
    return 0


def cmd_match(args) -> int:
    nominal = _load_points(args.nominal, UNIT_PIXELS)
    detected = _load_points(args.true, UNIT_PIXELS)
    result = match_grids(nominal, detected, args.max_dist)
    _write_text(args.output, match_to_json(result))
    return 0


def _pipeline_single(args, input_path, out_dir) -> None:
    os.makedirs(out_dir, exist_ok=True)
    is_image = str(input_path).lower().endswith(_IMAGE_EXTENSIONS)
    if is_image:
        if not (args.seeds or args.auto_seeds):
            raise FileFormatError("image input needs --seeds or --auto-seeds")
        image_args = argparse.Namespace(
            image=input_path,
            seeds=args.seeds,
            auto_seeds=args.auto_seeds,
            tolerance=args.tolerance,
            connectivity=args.connectivity,
            max_region=args.max_region,
            pitch_um=args.pitch_um,
            v_s=args.v_s,
            f=args.f,
        )
        center_set = _extract_centers(image_args)
        _write_text(os.path.join(out_dir, "centers.csv"), _centers_csv(center_set))
        cloud = center_set.centers
    else:
        cloud = _load_points(input_path, UNIT_PIXELS)

    if args.nominal:
        nominal = _load_points(args.nominal, cloud.unit)
        result = match_grids(nominal, cloud, args.max_dist)
        _write_text(os.path.join(out_dir, "match.json"), match_to_json(result))

    scaled, _ = scale_to_unit_box(cloud)
    _write_text(os.path.join(out_dir, "cloud_normalized.csv"), cloud_to_csv(scaled))
    diagram = compute_persistence(scaled, args.threshold)
    _write_text(os.path.join(out_dir, "diagram.json"), diagram_to_json(diagram))
    _write_text(os.path.join(out_dir, "diagram.svg"), render_diagram_svg(diagram))
    scores = compute_scores(
        diagram, n=args.n, eps_square=args.eps_square, eps_category=args.eps_category
    )
    _write_text(os.path.join(out_dir, "report.json"), report_to_json(scores))
    print(scores.summary)


def cmd_pipeline(args) -> int:
    if args.batch:
        names = sorted(
            f for f in os.listdir(args.batch) if f.lower().endswith((".csv", ".json"))
        )
        if not names:
            raise FileFormatError(f"no cloud files in batch directory {args.batch}")
        rows = []
        from .serialize import REPORT_COLUMNS

        for name in names:
            stem = os.path.splitext(name)[0]
            _pipeline_single(args, os.path.join(args.batch, name), os.path.join(args.out, stem))
            with open(os.path.join(args.out, stem, "report.json"), encoding="utf-8") as fh:
                obj = json.load(fh)
            rows.append((name, obj))
        lines = ["file," + ",".join(REPORT_COLUMNS)]
        for name, obj in rows:
            vals = [
                str(obj["n"]),
                f17(obj["h0_var"]),
                f17(obj["h0_bar"]),
                f17(obj["h1_sum"]),
                f17(obj["h1_bar"]),
                "" if obj["percent_square"] is None else f17(obj["percent_square"]),
                "" if obj["percent_hexagonal"] is None else f17(obj["percent_hexagonal"]),
                obj["category"],
            ]
            lines.append(name + "," + ",".join(vals))
        _write_text(os.path.join(args.out, "report.csv"), "\n".join(lines) + "\n")
        return 0
    if not args.input:
        raise FileFormatError("pipeline needs an input file or --batch directory")
    _pipeline_single(args, args.input, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticeorder",
        description="Quantify how square or hexagonal a 2D point lattice is "
        "using 0D/1D Rips persistence.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON file of flag defaults; explicit flags win")

    p = sub.add_parser("gen", help="generate a lattice point cloud")
    add_common(p)
    p.add_argument("--kind", choices=["square", "hex", "hexagonal", "nominal"], required=True)
    p.add_argument("--n", type=int, default=5, help="points per side / rows")
    p.add_argument("--perturb", type=float, default=0.0, metavar="SIGMA")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", type=int, default=5, help="nominal grid rows")
    p.add_argument("--cols", type=int, default=5, help="nominal grid cols")
    p.add_argument("--pitch-x", type=float, default=1.0)
    p.add_argument("--pitch-y", type=float, default=None)
    p.add_argument("--datum-x", type=float, default=0.0)
    p.add_argument("--datum-y", type=float, default=0.0)
    p.add_argument("--unit", default="pixels", choices=["pixels", "micrometers"])
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("persist", help="compute the persistence diagram of a cloud")
    add_common(p)
    p.add_argument("cloud", help="point cloud CSV/JSON")
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--scale", action="store_true", help="normalize to [-1,1]^2 first")
    p.add_argument("--svg", help="also render the diagram + histogram SVG here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_persist)

    p = sub.add_parser("score", help="order scores from a diagram JSON")
    add_common(p)
    p.add_argument("diagram")
    p.add_argument("--n", type=int, default=None, help="grid side for normalization")
    p.add_argument("--eps-square", type=float, default=EPSILON_SQUARE)
    p.add_argument("--eps-category", type=float, default=EPSILON_CATEGORY)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("extract", help="region-grow indentation centers from an image")
    add_common(p)
    p.add_argument("image", help="PGM (P5) or 8-bit PNG")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--seeds", help="seed CSV with header x,y (pixels)")
    group.add_argument("--auto-seeds", help="nominal grid CSV; seeds placed at its centers")
    p.add_argument("--tolerance", type=int, default=25)
    p.add_argument("--connectivity", type=int, choices=[4, 8], default=4)
    p.add_argument("--max-region", type=int, default=None,
                   help="region cap in px; defaults from process parameters or image/4")
    p.add_argument("--pitch-um", type=float, default=None, help="image calibration, um/px")
    p.add_argument("--v-s", type=float, default=None, help="scan speed, um/s")
    p.add_argument("--f", type=float, default=None, help="strike frequency, Hz")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("match", help="mutual-NN matching of nominal vs detected centers")
    add_common(p)
    p.add_argument("--nominal", required=True)
    p.add_argument("--true", required=True)
    p.add_argument("--max-dist", type=float, default=float("inf"))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("pipeline", help="image/cloud -> centers -> diagram -> scores bundle")
    add_common(p)
    p.add_argument("input", nargs="?", help="image (.pgm/.png) or cloud (.csv/.json)")
    p.add_argument("--batch", help="process every cloud file in this directory")
    p.add_argument("--out", required=True, help="bundle output directory")
    p.add_argument("--seeds")
    p.add_argument("--auto-seeds")
    p.add_argument("--tolerance", type=int, default=25)
    p.add_argument("--connectivity", type=int, choices=[4, 8], default=4)
    p.add_argument("--max-region", type=int, default=None)
    p.add_argument("--pitch-um", type=float, default=None)
    p.add_argument("--v-s", type=float, default=None)
    p.add_argument("--f", type=float, default=None)
    p.add_argument("--nominal", help="nominal grid CSV; adds match.json to the bundle")
    p.add_argument("--max-dist", type=float, default=float("inf"))
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--eps-square", type=float, default=EPSILON_SQUARE)
    p.add_argument("--eps-category", type=float, default=EPSILON_CATEGORY)
    p.set_defaults(func=cmd_pipeline)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Install config-file values as subcommand defaults so explicit flags win."""
    if "--config" not in argv:
        return
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        return  # argparse will report the usage error
    try:
        with open(argv[idx + 1], encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"config file: {exc}") from None
    if not isinstance(config, dict):
        raise FileFormatError("config file must hold a JSON object of flag values")
    command = next((a for a in argv if a in _COMMANDS), None)
    if command is None:
        return
    # locate the subparser to set defaults on
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            sub = action.choices[command]
            known = {a.dest for a in sub._actions}
            defaults = {}
            for key, value in config.items():
                dest = key.replace("-", "_")
                if dest in known:
                    defaults[dest] = value
            sub.set_defaults(**defaults)
            return


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except LatticeOrderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
