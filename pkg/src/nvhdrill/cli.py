"""Command line front end.

Subcommands cover the offline workflow: generate a synthetic dataset,
validate one on disk, print or export reports, stack datasets into a
speed-over-frequency table, and serve the HTTP API.

Exit codes: 0 success, 1 validation or domain failure, 2 bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import ingest, views
from .acoustics import Category, campbell, classify
from .errors import NvhError
from .model import TOTAL, Dataset, validate
from .util import fmt9


def _load(manifest: str) -> Dataset:
    return ingest.load(manifest)


def cmd_validate(args: argparse.Namespace) -> int:
    problems = validate(_load(args.manifest))
    for p in problems:
        print(p)
    if problems:
        print(f"{len(problems)} problem(s) found")
        return 1
    print("OK")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    if args.spec == "demo":
        spec = ingest.demo_spec()
    else:
        with open(args.spec, encoding="utf-8") as fh:
            spec = ingest.spec_from_json(fh.read())
    dataset = ingest.generate_synthetic(spec)
    manifest = ingest.save(dataset, args.out_dir)
    base = manifest.parent
    for path in sorted(base.iterdir()):
        print(f"{path.name}\t{path.stat().st_size}")
    print(f"manifest: {manifest}")
    return 0


def _report_rows(dataset: Dataset) -> list[tuple[str, "object", Category, float]]:
    """(region, band, category, excess) for every region x third cell."""
    rows = []
    width = dataset.limits.borderline_width_db
    table = dataset.integral_levels("third")
    for r, region in enumerate(dataset.row_names):
        for b, band in enumerate(dataset.scheme.thirds):
            level = float(table[r, b])
            limit = dataset.integral_limit_for(b)
            verdict = classify(level, limit, width)
            excess = level - limit
            rows.append((region, band, verdict.category, excess))
    return rows


def cmd_report(args: argparse.Namespace) -> int:
    dataset = _load(args.manifest)
    problems = validate(dataset)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 1
    rows = _report_rows(dataset)
    if args.format == "csv":
        print("region,band_hz,category,excess_db")
        for region, band, category, excess in rows:
            excess_s = "" if category is Category.UNDEFINED else fmt9(excess)
            print(f"{region},{band.nominal},{category.value},{excess_s}")
        return 0
    if args.format == "json":
        payload = [
            {
                "region": region,
                "band_hz": band.nominal,
                "category": category.value,
                "excess_db": None if category is Category.UNDEFINED else float(fmt9(excess)),
            }
            for region, band, category, excess in rows
        ]
        print(json.dumps(payload, indent=2))
        return 0
    # text: offenders first, loudest excess on top
    flagged = [r for r in rows if r[2] in (Category.BORDERLINE, Category.UNACCEPTABLE)]
    flagged.sort(key=lambda r: -r[3])
    if not flagged:
        print("all regions within limits")
        return 0
    print(f"{'region':<12} {'band_hz':>8} {'category':<12} {'excess_db':>9}")
    for region, band, category, excess in flagged:
        print(f"{region:<12} {band.nominal:>8} {category.value:<12} {excess:>9.2f}")
    return 0


def cmd_export_matrix(args: argparse.Namespace) -> int:
    dataset = _load(args.manifest)
    mo = views.matrix_overview(dataset, mode=args.mode, shades=args.shades, n_rows=args.rows)
    header = ["region"] + [b.nominal for b in mo.bands]
    print(",".join(header))
    for row in mo.rows:
        fields = [row.region]
        for cell in row.cells:
            if mo.mode == "limits":
                fields.append(cell.verdict.category.value)
            elif mo.mode == "two-tone":
                fields.append("|".join(f"{t}:{fmt9(f)}" for t, f in cell.stripes.stripes))
            elif mo.mode == "combined":
                two = "|".join(f"{t}:{fmt9(f)}" for t, f in cell.two_tone.stripes.stripes)
                strip = "|".join(
                    f"{t}:{fmt9(v)}" for t, v in zip(cell.strip.tokens, cell.strip.row_values)
                )
                fields.append(two + ";" + strip)
            else:
                fields.append(
                    "|".join(f"{t}:{fmt9(v)}" for t, v in zip(cell.tokens, cell.row_values))
                )
        print(",".join(fields))
    return 0


def cmd_campbell(args: argparse.Namespace) -> int:
    datasets = [_load(m) for m in args.manifests]
    cm = campbell(datasets, args.kind)
    print("speed_rpm," + ",".join(b.nominal for b in cm.bands))
    for speed, row in zip(cm.speeds_rpm, cm.levels_db):
        print(fmt9(speed) + "," + ",".join(fmt9(v) for v in row))
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    palette = views.load_palette(args.palette) if args.palette else None
    app = create_app(_load(args.manifest), palette=palette)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nvhdrill", description="structure-borne noise drill-down analysis"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a dataset for consistency problems")
    p.add_argument("manifest")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("spec", help="spec JSON path, or 'demo' for the built-in scenario")
    p.add_argument("out_dir")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("report", help="per-region limit verdicts")
    p.add_argument("manifest")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("export-matrix", help="dump the overview grid as CSV")
    p.add_argument("manifest")
    p.add_argument(
        "--mode", choices=views.MATRIX_MODES, default="limits", help="cell rendering mode"
    )
    p.add_argument("--shades", type=int, default=views.SHADES_DEFAULT)
    p.add_argument("--rows", type=int, default=views.MATRIX_ROWS_DEFAULT)
    p.set_defaults(func=cmd_export_matrix)

    p = sub.add_parser("campbell", help="stack datasets into a speed/frequency table")
    p.add_argument("manifests", nargs="+")
    p.add_argument("--kind", choices=("third", "octave"), default="third")
    p.set_defaults(func=cmd_campbell)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("manifest")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8700)
    p.add_argument("--palette", default=None, help="palette JSON overriding the built-in one")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except NvhError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
