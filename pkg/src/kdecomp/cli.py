"""Command-line interface.

Exit codes: 0 ok, 1 decomposition inequality violated, 2 bad input,
3 unknown backend, 4 empty region.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .codec import DEFAULT_BACKEND, encode, get_backend, read_dataset, write_csv
from .decomposition import DecompositionConfig, verify_decomposition
from .errors import BackendError, EmptyRegionError, KdecompError, ParseError, ScalarRangeError, SpecError
from .estimator import estimate
from .generators import from_spec
from .lightcone import (
    PLANES,
    CausalRegion,
    generate_cloud,
    highpass_filter,
    lowpass_filter,
    region_subset,
    study,
    subset_projection,
)
from .decomposition import project
from .plot import write_scatter

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BACKEND, EXIT_EMPTY = 0, 1, 2, 3, 4


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _slack(text: str) -> tuple[float, float]:
    values = _floats(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError("--slack takes two values: c1,c2")
    return values[0], values[1]


def _regions(text: str) -> list[str]:
    return [r.strip() for r in text.split(",") if r.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kdecomp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"kdecomp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    backend = argparse.ArgumentParser(add_help=False)
    backend.add_argument("--backend", default=os.environ.get("KDECOMP_BACKEND", DEFAULT_BACKEND))
    backend.add_argument("--level", type=int, default=None)

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("input", nargs="?", help="CSV or JSON dataset")
    source.add_argument("--generate", metavar="SPEC", help="e.g. random:2^20, hypercube:n=100,m=3000, curve:n=100")
    source.add_argument("--seed", type=int, default=0)
    source.add_argument("--header", action="store_true", help="skip the first CSV line")

    cloud = argparse.ArgumentParser(add_help=False)
    cloud.add_argument("--m", type=int, default=40000)
    cloud.add_argument("--seed", type=int, default=0)
    cloud.add_argument("--epsilon", type=str, default="0")
    cloud.add_argument("--regions", type=_regions, default=["full", "inside", "outside"])
    cloud.add_argument("--plot", metavar="DIR", help="write one SVG and one CSV per region and coordinate plane")

    sub.add_parser("estimate", parents=[source, backend], help="estimate complexity of a dataset")

    p = sub.add_parser("decompose", parents=[source, backend], help="check the projection decomposition inequalities")
    p.add_argument("--coeffs", type=_floats, default=None)
    p.add_argument("--slack", type=_slack, default=None, metavar="C1,C2")
    p.add_argument("--program-bound", type=float, default=None, metavar="M")
    p.add_argument("--csv", metavar="PATH", help="also write per-projection rows as CSV")

    sub.add_parser("lightcone", parents=[cloud, backend], help="light-cone region complexity study")

    p = sub.add_parser("filter", parents=[cloud, backend], help="low/high-pass complexity filter")
    p.add_argument("--mode", choices=["low", "high"], required=True)
    p.add_argument("--threshold", type=int, required=True, help="bytes")
    return parser


def _load(args):
    if args.generate and args.input:
        raise SpecError("give either an input file or --generate, not both")
    if args.generate:
        return from_spec(args.generate, args.seed)
    if not args.input:
        raise SpecError("an input file or --generate is required")
    path = Path(args.input)
    if not path.is_file():
        raise ParseError(f"no such file: {path}")
    return read_dataset(path, header=args.header)


def _manifest(args, data_hash: str) -> dict:
    params = {k: v for k, v in vars(args).items() if k not in ("command", "plot", "csv")}
    return {
        "command": args.command,
        "params": params,
        "tool_version": __version__,
        "input_sha256": data_hash,
    }


def _emit(manifest: dict, result) -> None:
    sys.stdout.write(json.dumps({"manifest": manifest, "result": result}, indent=2) + "\n")


def cmd_estimate(args) -> int:
    backend = get_backend(args.backend, args.level)
    d = _load(args)
    blob = encode(d)
    args.level = backend.level
    _emit(_manifest(args, hashlib.sha256(blob.payload).hexdigest()), estimate(d, backend).to_dict())
    return EXIT_OK


def cmd_decompose(args) -> int:
    backend = get_backend(args.backend, args.level)
    cfg_kwargs = {"coefficients": args.coeffs, "program_bound": args.program_bound}
    if args.slack is not None:
        cfg_kwargs["slack"] = args.slack
    cfg = DecompositionConfig(**cfg_kwargs)
    d = _load(args)
    report = verify_decomposition(d, cfg, backend)
    args.level = backend.level
    args.slack = list(cfg.slack)
    manifest = _manifest(args, hashlib.sha256(encode(d).payload).hexdigest())
    _emit(manifest, report.to_dict())
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    return EXIT_OK if report.lower_ok else EXIT_VIOLATION


def _cloud(args):
    backend = get_backend(args.backend, args.level)
    args.level = backend.level
    cloud = generate_cloud(args.m, args.seed)
    regions = [CausalRegion(tag, args.epsilon) for tag in args.regions]
    return backend, cloud, regions


def _plot(args, cloud, reports) -> None:
    out = Path(args.plot)
    out.mkdir(parents=True, exist_ok=True)
    for report in reports:
        data = region_subset(cloud, report.region)
        for plane in PLANES:
            points = project(data, subset_projection(plane))
            stem = f"{report.region.tag}_{plane}"
            title = f"{report.region.tag} ({plane[0]}, {plane[1]}), seed {cloud.seed}"
            write_scatter(points, out / f"{stem}.svg", plane[0], plane[1], title)
            with open(out / f"{stem}.csv", "w", encoding="ascii", newline="") as fp:
                fp.write(f"{plane[0]},{plane[1]}\n")
                write_csv(points, fp)


def cmd_lightcone(args) -> int:
    backend, cloud, regions = _cloud(args)
    reports = [study(cloud, r, backend) for r in regions]
    if args.plot:
        _plot(args, cloud, reports)
    manifest = _manifest(args, hashlib.sha256(encode(cloud.points).payload).hexdigest())
    _emit(manifest, {"reports": [r.to_dict() for r in reports]})
    return EXIT_OK


def cmd_filter(args) -> int:
    if args.threshold <= 0:
        raise SpecError("--threshold must be positive")
    backend, cloud, regions = _cloud(args)
    run = lowpass_filter if args.mode == "low" else highpass_filter
    result = run(cloud, args.epsilon, args.threshold, backend, regions=[r.tag for r in regions])
    if args.plot:
        _plot(args, cloud, list(result.reports.values()))
    manifest = _manifest(args, hashlib.sha256(encode(cloud.points).payload).hexdigest())
    _emit(manifest, result.to_dict())
    return EXIT_OK


COMMANDS = {
    "estimate": cmd_estimate,
    "decompose": cmd_decompose,
    "lightcone": cmd_lightcone,
    "filter": cmd_filter,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except EmptyRegionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except (ParseError, SpecError, ScalarRangeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KdecompError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
