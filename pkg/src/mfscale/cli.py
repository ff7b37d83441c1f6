"""Batch command-line front end.

Subcommands: analyze, generate, shuffle, surgery, calibrate,
suggest-ranges, plot-data. All logic lives in the library modules; the
CLI parses arguments, wires files, and records a run manifest next to
every output so results are reproducible from the manifest plus the
input file.

Exit codes: 0 success, 1 usage errors, 2 domain errors (bad data,
degenerate input). Domain errors print a one-line message, never a
stack trace.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import time
from datetime import date, datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .calibrate import run_calibration, write_report_json, read_report_json
from .errors import MfscaleError
from .mfdfa import (
    MfdfaConfig,
    default_q_grid,
    default_window_sizes,
    fluctuation_surface,
    read_surface_csv,
    write_surface_csv,
)
from .pipeline import PIPELINES, prepare_profile
from .rmdgen import RMD_ALGORITHM, RmdParams, generate_rmd
from .scaling import (
    AutoRangePolicy,
    auto_ranges,
    full_range,
    hurst_function,
    read_ranges_json,
    write_ranges_json,
)
from .series import RNG_ALGORITHM, Series, read_csv, shuffle_returns, to_log, write_csv
from .spectrum import legendre_spectrum, spectrum_metrics
from .surgery import ExcisionSpec, excise, spec_from_dates

TOOL = "mfscale"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are 1
        raise UsageError(message)


def _sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _threads_cap() -> int | None:
    raw = os.environ.get("MFSCALE_THREADS")
    if raw is None:
        return None
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"MFSCALE_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise UsageError("MFSCALE_THREADS must be >= 1")
    return cap


def _write_manifest(
    path: Path,
    command: str,
    settings: dict,
    inputs: dict[str, Path],
    outputs: list[Path],
    started: float,
) -> None:
    payload = {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "settings": settings,
        "inputs": {
            name: {"path": str(p), "sha256": _sha256_file(p)}
            for name, p in inputs.items()
        },
        "outputs": {p.name: {"path": str(p), "sha256": _sha256_file(p)} for p in outputs},
        "threads_cap": _threads_cap(),
        "wall_clock_s": round(time.perf_counter() - started, 6),
        "created": datetime.now(timezone.utc).isoformat(),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int, default=2, help="detrending polynomial order")
    p.add_argument("--q-min", type=float, default=-5.0)
    p.add_argument("--q-max", type=float, default=5.0)
    p.add_argument("--q-step", type=float, default=0.25)
    p.add_argument("--s-min", type=int, default=None, help="smallest window size")
    p.add_argument("--s-max", type=int, default=None, help="largest window size (default length/4)")
    p.add_argument("--s-count", type=int, default=None, help="number of log-spaced window sizes")


def _config_from_args(args, length: int) -> MfdfaConfig:
    q_grid = default_q_grid(args.q_min, args.q_max, args.q_step)
    if args.s_min is None and args.s_max is None and args.s_count is None:
        sizes = None
    else:
        sizes = default_window_sizes(
            length,
            order=args.order,
            s_min=args.s_min if args.s_min is not None else 10,
            s_max=args.s_max,
            count=args.s_count if args.s_count is not None else 40,
        )
    return MfdfaConfig(order=args.order, window_sizes=sizes, q_grid=q_grid)


def _require_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {p}")
    return p


def _hurst_payload(h, manifest_name: str) -> dict:
    return {
        "h2": h.hurst,
        "monotone_nonincreasing": h.monotone_nonincreasing,
        "twist_detected": h.twist_detected,
        "series_length": h.series_length,
        "fits": [
            {
                "q": f.q,
                "h": f.h,
                "stderr": f.stderr,
                "r2": f.r2,
                "s_lo": f.range.s_lo,
                "s_hi": f.range.s_hi,
                "mode": f.range.selection_mode,
                "fallback": f.range.fallback,
                "npoints": f.range.npoints,
            }
            for f in h.fits
        ],
        "dropped": [[q, reason] for q, reason in h.dropped],
        "manifest": manifest_name,
    }


def cmd_analyze(args) -> int:
    started = time.perf_counter()
    src = _require_file(args.csv)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    representation = "profile" if args.pipeline == "as-profile" else "price"
    series = read_csv(src, representation=representation)
    profile, chain = prepare_profile(series, args.pipeline)
    config = _config_from_args(args, len(profile))

    if args.ranges is not None and args.full_range:
        raise UsageError("--ranges and --full-range are mutually exclusive")
    surface = fluctuation_surface(profile, config)
    if args.ranges is not None:
        ranges = read_ranges_json(_require_file(args.ranges))
        range_mode = "manual"
    elif args.full_range:
        ranges = {float(q): full_range(surface, float(q)) for q in surface.q_values}
        range_mode = "full"
    else:
        ranges = auto_ranges(surface)
        range_mode = "auto"
    h = hurst_function(surface, ranges)
    spec = legendre_spectrum(h)

    baseline = None
    if args.baseline is not None:
        baseline = read_report_json(_require_file(args.baseline))
    metrics = spectrum_metrics(spec, baseline)

    surface_path = outdir / "surface.csv"
    hurst_path = outdir / "hurst.json"
    spectrum_path = outdir / "spectrum.csv"
    metrics_path = outdir / "metrics.json"
    manifest_path = outdir / "manifest.json"

    write_surface_csv(surface, surface_path)
    with open(hurst_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_hurst_payload(h, manifest_path.name), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(spectrum_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("q,alpha,f\n")
        for q, a, f in zip(spec.q_values, spec.alphas, spec.f_values):
            fh.write(f"{float(q)!r},{float(a)!r},{float(f)!r}\n")
    payload = dataclasses.asdict(metrics)
    payload["manifest"] = manifest_path.name
    with open(metrics_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")

    _write_manifest(
        manifest_path,
        "analyze",
        {
            "pipeline": args.pipeline,
            "representation_chain": chain,
            "config": dataclasses.asdict(surface.config),
            "range_mode": range_mode,
            "ranges_file": args.ranges,
            "baseline_file": args.baseline,
            "input_fingerprint": surface.input_fingerprint,
        },
        {"series": src},
        [surface_path, hurst_path, spectrum_path, metrics_path],
        started,
    )
    print(f"analyze: wrote {outdir}/{{surface.csv,hurst.json,spectrum.csv,metrics.json,manifest.json}}")
    return 0


def cmd_generate(args) -> int:
    started = time.perf_counter()
    out = Path(args.out)
    params = RmdParams(
        hurst=args.H, levels=args.levels, seed=args.seed, initial_sigma=args.sigma
    )
    series = generate_rmd(params, trim=args.trim, emit=args.emit)
    write_csv(series, out)
    meta_path = out.with_suffix(".meta.json")
    manifest_path = out.with_suffix(".manifest.json")
    with open(meta_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(
            {
                "hurst": args.H,
                "levels": args.levels,
                "seed": args.seed,
                "initial_sigma": args.sigma,
                "algorithm": RMD_ALGORITHM,
                "emit": args.emit,
                "trim": args.trim,
                "length": len(series),
                "manifest": manifest_path.name,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    _write_manifest(
        manifest_path,
        "generate",
        {
            "hurst": args.H,
            "levels": args.levels,
            "seed": args.seed,
            "initial_sigma": args.sigma,
            "emit": args.emit,
            "trim": args.trim,
            "algorithm": RMD_ALGORITHM,
        },
        {},
        [out, meta_path],
        started,
    )
    print(f"generate: wrote {out} ({len(series)} samples)")
    return 0


def cmd_shuffle(args) -> int:
    started = time.perf_counter()
    src = _require_file(args.csv)
    out = Path(args.out)
    representation = "profile" if args.pipeline == "as-profile" else "price"
    series = read_csv(src, representation=representation)
    if args.pipeline == "log-returns":
        worked = to_log(series)
        shuffled = shuffle_returns(worked, args.seed)
        result = dataclasses.replace(
            shuffled,
            values=np.exp(shuffled.values),
            representation="price",
        )
    else:
        result = shuffle_returns(series, args.seed)
    write_csv(result, out)
    manifest_path = out.with_suffix(".manifest.json")
    _write_manifest(
        manifest_path,
        "shuffle",
        {
            "seed": args.seed,
            "pipeline": args.pipeline,
            "rng": RNG_ALGORITHM,
            "input_fingerprint": series.fingerprint(),
        },
        {"series": src},
        [out],
        started,
    )
    print(f"shuffle: wrote {out}")
    return 0


def _load_excision_spec(path: Path, series: Series) -> ExcisionSpec:
    with open(path, "r", encoding="utf-8") as fh:
        records = json.load(fh)
    if not isinstance(records, list):
        raise UsageError(f"{path}: expected a JSON list of intervals")
    index_recs = [r for r in records if "start" in r]
    date_recs = [r for r in records if "from_date" in r]
    if index_recs and date_recs:
        raise UsageError(f"{path}: mix of index and date intervals")
    if date_recs:
        ranges = [
            (date.fromisoformat(r["from_date"]), date.fromisoformat(r["to_date"]))
            for r in date_recs
        ]
        return spec_from_dates(series, ranges)
    return ExcisionSpec(tuple((int(r["start"]), int(r["end"])) for r in index_recs))


def cmd_surgery(args) -> int:
    started = time.perf_counter()
    src = _require_file(args.csv)
    spec_path = _require_file(args.spec)
    out = Path(args.out)
    representation = "profile" if args.pipeline == "as-profile" else "price"
    series = read_csv(src, representation=representation)
    worked = to_log(series) if args.pipeline == "log-returns" else series
    spec = _load_excision_spec(spec_path, worked)
    excised = excise(worked, spec)
    if args.pipeline == "log-returns":
        excised = dataclasses.replace(
            excised, values=np.exp(excised.values), representation="price"
        )
    write_csv(excised, out)
    manifest_path = out.with_suffix(".manifest.json")
    provenance_path = out.with_suffix(".provenance.json")
    with open(provenance_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(
            {
                "input_fingerprint": series.fingerprint(),
                "pipeline": args.pipeline,
                "return_intervals": [list(iv) for iv in spec.intervals],
                "removed_returns": spec.total_removed,
                "output_length": len(excised),
                "manifest": manifest_path.name,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
    _write_manifest(
        manifest_path,
        "surgery",
        {
            "pipeline": args.pipeline,
            "spec_file": str(spec_path),
            "return_intervals": [list(iv) for iv in spec.intervals],
        },
        {"series": src, "spec": spec_path},
        [out, provenance_path],
        started,
    )
    print(f"surgery: wrote {out} (removed {spec.total_removed} returns)")
    return 0


def cmd_calibrate(args) -> int:
    started = time.perf_counter()
    out = Path(args.out)
    lengths = [int(x) for x in args.lengths.split(",") if x]
    hursts = [float(x) for x in args.hursts.split(",") if x]
    report = run_calibration(
        lengths,
        hursts,
        ensemble=args.ensemble,
        base_seed=args.base_seed,
    )
    write_report_json(report, out)
    manifest_path = out.with_suffix(".manifest.json")
    _write_manifest(
        manifest_path,
        "calibrate",
        {
            "lengths": lengths,
            "hursts": hursts,
            "ensemble": args.ensemble,
            "base_seed": args.base_seed,
            "config_fingerprint": report.config_fingerprint,
        },
        {},
        [out],
        started,
    )
    print(f"calibrate: wrote {out} ({len(report.entries)} entries)")
    return 0


def cmd_suggest_ranges(args) -> int:
    started = time.perf_counter()
    src = _require_file(args.csv)
    out = Path(args.out)
    representation = "profile" if args.pipeline == "as-profile" else "price"
    series = read_csv(src, representation=representation)
    profile, chain = prepare_profile(series, args.pipeline)
    config = _config_from_args(args, len(profile))
    surface = fluctuation_surface(profile, config)
    policy = AutoRangePolicy(r2_min=args.r2_min, min_points=args.min_points)
    ranges = auto_ranges(surface, policy)
    write_ranges_json(ranges, out)
    manifest_path = out.with_suffix(".manifest.json")
    _write_manifest(
        manifest_path,
        "suggest-ranges",
        {
            "pipeline": args.pipeline,
            "representation_chain": chain,
            "config": dataclasses.asdict(surface.config),
            "policy": {"r2_min": args.r2_min, "min_points": args.min_points},
        },
        {"series": src},
        [out],
        started,
    )
    n_fallback = sum(r.fallback for r in ranges.values())
    print(f"suggest-ranges: wrote {out} ({n_fallback} fallback entries)")
    return 0


def cmd_plot_data(args) -> int:
    outdir = Path(args.from_dir)
    if not outdir.is_dir():
        raise UsageError(f"analysis directory not found: {outdir}")
    out = Path(args.out)
    if args.kind == "spectrum":
        src = outdir / "spectrum.csv"
        if not src.is_file():
            raise UsageError(f"missing {src}")
        rows = []
        with open(src, "r", encoding="utf-8") as fh:
            fh.readline()
            for line in fh:
                q, a, f = line.strip().split(",")
                rows.append((a, f))
        header = "# alpha f_alpha"
        lines = [f"{a} {f}" for a, f in rows]
    elif args.kind == "hurst":
        src = outdir / "hurst.json"
        if not src.is_file():
            raise UsageError(f"missing {src}")
        with open(src, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        header = "# q h_q stderr"
        lines = [f"{f['q']!r} {f['h']!r} {f['stderr']!r}" for f in payload["fits"]]
    else:  # fluctuation
        src = outdir / "surface.csv"
        if not src.is_file():
            raise UsageError(f"missing {src}")
        surface = read_surface_csv(src)
        s, f = surface.column(args.q)
        header = f"# s F(s,q={args.q})"
        lines = [f"{int(sv)} {float(fv)!r}" for sv, fv in zip(s, f)]
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        fh.write("\n".join(lines) + "\n")
    print(f"plot-data: wrote {out}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog=TOOL, description=__doc__)
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline on a CSV series")
    p.add_argument("csv")
    p.add_argument("--outdir", required=True)
    p.add_argument("--pipeline", choices=PIPELINES, default="log-returns")
    p.add_argument("--ranges", default=None, help="manual per-q ranges JSON")
    p.add_argument("--full-range", action="store_true", help="fit every q over the whole window grid")
    p.add_argument("--baseline", default=None, help="calibration report JSON for excess width")
    _add_config_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="seeded midpoint-displacement series")
    p.add_argument("--H", type=float, required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--emit", choices=("trace", "increments"), default="trace")
    p.add_argument("--trim", action="store_true", help="trim to exactly 2^levels samples")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("shuffle", help="permute returns with a seeded generator")
    p.add_argument("csv")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--pipeline", choices=PIPELINES, default="log-returns")
    p.set_defaults(func=cmd_shuffle)

    p = sub.add_parser("surgery", help="excise abrupt events at the return level")
    p.add_argument("csv")
    p.add_argument("--spec", required=True, help="JSON list of intervals or date ranges")
    p.add_argument("--out", required=True)
    p.add_argument("--pipeline", choices=("log-returns", "raw-diff", "as-profile"), default="log-returns")
    p.set_defaults(func=cmd_surgery)

    p = sub.add_parser("calibrate", help="finite-length background Monte Carlo")
    p.add_argument("--lengths", default="256,1024,4096,16384")
    p.add_argument("--hursts", default="0.5")
    p.add_argument("--ensemble", type=int, default=20)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("suggest-ranges", help="emit auto scaling ranges for review")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.add_argument("--pipeline", choices=PIPELINES, default="log-returns")
    p.add_argument("--r2-min", type=float, default=0.98)
    p.add_argument("--min-points", type=int, default=6)
    _add_config_flags(p)
    p.set_defaults(func=cmd_suggest_ranges)

    p = sub.add_parser("plot-data", help="plain two/three-column plot files")
    p.add_argument("--from", dest="from_dir", required=True, help="analyze output directory")
    p.add_argument("--kind", choices=("spectrum", "hurst", "fluctuation"), required=True)
    p.add_argument("--q", type=float, default=2.0, help="moment order for --kind fluctuation")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot_data)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        _threads_cap()  # validate early so a bad value is a usage error
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        print(f"run '{TOOL} --help' for usage", file=sys.stderr)
        return 1
    except MfscaleError as exc:
        print(f"{TOOL}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
