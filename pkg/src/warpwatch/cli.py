"""Command-line surface: preprocess, metrics, cases, dtw, sweep, synth.

Every subcommand is deterministic: identical inputs and flags produce
byte-identical outputs. Each emitted file carries a provenance manifest
(command, parameters, input content hashes, artifact version) as a
``#`` comment line in CSVs or a top-level key in JSON. Exit codes:
0 success, 2 input or usage error, 3 infeasible computation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from dataclasses import dataclass
from datetime import timedelta
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .cases import CaseKind, active_cases, daily_confirmed, daily_removed, load_linelist
from .dtw import BandSpec, dtw
from .errors import BandInfeasibleError, CoverageError, ParseError, WarpwatchError
from .network import KeywordPanel, MetricKind, metric_series
from .sweep import (
    CASE_TYPES,
    METRICS,
    PREPROCESSES,
    RADII,
    THRESHOLDS,
    WINDOWS,
    Preprocess,
    SweepResult,
    enumerate_configs,
    optimal_configs,
    parameter_reports,
    run_sweep,
)
from .testkit import SyntheticScenario, synth_pair
from .timeseries import (
    DateIndexedSeries,
    align_ranges,
    format_value,
    minmax_normalize,
    parse_iso_date,
    read_series_csv,
    write_series_csv,
)
from .trends import load_segments, load_weekly, msv_merge, rescale_daily

THREADS_ENV = "WARPWATCH_THREADS"

SWEEP_DOMAIN_KEYS = ("metric", "preprocess", "threshold", "window", "case_type", "radius")


@dataclass(frozen=True)
class RunManifest:
    """Provenance embedded in every output: what ran, on which bytes."""

    command: str
    parameters: dict
    inputs: dict
    artifact_version: str

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "version": self.artifact_version,
            "parameters": self.parameters,
            "inputs": self.inputs,
        }

    def compact_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))

    def preamble(self) -> str:
        return f"manifest: {self.compact_json()}"


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _manifest(command: str, parameters: dict, input_paths: Sequence[str]) -> RunManifest:
    inputs = {p: _sha256(p) for p in sorted(input_paths)}
    return RunManifest(command, parameters, inputs, __version__)


def _round_floats(obj):
    """Re-round every float to 9 significant digits for stable serialization."""
    if isinstance(obj, float):
        return float(format_value(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(_round_floats(payload), fh, indent=2)
        fh.write("\n")


def _slug(keyword: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]+", "_", keyword).strip("_") or "keyword"


def _load_panel(panel_dir: str) -> KeywordPanel:
    paths = sorted(Path(panel_dir).glob("*.csv"))
    if not paths:
        raise ParseError(f"no CSV series found in {panel_dir}")
    return KeywordPanel.from_mapping({p.stem: read_series_csv(str(p)) for p in paths})


def _max_workers() -> int | None:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ParseError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def _outdir(args) -> Path:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands


def _cmd_preprocess(args) -> int:
    if args.method == "rescale" and not args.weekly:
        print("error: --weekly is required with --method rescale", file=sys.stderr)
        return 2
    segments = load_segments(args.segments)
    by_keyword: dict[str, list] = {}
    for seg in segments:
        by_keyword.setdefault(seg.keyword, []).append(seg)

    weekly = load_weekly(args.weekly) if args.method == "rescale" else None
    input_paths = [args.segments] + ([args.weekly] if weekly is not None else [])
    manifest = _manifest(
        "preprocess",
        {"method": args.method, "segments": args.segments, "weekly": args.weekly},
        input_paths,
    )

    out = _outdir(args)
    used_slugs: dict[str, str] = {}
    for keyword in sorted(by_keyword):
        slug = _slug(keyword)
        if slug in used_slugs:
            raise ParseError(
                f"keywords {used_slugs[slug]!r} and {keyword!r} map to the same file name {slug}.csv"
            )
        used_slugs[slug] = keyword
        if args.method == "rescale":
            if keyword not in weekly:
                raise CoverageError(f"keyword {keyword!r} missing from the weekly reference")
            series = rescale_daily(by_keyword[keyword], weekly[keyword])
        else:
            series = msv_merge(by_keyword[keyword])
        write_series_csv(series, str(out / f"{slug}.csv"), manifest.preamble())
    print(f"wrote {len(by_keyword)} keyword series to {out}")
    return 0


def _cmd_metrics(args) -> int:
    if not 0.0 < args.threshold <= 1.0:
        print(f"error: --threshold must lie in (0, 1], got {args.threshold}", file=sys.stderr)
        return 2
    panel = _load_panel(args.panel_dir)
    manifest = _manifest(
        "metrics",
        {
            "panel_dir": args.panel_dir,
            "metric": args.metric,
            "threshold": args.threshold,
            "window": args.window,
        },
        [str(p) for p in sorted(Path(args.panel_dir).glob("*.csv"))],
    )
    result = metric_series(panel, MetricKind(args.metric), args.threshold, args.window)
    out = _outdir(args)
    write_series_csv(result.series, str(out / "metric.csv"), manifest.preamble())
    print(f"wrote {len(result.series)} {args.metric} values to {out / 'metric.csv'}")
    return 0


def _cmd_cases(args) -> int:
    start = parse_iso_date(args.start)
    end = parse_iso_date(args.end)
    if end < start:
        print(f"error: --end {args.end} precedes --start {args.start}", file=sys.stderr)
        return 2
    records = load_linelist(args.linelist, args.region, args.province)
    confirmed = daily_confirmed(records, start, end)
    removed = daily_removed(records, start, end)
    active = active_cases(confirmed, removed)
    manifest = _manifest(
        "cases",
        {
            "linelist": args.linelist,
            "region": args.region,
            "province": args.province,
            "start": args.start,
            "end": args.end,
        },
        [args.linelist],
    )
    out = _outdir(args)
    write_series_csv(confirmed.series, str(out / "confirmed.csv"), manifest.preamble())
    write_series_csv(active.series, str(out / "active.csv"), manifest.preamble())
    print(f"kept {len(records)} records; wrote confirmed.csv and active.csv to {out}")
    return 0


def _cmd_dtw(args) -> int:
    case = read_series_csv(args.case)
    metric = read_series_csv(args.metric)
    # sanity: the two series must refer to a common period, but DTW runs on
    # the full series, so a length gap beyond the radius is still infeasible
    align_ranges(case, metric)
    band = BandSpec.sakoe_chiba(args.radius) if args.radius is not None else BandSpec.unconstrained()
    result = dtw(case.values, metric.values, band, normalize_x=args.normalize)

    manifest = _manifest(
        "dtw",
        {
            "case": args.case,
            "metric": args.metric,
            "radius": args.radius,
            "normalize": bool(args.normalize),
        },
        [args.case, args.metric],
    )
    out = _outdir(args)
    _write_json(
        out / "dtw.json",
        {
            "manifest": manifest.as_dict(),
            "distance": result.distance,
            "radius": args.radius,
            "path_length": len(result.path),
            "case_range": [case.start_date.isoformat(), case.end_date.isoformat()],
            "metric_range": [metric.start_date.isoformat(), metric.end_date.isoformat()],
        },
    )

    x_values = minmax_normalize(case).values if args.normalize else case.values
    with open(out / "alignment.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {manifest.preamble()}\n")
        fh.write("case_index,metric_index,case_date,metric_date,normalized_case,metric_value\n")
        for i, j in result.path:
            case_day = case.start_date + timedelta(days=i - 1)
            metric_day = metric.start_date + timedelta(days=j - 1)
            fh.write(
                f"{i},{j},{case_day.isoformat()},{metric_day.isoformat()},"
                f"{format_value(x_values[i - 1])},{format_value(metric.values[j - 1])}\n"
            )
    print(f"distance {format_value(result.distance)} over {len(result.path)} path steps")
    return 0


def _load_sweep_domains(path: str | None) -> dict:
    domains = {
        "metric": list(METRICS),
        "preprocess": list(PREPROCESSES),
        "threshold": list(THRESHOLDS),
        "window": list(WINDOWS),
        "case_type": list(CASE_TYPES),
        "radius": list(RADII),
    }
    if path is None:
        return domains
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad sweep config: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("sweep config must be a JSON object of parameter arrays")
    for key, values in raw.items():
        if key not in SWEEP_DOMAIN_KEYS:
            raise ParseError(f"unknown sweep parameter {key!r}")
        if not isinstance(values, list) or not values:
            raise ParseError(f"sweep parameter {key!r} must be a non-empty array")
        canon = {
            "metric": {m.value: m for m in METRICS},
            "preprocess": {p.value: p for p in PREPROCESSES},
            "threshold": {t: t for t in THRESHOLDS},
            "window": {w: w for w in WINDOWS},
            "case_type": {c.value: c for c in CASE_TYPES},
            "radius": {r: r for r in RADII},
        }[key]
        picked = []
        for v in values:
            if v not in canon:
                raise ParseError(f"sweep parameter {key!r} does not admit {v!r}")
            picked.append(canon[v])
        domains[key] = picked
    return domains


def _sweep_rows_csv(path: Path, results: Sequence[SweepResult], preamble: str) -> None:
    import csv as _csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {preamble}\n")
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["metric", "preprocess", "threshold", "window", "case_type", "radius", "dtw_score", "status"]
        )
        for r in results:
            c = r.config
            writer.writerow(
                [
                    c.metric.value,
                    c.preprocess.value,
                    format_value(c.threshold),
                    c.window,
                    c.case_type.value,
                    c.radius,
                    "" if r.dtw_score is None else format_value(r.dtw_score),
                    r.status,
                ]
            )


def _optimal_csv(path: Path, rows: Sequence[SweepResult], preamble: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {preamble}\n")
        fh.write("metric,case_type,preprocess,threshold,window,radius,dtw_score\n")
        for r in rows:
            c = r.config
            fh.write(
                f"{c.metric.value},{c.case_type.value},{c.preprocess.value},"
                f"{format_value(c.threshold)},{c.window},{c.radius},{format_value(r.dtw_score)}\n"
            )


def _cmd_sweep(args) -> int:
    domains = _load_sweep_domains(args.config)
    if Preprocess.RESCALE in domains["preprocess"] and not args.weekly:
        print("error: --weekly is required when the sweep includes the rescale method", file=sys.stderr)
        return 2

    segments = load_segments(args.segments)
    by_keyword: dict[str, list] = {}
    for seg in segments:
        by_keyword.setdefault(seg.keyword, []).append(seg)
    weekly = load_weekly(args.weekly) if Preprocess.RESCALE in domains["preprocess"] else {}

    panels: dict[Preprocess, KeywordPanel] = {}
    for preprocess in domains["preprocess"]:
        series_by_keyword: dict[str, DateIndexedSeries] = {}
        for keyword in sorted(by_keyword):
            if preprocess is Preprocess.RESCALE:
                if keyword not in weekly:
                    raise CoverageError(f"keyword {keyword!r} missing from the weekly reference")
                series_by_keyword[keyword] = rescale_daily(by_keyword[keyword], weekly[keyword])
            else:
                series_by_keyword[keyword] = msv_merge(by_keyword[keyword])
        panels[preprocess] = KeywordPanel.from_mapping(series_by_keyword)

    any_panel = next(iter(panels.values()))
    start = parse_iso_date(args.start) if args.start else any_panel.start_date
    end = parse_iso_date(args.end) if args.end else any_panel.series[0].end_date
    if end < start:
        print(f"error: --end {end} precedes --start {start}", file=sys.stderr)
        return 2

    records = load_linelist(args.linelist, args.region, args.province)
    confirmed = daily_confirmed(records, start, end)
    removed = daily_removed(records, start, end)
    active = active_cases(confirmed, removed)
    case_series: Mapping[CaseKind, DateIndexedSeries] = {
        CaseKind.CONFIRMED: confirmed.series,
        CaseKind.ACTIVE: active.series,
    }

    configs = enumerate_configs(
        domains["metric"],
        domains["preprocess"],
        domains["threshold"],
        domains["window"],
        domains["case_type"],
        domains["radius"],
    )
    results = run_sweep(panels, case_series, configs, max_workers=_max_workers())

    input_paths = [args.segments, args.linelist] + ([args.weekly] if args.weekly else [])
    manifest = _manifest(
        "sweep",
        {
            "segments": args.segments,
            "weekly": args.weekly,
            "linelist": args.linelist,
            "region": args.region,
            "province": args.province,
            "start": start.isoformat(),
            "end": end.isoformat(),
            "config": args.config,
            "domains": {
                k: [v.value if hasattr(v, "value") else v for v in domains[k]]
                for k in SWEEP_DOMAIN_KEYS
            },
        },
        input_paths,
    )

    out = _outdir(args)
    _sweep_rows_csv(out / "sweep.csv", results, manifest.preamble())

    succeeded = [r for r in results if r.ok]
    if not succeeded:
        print("error: every configuration failed; see the status column", file=sys.stderr)
        return 2

    reports = parameter_reports(results)
    _write_json(
        out / "parameter_report.json",
        {
            "manifest": manifest.as_dict(),
            "parameters": {
                rep.parameter: {
                    "level_means": rep.level_means,
                    "h_statistic": rep.h_statistic,
                    "p_value": rep.p_value,
                    "significant": rep.significant,
                }
                for rep in reports
            },
        },
    )
    _optimal_csv(out / "optimal_configs.csv", optimal_configs(results), manifest.preamble())
    print(
        f"swept {len(results)} configurations ({len(succeeded)} scored); artifacts in {out}"
    )
    return 0


def _cmd_synth(args) -> int:
    if not 0 <= args.lag < args.length:
        print(f"error: --lag must satisfy 0 <= lag < length, got {args.lag}", file=sys.stderr)
        return 2
    if args.noise < 0:
        print(f"error: --noise must be nonnegative, got {args.noise}", file=sys.stderr)
        return 2
    scenario = SyntheticScenario(
        length=args.length,
        lag=args.lag,
        noise_amplitude=args.noise,
        seed=args.seed,
        start_date=parse_iso_date(args.start),
    )
    case, metric = synth_pair(scenario)
    manifest = _manifest(
        "synth",
        {
            "length": args.length,
            "lag": args.lag,
            "noise": args.noise,
            "seed": args.seed,
            "start": args.start,
        },
        [],
    )
    out = _outdir(args)
    write_series_csv(case, str(out / "case.csv"), manifest.preamble())
    write_series_csv(metric, str(out / "metric.csv"), manifest.preamble())
    print(f"wrote synthetic pair (length {args.length}, lag {args.lag}) to {out}")
    return 0


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warpwatch",
        description="Search-interest network metrics aligned to epidemic case curves",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("preprocess", help="rebuild daily series from 30-day segments")
    p.add_argument("--segments", required=True, help="segment CSV (keyword,segment_start,date,value)")
    p.add_argument("--weekly", help="weekly CSV (keyword,week_start,value); required for rescale")
    p.add_argument("--method", required=True, choices=["rescale", "msv"])
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("metrics", help="network metric series from a panel directory")
    p.add_argument("--panel-dir", required=True, help="directory of per-keyword date,value CSVs")
    p.add_argument("--metric", required=True, choices=[m.value for m in METRICS])
    p.add_argument("--threshold", required=True, type=float)
    p.add_argument("--window", required=True, type=int, choices=list(WINDOWS))
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("cases", help="daily confirmed and active cases from a line list")
    p.add_argument("--linelist", required=True)
    p.add_argument("--region", required=True)
    p.add_argument("--province", required=True)
    p.add_argument("--start", required=True, help="YYYY-MM-DD")
    p.add_argument("--end", required=True, help="YYYY-MM-DD")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=_cmd_cases)

    p = sub.add_parser("dtw", help="banded DTW between a case CSV and a metric CSV")
    p.add_argument("--case", required=True)
    p.add_argument("--metric", required=True)
    p.add_argument("--radius", type=int, default=None, help="Sakoe-Chiba radius; omit for unconstrained")
    p.add_argument("--normalize", action="store_true", help="min-max normalize the case series first")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=_cmd_dtw)

    p = sub.add_parser("sweep", help="score the full parameter lattice end to end")
    p.add_argument("--segments", required=True)
    p.add_argument("--weekly")
    p.add_argument("--linelist", required=True)
    p.add_argument("--region", required=True)
    p.add_argument("--province", required=True)
    p.add_argument("--start", help="case range start (default: panel start)")
    p.add_argument("--end", help="case range end (default: panel end)")
    p.add_argument("--config", help="JSON object overriding parameter domains")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("synth", help="deterministic synthetic case/metric pair")
    p.add_argument("--length", type=int, default=120)
    p.add_argument("--lag", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start", default="2020-01-01")
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except BandInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (WarpwatchError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
