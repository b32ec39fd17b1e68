#!/usr/bin/env python3
"""End-to-end demo on synthetic data: generate inputs, sweep, show winners.

Builds a deterministic synthetic dataset (segment files, a weekly
reference, and a line list whose confirmation curve lags the search
signal), then drives the ``warpwatch sweep`` entry point over the full
320-point lattice and prints the optimal-configuration table.

Usage:
    python scripts/run_demo.py --outdir demo_out [--keywords 10] [--days 200]
"""

from __future__ import annotations

import argparse
import math
import sys
from datetime import date, timedelta
from pathlib import Path

from warpwatch.cli import main as warpwatch_main
from warpwatch.testkit import Lcg

START = date(2020, 3, 16)
SEGMENT_STEP = 10
KEYWORD_POOL = (
    "cough", "fever", "flu", "headache", "sore throat", "masks", "face shield",
    "lockdown", "quarantine", "curfew", "frontliners", "social distancing",
    "new normal", "vaccine", "sanitizer",
)


def keyword_signal(keyword_index: int, days: int, seed: int) -> list[float]:
    """Smooth positive daily interest curve with a per-keyword phase shift."""
    rng = Lcg(seed * 1000 + keyword_index)
    center = days * 0.45 + 4.0 * keyword_index
    spread = days / 7.0
    values = []
    for t in range(days):
        z = (t - center) / spread
        base = 0.12 + 0.8 * math.exp(-0.5 * z * z)
        wiggle = 0.06 * math.sin(2.0 * math.pi * (t + 5 * keyword_index) / 29.0)
        noise = 0.03 * (2.0 * rng.next_float() - 1.0)
        values.append(min(100.0, max(0.5, 100.0 * (base + wiggle + noise))))
    return values


def write_trends(outdir: Path, keywords: list[str], days: int, seed: int) -> tuple[Path, Path]:
    seg_lines = ["keyword,segment_start,date,value"]
    weekly_lines = ["keyword,week_start,value"]
    n_weeks = (days + 6) // 7
    for ki, keyword in enumerate(keywords):
        signal = keyword_signal(ki, days, seed)
        for seg_offset in range(0, days - 30 + 1, SEGMENT_STEP):
            window = signal[seg_offset : seg_offset + 30]
            scale = 100.0 / max(window)
            seg_start = START + timedelta(days=seg_offset)
            for d, raw in enumerate(window):
                day = seg_start + timedelta(days=d)
                seg_lines.append(
                    f"{keyword},{seg_start.isoformat()},{day.isoformat()},{min(100.0, raw * scale):.4f}"
                )
        global_scale = 100.0 / max(signal)
        for w in range(n_weeks):
            week_start = START + timedelta(days=7 * w)
            week = signal[7 * w : 7 * w + 7]
            if not week:
                break
            weekly_lines.append(
                f"{keyword},{week_start.isoformat()},{min(100.0, (sum(week) / len(week)) * global_scale):.4f}"
            )
    segments = outdir / "segments.csv"
    weekly = outdir / "weekly.csv"
    segments.write_text("\n".join(seg_lines) + "\n", encoding="utf-8")
    weekly.write_text("\n".join(weekly_lines) + "\n", encoding="utf-8")
    return segments, weekly


def write_linelist(outdir: Path, days: int, seed: int, lag: int) -> Path:
    """Confirmation curve shaped like the search signal, shifted ``lag`` days later."""
    rng = Lcg(seed + 77)
    lines = ["RegionRes,ProvinceRes,DateRepConf,DateRepRem,Age"]
    center = days * 0.45 + lag
    spread = days / 7.0
    for t in range(days):
        z = (t - center) / spread
        intensity = 14.0 * math.exp(-0.5 * z * z) + 1.0
        count = int(intensity + 2.0 * rng.next_float())
        conf = START + timedelta(days=t)
        for _ in range(count):
            removal = ""
            if rng.next_float() < 0.85:
                removal = (conf + timedelta(days=5 + int(16 * rng.next_float()))).isoformat()
            lines.append(f"NCR,NCR,{conf.isoformat()},{removal},{18 + int(65 * rng.next_float())}")
    path = outdir / "linelist.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", required=True)
    parser.add_argument("--keywords", type=int, default=10, help="panel size (max 15)")
    parser.add_argument("--days", type=int, default=200)
    parser.add_argument("--lag", type=int, default=12, help="days the case curve trails the searches")
    parser.add_argument("--seed", type=int, default=2020)
    args = parser.parse_args()

    if not 2 <= args.keywords <= len(KEYWORD_POOL):
        parser.error(f"--keywords must be in [2, {len(KEYWORD_POOL)}]")
    if args.days < 45:
        parser.error("--days must be at least 45 to fit segments and windows")

    outdir = Path(args.outdir)
    inputs = outdir / "inputs"
    inputs.mkdir(parents=True, exist_ok=True)

    keywords = list(KEYWORD_POOL[: args.keywords])
    segments, weekly = write_trends(inputs, keywords, args.days, args.seed)
    linelist = write_linelist(inputs, args.days, args.seed, args.lag)
    print(f"inputs ready under {inputs} ({args.keywords} keywords, {args.days} days)")

    code = warpwatch_main(
        [
            "sweep",
            "--segments", str(segments),
            "--weekly", str(weekly),
            "--linelist", str(linelist),
            "--region", "NCR",
            "--province", "NCR",
            "--outdir", str(outdir / "sweep"),
        ]
    )
    if code != 0:
        return code

    print("\noptimal configurations:")
    for line in (outdir / "sweep" / "optimal_configs.csv").read_text().splitlines():
        if not line.startswith("#"):
            print(" ", line)
    print(f"\nfull artifacts: {outdir / 'sweep'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
