"""Shared fixtures: deterministic synthetic input files for pipeline tests.

The generators mimic what the real exports look like: per-keyword 30-day
segments internally rescaled so each window peaks at 100, a weekly
reference scaled over the whole period, and a line list with an
epidemic-shaped confirmation curve plus off-region noise rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path

import pytest

from warpwatch.testkit import Lcg

START = date(2020, 3, 16)
TOTAL_DAYS = 110
SEGMENT_STEP = 10
N_WEEKS = 16
KEYWORDS = ("cough", "fever", "flu", "lockdown", "masks", "quarantine")
REGION = "NCR"
PROVINCE = "NCR"


@dataclass(frozen=True)
class SweepInputs:
    segments: str
    weekly: str
    linelist: str
    start: date
    end: date


def _keyword_signal(keyword_index: int) -> list[float]:
    """Smooth positive daily signal in (0, 100] over the full span."""
    rng = Lcg(900 + keyword_index)
    center = 55.0 + 4.0 * keyword_index
    values = []
    for t in range(TOTAL_DAYS):
        z = (t - center) / 16.0
        base = 0.15 + 0.8 * math.exp(-0.5 * z * z)
        wiggle = 0.05 * math.sin(2.0 * math.pi * (t + 3 * keyword_index) / 23.0)
        noise = 0.02 * (2.0 * rng.next_float() - 1.0)
        values.append(min(100.0, max(0.5, 100.0 * (base + wiggle + noise))))
    return values


def write_trends_files(directory: Path) -> tuple[str, str]:
    """Emit segments.csv and weekly.csv covering START .. START+TOTAL_DAYS-1."""
    seg_lines = ["keyword,segment_start,date,value"]
    weekly_lines = ["keyword,week_start,value"]
    for ki, keyword in enumerate(KEYWORDS):
        signal = _keyword_signal(ki)
        for seg_offset in range(0, TOTAL_DAYS - 30 + 1, SEGMENT_STEP):
            window = signal[seg_offset : seg_offset + 30]
            scale = 100.0 / max(window)
            seg_start = START + timedelta(days=seg_offset)
            for d, raw in enumerate(window):
                day = seg_start + timedelta(days=d)
                seg_lines.append(
                    f"{keyword},{seg_start.isoformat()},{day.isoformat()},{min(100.0, raw * scale):.4f}"
                )
        global_scale = 100.0 / max(signal)
        for w in range(N_WEEKS):
            week_start = START + timedelta(days=7 * w)
            week_days = signal[7 * w : 7 * w + 7]
            mean = sum(week_days) / len(week_days)
            weekly_lines.append(
                f"{keyword},{week_start.isoformat()},{min(100.0, mean * global_scale):.4f}"
            )
    segments_path = directory / "segments.csv"
    weekly_path = directory / "weekly.csv"
    segments_path.write_text("\n".join(seg_lines) + "\n", encoding="utf-8")
    weekly_path.write_text("\n".join(weekly_lines) + "\n", encoding="utf-8")
    return str(segments_path), str(weekly_path)


def write_linelist(directory: Path) -> str:
    """Emit an epidemic-shaped line list with off-region rows mixed in."""
    rng = Lcg(4242)
    lines = ["RegionRes,ProvinceRes,DateRepConf,DateRepRem,Age"]
    for t in range(TOTAL_DAYS):
        z = (t - 60.0) / 20.0
        intensity = 9.0 * math.exp(-0.5 * z * z) + 1.0
        count = int(intensity + 2.0 * rng.next_float())
        conf = START + timedelta(days=t)
        for _ in range(count):
            removal = ""
            if rng.next_float() < 0.8:
                rem_day = conf + timedelta(days=7 + int(14 * rng.next_float()))
                removal = rem_day.isoformat()
            lines.append(f"{REGION},{PROVINCE},{conf.isoformat()},{removal},{20 + int(60 * rng.next_float())}")
        if rng.next_float() < 0.3:
            lines.append(f"Region IV-A,Cavite,{conf.isoformat()},,31")
    path = directory / "linelist.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def sweep_inputs(tmp_path_factory) -> SweepInputs:
    directory = tmp_path_factory.mktemp("sweep_inputs")
    segments, weekly = write_trends_files(directory)
    linelist = write_linelist(directory)
    return SweepInputs(
        segments=segments,
        weekly=weekly,
        linelist=linelist,
        start=START,
        end=START + timedelta(days=TOTAL_DAYS - 1),
    )
