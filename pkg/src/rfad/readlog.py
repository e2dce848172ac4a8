"""Reader-log and series persistence, plus calibration.

Two CSV formats are supported, both UTF-8 with LF line endings:

* read log: ``timestamp_s,epc,channel,sensor_code,rssi_dbm``
* code series: ``timestamp_s,channel,code``

All writers are atomic (write-then-rename).
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import DataError
from .fingerprint import CalibrationBaseline
from .hand import FINGERS
from .signal import CODE_STORAGE_MAX, CODE_STORAGE_MIN, CodeSeries, estimate_code

READLOG_HEADER = ["timestamp_s", "epc", "channel", "sensor_code", "rssi_dbm"]
SERIES_HEADER = ["timestamp_s", "channel", "code"]


@dataclass(frozen=True)
class ReadLogRow:
    """One timestamped tag read."""

    timestamp: float
    epc: str
    channel: str
    sensor_code: int
    rssi_dbm: Optional[float] = None

    def __post_init__(self):
        if self.timestamp < 0:
            raise DataError(f"timestamp must be non-negative, got {self.timestamp}")
        if self.channel not in FINGERS:
            raise DataError(f"unknown channel {self.channel!r}")
        if not CODE_STORAGE_MIN <= self.sensor_code <= CODE_STORAGE_MAX:
            raise DataError(
                f"sensor_code {self.sensor_code} outside "
                f"[{CODE_STORAGE_MIN}, {CODE_STORAGE_MAX}]")


def _atomic_write(path, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_log(rows: Iterable[ReadLogRow], path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(READLOG_HEADER)
    for row in rows:
        writer.writerow([repr(row.timestamp), row.epc, row.channel,
                         row.sensor_code,
                         "" if row.rssi_dbm is None else repr(row.rssi_dbm)])
    _atomic_write(path, buf.getvalue())


def read_log(path) -> list[ReadLogRow]:
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty read log")
        if header != READLOG_HEADER:
            raise DataError(f"{path}:1: bad header {header!r}")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(READLOG_HEADER):
                raise DataError(f"{path}:{lineno}: expected {len(READLOG_HEADER)} fields")
            try:
                rows.append(ReadLogRow(
                    timestamp=float(rec[0]), epc=rec[1], channel=rec[2],
                    sensor_code=int(rec[3]),
                    rssi_dbm=float(rec[4]) if rec[4] else None))
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: malformed row") from exc
    if not rows:
        raise DataError(f"{path}: read log contains no rows")
    return rows


def series_from_rows(rows: Sequence[ReadLogRow]) -> dict[str, CodeSeries]:
    """Group log rows into per-channel series, sorted by timestamp."""
    by_channel: dict[str, list[ReadLogRow]] = {}
    for row in rows:
        by_channel.setdefault(row.channel, []).append(row)
    out = {}
    for channel, group in by_channel.items():
        group.sort(key=lambda r: r.timestamp)
        times = [r.timestamp for r in group]
        if len(set(times)) != len(times):
            raise DataError(f"duplicate timestamps on channel {channel}")
        out[channel] = CodeSeries(times=np.array(times),
                                  codes=np.array([r.sensor_code for r in group]),
                                  channel=channel)
    return out


def ingest_log(path) -> dict[str, CodeSeries]:
    return series_from_rows(read_log(path))


def load_code_series(path) -> dict[str, CodeSeries]:
    """Load per-channel series from either supported CSV format.

    Dispatches on the header line: full reader logs are grouped per
    channel, plain code-series files are read directly.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline().strip()
    if header == ",".join(READLOG_HEADER):
        return ingest_log(path)
    return read_series(path)


def write_series(series_set: Mapping[str, CodeSeries], path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SERIES_HEADER)
    for channel in sorted(series_set, key=FINGERS.index):
        s = series_set[channel]
        for t, code in zip(s.times, s.codes):
            writer.writerow([repr(float(t)), channel, int(code)])
    _atomic_write(path, buf.getvalue())


def read_series(path) -> dict[str, CodeSeries]:
    grouped: dict[str, list] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SERIES_HEADER:
            raise DataError(f"{path}:1: bad header {header!r}")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            try:
                t, channel, code = float(rec[0]), rec[1], int(rec[2])
            except (ValueError, IndexError) as exc:
                raise DataError(f"{path}:{lineno}: malformed row") from exc
            grouped.setdefault(channel, []).append((t, code))
    if not grouped:
        raise DataError(f"{path}: series file contains no rows")
    return {ch: CodeSeries(times=np.array([t for t, _ in pts]),
                           codes=np.array([c for _, c in pts]), channel=ch)
            for ch, pts in grouped.items()}


def calibrate(series_set: Mapping[str, CodeSeries], window: int = 10,
              timestamp: str = "") -> CalibrationBaseline:
    """Per-channel air baseline from an untouched-hand acquisition.

    Channels absent from the input are reported in ``gaps`` rather than
    silently defaulted.
    """
    codes = {}
    gaps = []
    for channel in FINGERS:
        if channel not in series_set:
            gaps.append(channel)
            continue
        series = series_set[channel]
        if len(series) < window:
            raise DataError(
                f"channel {channel} has {len(series)} samples, needs >= {window}")
        codes[channel] = estimate_code(series, window, "mean")
    if not codes:
        raise DataError("no channels present in calibration input")
    return CalibrationBaseline(codes=codes, timestamp=timestamp, gaps=tuple(gaps))


def save_baseline(baseline: CalibrationBaseline, path) -> None:
    import json
    payload = {"codes": dict(baseline.codes), "timestamp": baseline.timestamp,
               "gaps": list(baseline.gaps)}
    _atomic_write(path, json.dumps(payload, indent=2) + "\n")


def load_baseline(path) -> CalibrationBaseline:
    import json
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return CalibrationBaseline(codes=payload["codes"],
                               timestamp=payload.get("timestamp", ""),
                               gaps=tuple(payload.get("gaps", ())))
