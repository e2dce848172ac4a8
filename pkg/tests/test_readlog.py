"""Reader-log CSV, series persistence, and calibration tests."""

import numpy as np
import pytest

from rfad.errors import DataError
from rfad.hand import FINGERS
from rfad.readlog import (ReadLogRow, calibrate, ingest_log, load_baseline,
                          read_log, read_series, save_baseline,
                          series_from_rows, write_log, write_series)
from rfad.signal import CodeSeries, FluctuationModel, synthesize_series


def _rows(channel="I", n=3, start=0.0):
    return [ReadLogRow(timestamp=start + 0.7 * i, epc="E280" + "0" * 20,
                       channel=channel, sensor_code=200 + i, rssi_dbm=-55.5)
            for i in range(n)]


class TestReadLogRow:
    def test_validation(self):
        with pytest.raises(DataError):
            ReadLogRow(timestamp=-1.0, epc="x", channel="I", sensor_code=100)
        with pytest.raises(DataError):
            ReadLogRow(timestamp=0.0, epc="x", channel="VI", sensor_code=100)
        with pytest.raises(DataError):
            ReadLogRow(timestamp=0.0, epc="x", channel="I", sensor_code=600)

    def test_optional_rssi(self):
        row = ReadLogRow(timestamp=0.0, epc="x", channel="I", sensor_code=100)
        assert row.rssi_dbm is None


class TestLogRoundTrip:
    def test_lossless(self, tmp_path):
        rows = _rows("I") + _rows("III", start=0.1)
        path = tmp_path / "log.csv"
        write_log(rows, path)
        assert read_log(path) == rows

    def test_header_and_line_endings(self, tmp_path):
        path = tmp_path / "log.csv"
        write_log(_rows(), path)
        raw = path.read_bytes()
        assert raw.startswith(b"timestamp_s,epc,channel,sensor_code,rssi_dbm\n")
        assert b"\r" not in raw

    def test_byte_identical_rewrites(self, tmp_path):
        rows = _rows("II", n=5)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_log(rows, a)
        write_log(rows, b)
        assert a.read_bytes() == b.read_bytes()

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("")
        with pytest.raises(DataError, match="empty"):
            read_log(path)

    def test_header_only_rejected(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("timestamp_s,epc,channel,sensor_code,rssi_dbm\n")
        with pytest.raises(DataError, match="no rows"):
            read_log(path)

    def test_bad_code_reports_line(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("timestamp_s,epc,channel,sensor_code,rssi_dbm\n"
                        "0.0,x,I,200,\n"
                        "0.7,x,I,600,\n")
        with pytest.raises(DataError, match=":3:"):
            read_log(path)

    def test_malformed_row_reports_line(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("timestamp_s,epc,channel,sensor_code,rssi_dbm\n"
                        "zero,x,I,200,\n")
        with pytest.raises(DataError, match=":2:"):
            read_log(path)

    def test_wrong_header_rejected(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("time,id,ch,code,rssi\n0,x,I,200,\n")
        with pytest.raises(DataError, match="header"):
            read_log(path)


class TestSeriesFromRows:
    def test_interleaved_channels_sorted(self):
        rows = [
            ReadLogRow(1.4, "x", "II", 203),
            ReadLogRow(0.0, "x", "I", 200),
            ReadLogRow(0.7, "x", "II", 202),
            ReadLogRow(0.7, "x", "I", 201),
        ]
        series = series_from_rows(rows)
        assert set(series) == {"I", "II"}
        assert list(series["I"].codes) == [200, 201]
        assert list(series["II"].codes) == [202, 203]
        assert list(series["II"].times) == [0.7, 1.4]

    def test_duplicate_timestamp_rejected(self):
        rows = [ReadLogRow(0.7, "x", "I", 200), ReadLogRow(0.7, "y", "I", 201)]
        with pytest.raises(DataError, match="duplicate"):
            series_from_rows(rows)

    def test_ingest_log(self, tmp_path):
        path = tmp_path / "log.csv"
        write_log(_rows("IV", n=4), path)
        series = ingest_log(path)
        assert len(series["IV"]) == 4


class TestSeriesFiles:
    def test_round_trip(self, tmp_path):
        model = FluctuationModel()
        original = {ch: synthesize_series(model, 21.0, seed=i, channel=ch)
                    for i, ch in enumerate(("I", "III", "V"))}
        path = tmp_path / "series.csv"
        write_series(original, path)
        loaded = read_series(path)
        assert set(loaded) == set(original)
        for ch in original:
            assert np.array_equal(loaded[ch].codes, original[ch].codes)
            assert np.array_equal(loaded[ch].times, original[ch].times)

    def test_header(self, tmp_path):
        path = tmp_path / "series.csv"
        write_series({"I": synthesize_series(FluctuationModel(), 7.0, seed=0)}, path)
        assert path.read_text().splitlines()[0] == "timestamp_s,channel,code"

    def test_empty_rejected(self, tmp_path):
        path = tmp_path / "series.csv"
        path.write_text("timestamp_s,channel,code\n")
        with pytest.raises(DataError, match="no rows"):
            read_series(path)


class TestCalibrate:
    def _constant_series(self, code, channels=FINGERS, n=12):
        return {ch: CodeSeries(times=np.arange(n) * 0.7,
                               codes=np.full(n, code), channel=ch)
                for ch in channels}

    def test_constant_air_series(self):
        baseline = calibrate(self._constant_series(150))
        assert all(baseline.codes[ch] == 150.0 for ch in FINGERS)
        assert baseline.gaps == ()

    def test_missing_channel_reported_as_gap(self):
        baseline = calibrate(self._constant_series(150, channels=("I", "II", "IV", "V")))
        assert baseline.gaps == ("III",)
        assert "III" not in baseline.codes

    def test_sawtooth_air_series_near_mean(self):
        model = FluctuationModel(baseline=300, transient_amplitude=0.0,
                                 noise_sd=0.0)
        series = {"I": synthesize_series(model, 70.0, seed=0)}
        baseline = calibrate(series, window=10)
        assert abs(baseline.codes["I"] - 300.0) <= 2.0

    def test_short_series_rejected(self):
        with pytest.raises(DataError, match="needs >= 10"):
            calibrate(self._constant_series(150, n=5))

    def test_no_channels_rejected(self):
        with pytest.raises(DataError):
            calibrate({})

    def test_baseline_persistence(self, tmp_path):
        baseline = calibrate(self._constant_series(150), timestamp="2026-08-24")
        path = tmp_path / "baseline.json"
        save_baseline(baseline, path)
        loaded = load_baseline(path)
        assert loaded.codes == baseline.codes
        assert loaded.timestamp == "2026-08-24"
        assert loaded.gaps == baseline.gaps
