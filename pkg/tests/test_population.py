"""Synthetic campaign generation and end-to-end simulation tests."""

import numpy as np
import pytest

from rfad.classify import reliability_report
from rfad.config import default_config
from rfad.errors import DataError
from rfad.fingerprint import averaged_fingerprint, build_fingerprint
from rfad.hand import FINGERS
from rfad.population import (DEFAULT_POPULATION_SEED, PopulationSpec,
                             generate_population, load_records,
                             monte_carlo_classification, save_records,
                             simulate_hand)
from rfad.readlog import read_log


class TestPopulationSpec:
    def test_default_campaign_shape(self):
        spec = PopulationSpec()
        assert spec.subjects == 10
        assert spec.trials == 3
        assert len(spec.materials) == 3
        # 10 subjects x 3 materials x 3 trials x 5 channels
        assert spec.subjects * len(spec.materials) * spec.trials * len(FINGERS) == 450

    def test_validation(self):
        with pytest.raises(DataError):
            PopulationSpec(subjects=0)
        with pytest.raises(DataError):
            PopulationSpec(materials=())
        with pytest.raises(DataError):
            PopulationSpec(count_probs=(0.5, 0.5, 0.5, 0.0, 0.0))
        with pytest.raises(DataError):
            PopulationSpec(class_sds={"olive_oil": -1.0})


class TestSimulateHand:
    def test_forced_responsive_set(self):
        config = default_config()
        rng = np.random.default_rng(0)
        readings, log_rows, baseline = simulate_hand(
            "olive_oil", rng, config, PopulationSpec(),
            responsive=("II", "III"))
        by_channel = {r.channel: r for r in readings}
        assert by_channel["II"].responsive and by_channel["III"].responsive
        assert not by_channel["I"].responsive
        assert {ch for ch, _, _ in log_rows} == {"II", "III"}
        assert set(baseline.codes) == set(FINGERS)

    def test_fingerprint_lands_near_class_mean(self):
        config = default_config()
        spec = PopulationSpec(class_sds={m: 0.0 for m in
                                         ("olive_oil", "ethyl_alcohol",
                                          "deionized_water")},
                              channel_jitter_sd=0.0)
        rng = np.random.default_rng(1)
        means = config.class_means()
        for material, expected in means.items():
            readings, _, baseline = simulate_hand(
                material, rng, config, spec, responsive=FINGERS)
            fp = build_fingerprint(readings, baseline)
            assert averaged_fingerprint(fp) == pytest.approx(expected, abs=3.0)


class TestGeneratePopulation:
    def test_record_count_and_determinism(self):
        a = generate_population(seed=DEFAULT_POPULATION_SEED)
        b = generate_population(seed=DEFAULT_POPULATION_SEED)
        assert len(a) == 90  # 10 subjects x 3 materials x 3 trials
        assert a == b

    def test_reliability_statistics_structure(self):
        records = generate_population(seed=DEFAULT_POPULATION_SEED)
        report = reliability_report(records)
        assert report.ccd[0] == 100.0  # every hand read at least once
        assert report.ccd[4] == 0.0    # never all five
        assert all(a >= b for a, b in zip(report.ccd, report.ccd[1:]))
        assert set(report.joint_rates) == set(FINGERS)

    def test_different_seeds_differ(self):
        a = generate_population(seed=1)
        b = generate_population(seed=2)
        assert a != b

    def test_log_files_emitted_and_readable(self, tmp_path):
        spec = PopulationSpec(subjects=1, trials=1)
        records = generate_population(spec, seed=3, out_dir=tmp_path)
        files = sorted(tmp_path.glob("*.csv"))
        assert len(files) == 3  # one per material
        rows = read_log(files[0])
        responsive = {r.channel for r in rows}
        record = [r for r in records
                  if files[0].name.find(r.material) >= 0][0]
        assert responsive == {f for f in FINGERS if record.responsive[f]}

    def test_log_files_byte_identical_across_runs(self, tmp_path):
        spec = PopulationSpec(subjects=1, trials=1)
        for sub in ("a", "b"):
            (tmp_path / sub).mkdir()
            generate_population(spec, seed=3, out_dir=tmp_path / sub)
        for f in (tmp_path / "a").glob("*.csv"):
            assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


class TestRecordPersistence:
    def test_round_trip(self, tmp_path):
        records = generate_population(PopulationSpec(subjects=2, trials=1), seed=5)
        path = tmp_path / "records.json"
        save_records(records, path)
        assert load_records(path) == records


class TestMonteCarlo:
    def test_small_run_accuracy(self):
        # 60 hands, 20 per material; the calibrated margins are ~3 SD
        assert monte_carlo_classification(60, seed=17) >= 0.95
