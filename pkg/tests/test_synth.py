import numpy as np
import pandas as pd
import pytest

from rsrp.config import get_cfg_defaults
from rsrp.data import write_drive_test
from rsrp.exceptions import ConfigError, RouteTooShort
from rsrp.geo import great_circle_distance, offset
from rsrp.synth import SynthCell, SynthConfig, build_synth_config, generate, sample_route, write_ground_truth

from conftest import ORIGIN, haversine, line_config, north_route, split_zones


class TestGenerate:

    def test_noiseless_values_follow_the_model(self, noiseless_scene):
        dataset, sites, truth = noiseless_scene
        cell = SynthCell("A", ORIGIN, -40.0, 3.5)
        assert [s.cell_id for s in sites] == ["A"]
        for m in dataset:
            assert m.rsrp_dbm == cell.mean_rsrp(great_circle_distance(m.pos, ORIGIN))
            assert truth.noise_db[m.id] == 0.0

    def test_reconstruction(self):
        dataset, _, truth = generate(line_config(sigma_db=4.0, seed=9, p0_dbm=-20.0))
        for m in dataset.measured():
            assert m.rsrp_dbm - truth.noise_db[m.id] == truth.true_mean_dbm[m.id]

    def test_spacing_and_timestamps(self, noiseless_scene):
        dataset, _, _ = noiseless_scene
        ms = dataset.measurements
        for a, b in zip(ms[:-1], ms[1:]):
            assert haversine(a.pos, b.pos) == pytest.approx(2.5, rel=1e-3)
            assert b.timestamp_ms - a.timestamp_ms == 1000
        assert ms[0].timestamp_ms == 0

    def test_sample_count(self):
        assert len(sample_route(north_route(0.0, 100.0), 5.0)) == 21
        # remainder shorter than one step is dropped
        assert len(sample_route(north_route(0.0, 103.0), 5.0)) == 21

    def test_polyline_keeps_spacing_across_vertices(self):
        route = (ORIGIN, offset(ORIGIN, 102.0, 0.0), offset(ORIGIN, 102.0, 100.0))
        pts = sample_route(route, 4.0)
        steps = [haversine(a, b) for a, b in zip(pts[:-1], pts[1:])]
        assert len(pts) == 51
        # the chord across the corner is shorter than the arc length
        assert all(2.8 < s <= 4.0 + 1e-4 for s in steps)

    def test_deterministic(self, tmp_path):
        config = line_config(sigma_db=4.0, seed=21)
        paths = []
        for run in ("a", "b"):
            dataset, _, truth = generate(config)
            dt, gt = str(tmp_path / run / "dt.csv"), str(tmp_path / run / "gt.csv")
            write_drive_test(dataset, dt, "# header")
            write_ground_truth(truth, gt, "# header")
            paths.append((dt, gt))
        for a, b in zip(*paths):
            assert open(a, "rb").read() == open(b, "rb").read()

    def test_seed_changes_noise(self):
        _, _, a = generate(line_config(sigma_db=4.0, seed=1))
        _, _, b = generate(line_config(sigma_db=4.0, seed=2))
        assert a.noise_db != b.noise_db

    def test_noise_empirics(self):
        config = SynthConfig(cells=(SynthCell("A", ORIGIN, -10.0, 2.0),), route=north_route(600.0, 5600.0),
                             speed_kmh=18.0, sample_interval_s=0.1, sigma_db=5.0, seed=17)
        _, _, truth = generate(config)
        assert len(truth) == 10001
        assert np.std(truth.noise_db) == pytest.approx(5.0, rel=0.03)

    def test_out_of_range_written_without_rsrp(self):
        config = SynthConfig(cells=(SynthCell("A", ORIGIN, -90.0, 6.5),), route=north_route(1000.0, 1100.0))
        dataset, _, truth = generate(config)
        assert all(m.rsrp_dbm is None for m in dataset)
        assert all(v < -150.0 for v in truth.true_mean_dbm)

    def test_missing_mask_leaves_noise_alone(self):
        _, _, full = generate(line_config(sigma_db=4.0, seed=5, p0_dbm=-20.0))
        dataset, _, holed = generate(line_config(sigma_db=4.0, seed=5, p0_dbm=-20.0, missing_fraction=0.3))
        assert holed.noise_db == full.noise_db
        n_missing = sum(1 for m in dataset if m.rsrp_dbm is None)
        assert 30 < n_missing < 90


class TestServingCell:

    def test_switch_at_the_crossover(self):
        far = offset(ORIGIN, 2000.0, 0.0)
        cells = (SynthCell("B", far, -40.0, 3.5), SynthCell("A", ORIGIN, -40.0, 3.5))
        config = SynthConfig(cells=cells, route=north_route(205.0, 1805.0), speed_kmh=36.0)
        dataset, sites, truth = generate(config)
        assert [s.cell_id for s in sites] == ["A", "B"]
        for m in dataset:
            d_a, d_b = great_circle_distance(m.pos, ORIGIN), great_circle_distance(m.pos, far)
            expected = "A" if d_a <= d_b else "B"
            assert m.serving_cell == expected
            assert truth.serving_cell[m.id] == expected
        assert dataset.measurements[0].serving_cell == "A"
        assert dataset.measurements[-1].serving_cell == "B"


class TestZones:

    def test_zone_sigma_and_offsets(self):
        zones = split_zones(600.0, 1097.5, south=(0.0, 0.0, 0.0), north=(3.0, 5.0, 0.0))
        dataset, _, truth = generate(line_config(sigma_db=1.0, seed=2, zones=zones))
        cell = SynthCell("A", ORIGIN, -40.0, 3.5)
        for m in dataset:
            sigma = truth.sigma_db[m.id]
            assert sigma in (0.0, 3.0)
            p0_off = 5.0 if sigma == 3.0 else 0.0
            assert truth.true_mean_dbm[m.id] == cell.mean_rsrp(truth.true_dist_m[m.id], p0_off)
            if sigma == 0.0:
                assert truth.noise_db[m.id] == 0.0
        assert set(truth.sigma_db) == {0.0, 3.0}


class TestValidation:

    @pytest.mark.parametrize("kwargs", [{"speed_kmh": 0.0}, {"speed_kmh": 41.0}, {"sample_interval_s": 0.0},
                                        {"sigma_db": -1.0}, {"missing_fraction": 1.0}])
    def test_bad_parameters(self, kwargs):
        with pytest.raises(ConfigError):
            SynthConfig(cells=(SynthCell("A", ORIGIN, -40.0, 3.5),), route=north_route(0.0, 100.0), **kwargs)

    def test_duplicate_cells(self):
        cells = (SynthCell("A", ORIGIN, -40.0, 3.5), SynthCell("A", ORIGIN, -30.0, 3.0))
        with pytest.raises(ConfigError):
            SynthConfig(cells=cells, route=north_route(0.0, 100.0))

    def test_route_too_short(self):
        with pytest.raises(RouteTooShort):
            SynthConfig(cells=(SynthCell("A", ORIGIN, -40.0, 3.5),), route=(ORIGIN,))
        config = SynthConfig(cells=(SynthCell("A", ORIGIN, -40.0, 3.5),), route=north_route(100.0, 102.0))
        with pytest.raises(RouteTooShort):
            generate(config)


class TestFromConfig:

    def test_build(self):
        cfg = get_cfg_defaults()
        cfg.SYNTH.CELLS = [["A", 35.70, 51.40, -40.0, 3.5]]
        cfg.SYNTH.ROUTE = [[35.705, 51.40], [35.71, 51.40]]
        cfg.SYNTH.ZONES = [[35.70, 51.39, 35.708, 51.41, None, 2.0, 0.0]]
        cfg.SYNTH.SEED = 4
        config = build_synth_config(cfg)
        assert config.cells[0].cell_id == "A"
        assert config.route[1].lat_deg == 35.71
        assert config.zones[0].sigma_db is None
        assert config.zones[0].p0_offset_db == 2.0
        assert config.seed == 4
        assert config.sigma_db == 4.0

    def test_malformed_rows(self):
        cfg = get_cfg_defaults()
        cfg.SYNTH.CELLS = [["A", 35.70, 51.40]]
        cfg.SYNTH.ROUTE = [[35.705, 51.40], [35.71, 51.40]]
        with pytest.raises(ConfigError):
            build_synth_config(cfg)


def test_ground_truth_frame(noiseless_scene):
    _, _, truth = noiseless_scene
    frame = truth.to_frame()
    assert list(frame.columns) == ["point_id", "true_mean_dbm", "noise_db", "true_dist_m", "serving_cell"]
    assert len(frame) == 200
    assert isinstance(frame, pd.DataFrame)
