import json
import math

import numpy as np
import pytest

from vmfcorr import scf, scf_multicluster, VmfCluster
from vmfcorr.cli import (
    EXIT_CONFIG,
    EXIT_IO,
    EXIT_OK,
    EXIT_VALIDATION,
    ConfigError,
    main,
    parse_config,
    run,
)


def curve_config(**overrides):
    doc = {
        "mode": "scf-curve",
        "wavelength": 1.0,
        "cluster": {"kappa": 10.0},
        "beta_deg": 0.0,
        "d_over_lambda": {"start": 0.0, "stop": 3.0, "count": 13},
    }
    doc.update(overrides)
    return doc


def write_config(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


class TestParseConfig:
    def test_defaults_filled(self):
        config = parse_config(json.dumps(curve_config()))
        assert config.format == "csv"
        assert config.seed == 0
        assert config.out is None
        assert config.threshold == 0.5
        assert config.clusters[0].power == 1.0

    def test_negative_kappa_names_field(self):
        with pytest.raises(ConfigError) as info:
            parse_config(json.dumps(curve_config(cluster={"kappa": -1.0})))
        assert any("kappa" in message for message in info.value.errors)

    def test_multiple_modes_rejected(self):
        with pytest.raises(ConfigError) as info:
            parse_config(json.dumps({"mode": ["scf-curve", "acf-curve"]}))
        assert any("mode" in message for message in info.value.errors)

    def test_mode_mismatch(self):
        with pytest.raises(ConfigError):
            parse_config(json.dumps(curve_config()), mode="acf-curve")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError) as info:
            parse_config(json.dumps(curve_config(bogus=1)))
        assert any("bogus" in message for message in info.value.errors)

    def test_parse_error_reports_position(self):
        with pytest.raises(ConfigError) as info:
            parse_config("{not valid json")
        assert any("line 1" in message for message in info.value.errors)

    def test_all_violations_collected(self):
        doc = curve_config(cluster={"kappa": -1.0}, wavelength=-2.0)
        with pytest.raises(ConfigError) as info:
            parse_config(json.dumps(doc))
        assert len(info.value.errors) >= 2

    def test_direction_required_for_multicluster(self):
        doc = curve_config()
        del doc["cluster"]
        del doc["beta_deg"]
        doc["clusters"] = [
            {"kappa": 5.0, "power": 0.5},
            {"kappa": 1.0, "mu_phi_deg": 90.0, "power": 0.5},
        ]
        with pytest.raises(ConfigError) as info:
            parse_config(json.dumps(doc))
        assert any("direction" in message for message in info.value.errors)
        doc["direction"] = {"phi_deg": 30.0, "psi_deg": 0.0}
        config = parse_config(json.dumps(doc))
        assert len(config.clusters) == 2

    def test_cluster_powers_must_sum_to_one(self):
        doc = curve_config()
        del doc["cluster"]
        del doc["beta_deg"]
        doc["clusters"] = [
            {"kappa": 5.0, "power": 0.5},
            {"kappa": 1.0, "power": 0.4},
        ]
        doc["direction"] = {"phi_deg": 0.0}
        with pytest.raises(ConfigError) as info:
            parse_config(json.dumps(doc))
        assert any("sum to 1" in message for message in info.value.errors)


class TestRunModes:
    def test_scf_curve_kappa_sweep_zeros(self, tmp_path):
        doc = {
            "mode": "scf-curve",
            "wavelength": 1.0,
            "cluster": {"mu_phi_deg": 0.0, "mu_psi_deg": 0.0},
            "kappas": [0.0, 1.0, 10.0, 100.0],
            "betas_deg": [0.0],
            "d_over_lambda": {"start": 0.0, "stop": 3.0, "count": 13},
            "out": str(tmp_path / "fig1a.csv"),
        }
        assert run(parse_config(json.dumps(doc))) == EXIT_OK
        lines = (tmp_path / "fig1a.csv").read_text().splitlines()
        assert lines[0] == "kappa,beta_deg,d_over_lambda,re,im,abs"
        for line in lines[1:]:
            kappa, _, frac, _, _, magnitude = line.split(",")
            if float(kappa) == 0.0 and float(frac) in (0.5, 1.0, 1.5, 2.0):
                assert float(magnitude) < 1e-12

    def test_scf_curve_direction_header(self, tmp_path):
        doc = curve_config(out=str(tmp_path / "c.csv"))
        del doc["beta_deg"]
        doc["direction"] = {"phi_deg": 0.0, "psi_deg": 0.0}
        assert run(parse_config(json.dumps(doc))) == EXIT_OK
        header = (tmp_path / "c.csv").read_text().splitlines()[0]
        assert header == "d_over_lambda,re,im,abs"

    def test_scf_field_radial_symmetry_when_isotropic(self, tmp_path):
        doc = {
            "mode": "scf-field",
            "wavelength": 1.0,
            "cluster": {"kappa": 0.0},
            "x_over_lambda": {"start": -1.0, "stop": 1.0, "count": 5},
            "y_over_lambda": {"start": -1.0, "stop": 1.0, "count": 5},
            "out": str(tmp_path / "field.csv"),
        }
        assert run(parse_config(json.dumps(doc))) == EXIT_OK
        rows = (tmp_path / "field.csv").read_text().splitlines()[1:]
        assert len(rows) == 25
        values = {}
        for row in rows:
            x, y, _, _, magnitude = map(float, row.split(","))
            values.setdefault(round(math.hypot(x, y), 12), set()).add(round(magnitude, 12))
        assert all(len(group) == 1 for group in values.values())

    def test_acf_curve_matches_library(self, tmp_path):
        doc = {
            "mode": "acf-curve",
            "carrier_frequency_hz": 3e9,
            "cluster": {"kappa": 8.0, "mu_phi_deg": 10.0},
            "motion": {"speed_mps": 20.0, "phi_v_deg": 10.0},
            "monostatic": True,
            "dt_s": {"start": 0.0, "stop": 0.01, "count": 6},
            "out": str(tmp_path / "acf.csv"),
        }
        config = parse_config(json.dumps(doc))
        assert run(config) == EXIT_OK
        lam = 299_792_458.0 / 3e9
        rows = (tmp_path / "acf.csv").read_text().splitlines()[1:]
        cluster = VmfCluster(math.radians(10.0), 0.0, 8.0)
        velocity = 20.0 * np.array([math.cos(math.radians(10.0)), math.sin(math.radians(10.0)), 0.0])
        for row in rows:
            dt, re, im, _ = map(float, row.split(","))
            expected = scf(cluster, 2.0 * dt * velocity, lam)
            assert complex(re, im) == pytest.approx(expected, abs=1e-12)

    def test_array_matrix_output(self, tmp_path):
        doc = {
            "mode": "array-matrix",
            "wavelength": 0.1,
            "cluster": {"kappa": 0.0},
            "geometry": {"kind": "linear", "n": 2, "spacing_over_lambda": 0.5},
            "out": str(tmp_path / "matrix.csv"),
        }
        assert run(parse_config(json.dumps(doc))) == EXIT_OK
        rows = (tmp_path / "matrix.csv").read_text().splitlines()
        assert rows[0] == "row,col,re,im"
        entries = {tuple(map(float, r.split(",")[:2])): r.split(",")[2:] for r in rows[1:]}
        assert float(entries[(0.0, 0.0)][0]) == 1.0
        assert abs(float(entries[(0.0, 1.0)][0])) < 1e-14

    def test_array_path_circular(self, tmp_path):
        doc = {
            "mode": "array-path",
            "wavelength": 1.0,
            "cluster": {"kappa": 10.0, "mu_phi_deg": 45.0},
            "geometry": {"kind": "circular", "n": 21, "radius_over_lambda": 0.9549},
            "out": str(tmp_path / "path.csv"),
        }
        assert run(parse_config(json.dumps(doc))) == EXIT_OK
        rows = (tmp_path / "path.csv").read_text().splitlines()[1:]
        coords = [float(r.split(",")[0]) for r in rows]
        assert min(coords) < 0.0 < max(coords)

    def test_array_path_rejects_planar(self):
        doc = {
            "mode": "array-path",
            "wavelength": 1.0,
            "cluster": {"kappa": 1.0},
            "geometry": {"kind": "planar", "nx": 2, "ny": 2,
                         "dx_over_lambda": 0.5, "dy_over_lambda": 0.5},
        }
        with pytest.raises(ConfigError):
            parse_config(json.dumps(doc))

    def test_radar_table(self, tmp_path):
        doc = {
            "mode": "radar-table",
            "carrier_frequency_hz": 1e10,
            "elevation_deg": 20.0,
            "widths_deg": [2.0],
            "speeds_kmh": [150.0],
            "out": str(tmp_path / "radar.csv"),
        }
        assert run(parse_config(json.dumps(doc))) == EXIT_OK
        rows = (tmp_path / "radar.csv").read_text().splitlines()
        assert rows[0] == "width_deg,speed_kmh,decorrelation_time_s"
        _, _, seconds = rows[1].split(",")
        assert abs(float(seconds) - 0.024) / 0.024 < 0.15

    def test_threads_do_not_change_output(self, tmp_path):
        doc = curve_config(out=str(tmp_path / "a.csv"))
        run(parse_config(json.dumps(doc)))
        doc["out"] = str(tmp_path / "b.csv")
        doc["threads"] = 3
        run(parse_config(json.dumps(doc)))
        assert (tmp_path / "a.csv").read_text() == (tmp_path / "b.csv").read_text()


class TestDeterminismAndRoundTrip:
    def test_byte_identical_reruns(self, tmp_path):
        doc = curve_config(seed=5)
        for name in ("first.csv", "second.csv"):
            doc["out"] = str(tmp_path / name)
            assert run(parse_config(json.dumps(doc))) == EXIT_OK
        assert (tmp_path / "first.csv").read_bytes() == (tmp_path / "second.csv").read_bytes()

    def test_json_round_trip(self, tmp_path):
        out = tmp_path / "curve.json"
        doc = curve_config(format="json", out=str(out))
        config = parse_config(json.dumps(doc))
        assert run(config) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["columns"] == ["kappa", "beta_deg", "d_over_lambda", "re", "im", "abs"]
        lam = 1.0
        cluster = config.clusters[0]
        for row in payload["rows"]:
            _, _, frac, re, im, _ = row
            expected = scf_multicluster([cluster], (frac * lam, 0.0, 0.0), lam)
            assert complex(re, im) == expected


class TestMainExitCodes:
    def test_success(self, tmp_path):
        path = write_config(tmp_path / "c.json", curve_config())
        out = tmp_path / "c.csv"
        assert main(["scf-curve", "--config", path, "--out", str(out)]) == EXIT_OK
        assert out.exists()

    def test_config_error(self, tmp_path, capsys):
        path = write_config(tmp_path / "bad.json", curve_config(cluster={"kappa": -3.0}))
        assert main(["scf-curve", "--config", path]) == EXIT_CONFIG
        assert "kappa" in capsys.readouterr().err

    def test_io_error_on_missing_config(self):
        assert main(["scf-curve", "--config", "/nonexistent/config.json"]) == EXIT_IO

    def test_io_error_on_unwritable_output(self, tmp_path):
        path = write_config(tmp_path / "c.json", curve_config())
        out = "/nonexistent-dir/out.csv"
        assert main(["scf-curve", "--config", path, "--out", out]) == EXIT_IO

    def test_validate_pass_and_fail(self, tmp_path, capsys):
        doc = {
            "mode": "validate",
            "kappas": [0.0, 10.0],
            "betas_deg": [0.0, 60.0],
            "d_over_lambda": {"start": 0.0, "stop": 2.0, "count": 5},
            "out": str(tmp_path / "validate.csv"),
        }
        path = write_config(tmp_path / "v.json", doc)
        assert main(["validate", "--config", path]) == EXIT_OK
        assert "max |closed - quadrature|" in capsys.readouterr().out
        doc["tolerance"] = 1e-20
        path = write_config(tmp_path / "v2.json", doc)
        assert main(["validate", "--config", path]) == EXIT_VALIDATION

    def test_cli_overrides(self, tmp_path):
        path = write_config(tmp_path / "c.json", curve_config())
        out = tmp_path / "over.json"
        code = main([
            "scf-curve", "--config", path,
            "--out", str(out), "--format", "json", "--seed", "9", "--threads", "2",
        ])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["seed"] == 9
