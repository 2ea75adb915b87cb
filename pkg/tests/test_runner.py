import json

import numpy as np
import pytest

from graphqec.cli import cli_main
from graphqec.runner import (ConfigError, ExperimentConfig, encoded_state,
                             run_experiment)
from graphqec.sampling import NoiseModel


def cfg(kind, **kw):
    base = {"kind": kind, "trials": 100, "sweep_points": 5}
    base.update(kw)
    return ExperimentConfig.from_dict(base)


class TestConfigValidation:
    def test_unknown_kind(self):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict({"kind": "frobnicate"})
        assert "kind" in err.value.fields

    def test_unknown_field(self):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict({"kind": "syndrome-table", "shots": 10})
        assert "shots" in err.value.fields

    def test_bad_probe_and_lost(self):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict({"kind": "loss-recovery", "lost": 3,
                                        "probes": ["2"]})
        assert set(err.value.fields) == {"lost", "probes"}

    def test_bad_error_spec(self):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict({"kind": "syndrome-table", "error": "W@9"})
        assert "error" in err.value.fields

    def test_bad_noise(self):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict({"kind": "syndrome-table",
                                        "noise": {"visibility": 2.0}})
        assert "noise" in err.value.fields

    def test_roundtrip_digest_stable(self):
        a = cfg("syndrome-table", seed=3)
        b = ExperimentConfig.from_dict(a.to_dict())
        assert a.digest() == b.digest()


class TestEncodedState:
    def test_byproduct_modes_agree_for_ideal(self):
        for stage in ("post-resource", "post-encoding"):
            noise = NoiseModel(stage=stage)
            a = encoded_state("0", noise, "condition0")
            b = encoded_state("0", noise, "correct")
            np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-10)

    def test_raw_mode_mixes_branches(self):
        rho = encoded_state("+y", NoiseModel(), "raw")
        assert rho.purity() < 1 - 1e-6

    def test_stages_agree_for_white_noise(self):
        a = encoded_state("0", NoiseModel(visibility=0.7, stage="post-resource"))
        b = encoded_state("0", NoiseModel(visibility=0.7, stage="post-encoding"))
        np.testing.assert_allclose(a.matrix, b.matrix, atol=1e-10)


class TestExperiments:
    @pytest.mark.parametrize("kind", ["resource-witness", "encode-tomography",
                                      "encode-channel", "loss-recovery",
                                      "syndrome-table", "noise-sweep"])
    def test_deterministic_bundles(self, kind):
        config = cfg(kind, seed=99)
        a, b = run_experiment(config), run_experiment(config)
        assert a.summary_json() == b.summary_json()
        assert set(a.tables) == set(b.tables)
        for name in a.tables:
            assert a.table_csv(name) == b.table_csv(name)
        assert a.figures == b.figures

    def test_syndrome_table_ideal_matches_theory(self):
        bundle = run_experiment(cfg("syndrome-table"))
        assert bundle.summary["all_match"] is True
        assert bundle.summary["patterns_checked"] == 48
        for vals in bundle.summary["no_error_syndromes"].values():
            assert vals == [1.0, 1.0, 1.0]

    def test_syndrome_signs_survive_noise(self):
        # magnitudes shrink with the visibility but every sign persists
        bundle = run_experiment(cfg("syndrome-table", noise={"visibility": 0.7}))
        assert bundle.summary["all_match"] is True
        rows = bundle.tables["syndrome_table"][1:]
        magnitudes = [abs(v) for row in rows for v in row[3:6]]
        assert max(magnitudes) < 1.0
        assert min(magnitudes) > 0.5

    def test_syndrome_table_single_error_restriction(self):
        bundle = run_experiment(cfg("syndrome-table", error="Z@1"))
        rows = bundle.tables["syndrome_table"][1:]
        assert len(rows) == 4  # one probe each
        assert all(r[0] == "Z@1" and r[6:9] == (-1, -1, 1) for r in rows)

    def test_loss_recovery_ideal_is_identity_channel(self):
        for lost in (1, 4):
            bundle = run_experiment(cfg("loss-recovery", lost=lost))
            assert bundle.summary["average_fidelity"] == pytest.approx(1.0, abs=1e-9)
            chi_re = np.array(bundle.summary["chi"]["matrix_re"])
            expected = np.zeros((4, 4))
            expected[0, 0] = 1
            np.testing.assert_allclose(chi_re, expected, atol=1e-8)
            assert bundle.summary["chi"]["process_fidelity"] == pytest.approx(1.0, abs=1e-8)

    def test_encode_channel_ideal_is_hadamard(self):
        bundle = run_experiment(cfg("encode-channel"))
        assert bundle.summary["chi"]["process_fidelity"] == pytest.approx(1.0, abs=1e-8)
        chi_re = np.array(bundle.summary["chi"]["matrix_re"])
        assert chi_re[1, 1] == pytest.approx(0.5, abs=1e-8)
        assert chi_re[3, 3] == pytest.approx(0.5, abs=1e-8)

    def test_resource_witness_at_calibrated_visibility(self):
        bundle = run_experiment(cfg("resource-witness",
                                    noise={"visibility": 0.7653}, seed=5))
        block = bundle.summary["resource5"]
        assert block["exact"] < 0
        assert block["fidelity_lower_bound"] <= bundle.summary["state_fidelity"] + 1e-9
        assert abs(block["mc_mean"] - block["exact"]) < 0.2

    def test_noise_sweep_calibration(self):
        bundle = run_experiment(cfg("noise-sweep"))
        v_star = bundle.summary["calibrated_visibility"]
        assert abs(bundle.summary["fidelity_at_calibration"] - 0.78) < 1e-6
        assert 0.7 < v_star < 0.85
        assert bundle.summary["all_witnesses_negative"] is True

    @pytest.mark.parametrize("kind", ["resource-witness", "encode-tomography",
                                      "encode-channel", "loss-recovery",
                                      "syndrome-table", "noise-sweep"])
    def test_default_parameters_run_quickly(self, kind):
        import time

        t0 = time.perf_counter()
        run_experiment(ExperimentConfig.from_dict({"kind": kind}))
        assert time.perf_counter() - t0 < 10.0

    def test_bundle_write_files(self, tmp_path):
        config = cfg("syndrome-table", formats=["json", "csv", "svg"])
        bundle = run_experiment(config)
        written = bundle.write(tmp_path)
        names = {p.split("/")[-1] for p in written}
        assert "summary.json" in names and "syndrome_table.csv" in names
        again = run_experiment(config)
        rewritten = again.write(tmp_path)
        assert written == rewritten
        assert (tmp_path / "summary.json").read_text() == again.summary_json()


class TestCli:
    def test_syndrome_single_case(self, capsys):
        code = cli_main(["syndrome", "--error", "Z@1", "--probe", "+", "--ideal"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "(-1, -1, +1)"

    def test_encode_ideal_probe0(self, capsys):
        code = cli_main(["encode", "--probe", "0", "--ideal", "--trials", "100"])
        assert code == 0
        out = capsys.readouterr().out
        assert "probe 0: logical fidelity = 1.000000" in out

    def test_unknown_subcommand_exits_1(self, capsys):
        assert cli_main(["frobnicate"]) == 1

    def test_bad_error_spec_exits_1(self, capsys):
        assert cli_main(["syndrome", "--error", "W@9", "--probe", "+"]) == 1

    def test_no_args_exits_1(self):
        assert cli_main([]) == 1

    def test_missing_config_file_exits_1(self, capsys):
        assert cli_main(["witness", "--config", "/no/such/file.json"]) == 1

    def test_bad_config_field_exits_1(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"lost": 3}))
        assert cli_main(["loss", "--config", str(path)]) == 1
        assert "lost" in capsys.readouterr().err

    def test_build_resource_selfcheck(self, capsys):
        assert cli_main(["build-resource"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["overlap_graph_state"] > 1 - 1e-9
        assert report["overlap_explicit_expansion"] > 1 - 1e-9

    def test_witness_writes_bundle(self, tmp_path, capsys):
        code = cli_main(["witness", "--ideal", "--trials", "100",
                         "--seed", "4", "--out", str(tmp_path),
                         "--format", "json", "--format", "csv"])
        assert code == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["summary"]["resource5"]["exact"] == pytest.approx(-1.0, abs=1e-9)
        assert (tmp_path / "counts.csv").exists()

    def test_analyze_counts_roundtrip(self, tmp_path, capsys):
        code = cli_main(["witness", "--visibility", "0.8", "--trials", "100",
                         "--seed", "4", "--counts", "5000",
                         "--out", str(tmp_path), "--format", "csv"])
        assert code == 0
        capsys.readouterr()
        counts_csv = tmp_path / "counts.csv"
        code = cli_main(["analyze-counts", "--in", str(counts_csv),
                         "--witness", "resource5", "--trials", "150"])
        assert code == 0
        out = capsys.readouterr().out
        assert "witness resource5: value =" in out

    def test_config_file_plus_flag_override(self, tmp_path, capsys):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"noise": {"visibility": 0.9}, "seed": 1,
                                    "trials": 100}))
        code = cli_main(["syndrome", "--config", str(path), "--seed", "2",
                         "--out", str(tmp_path)])
        assert code == 0
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["provenance"]["seed"] == 2
        assert summary["provenance"]["config"]["noise"]["visibility"] == 0.9
