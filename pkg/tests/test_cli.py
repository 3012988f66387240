import hashlib

import pytest
import yaml

from nkcoalition.cli import (
    ConfigFileError,
    SweepSpec,
    default_config_yaml,
    load_sweep_spec,
    main,
    run_sweep,
    spec_from_manifest,
)


def tiny_spec(**overrides):
    base = dict(
        cells=[[3, "concentrated"]],
        p_values=[0.2],
        tau_values=[10],
        rounds=3,
        t_max=15,
        master_seed=5,
    )
    base.update(overrides)
    return SweepSpec(**base)


class TestSweepSpec:
    def test_default_grid_expands_to_45_scenarios(self):
        configs = SweepSpec().scenario_configs()
        assert len(configs) == 45
        assert len({c.scenario_id for c in configs}) == 45

    def test_default_grid_matches_paper_parameters(self):
        spec = SweepSpec()
        assert spec.rounds == 1500
        assert spec.t_max == 200
        assert sorted(spec.p_values) == [0.0, 0.2, 0.5]
        assert sorted(spec.tau_values) == [0, 1, 10]
        assert sorted(tuple(c) for c in spec.cells) == [
            (3, "concentrated"), (3, "scattered"), (5, "concentrated"),
            (5, "scattered"), (11, "full"),
        ]

    def test_single_cell_grid(self):
        assert len(tiny_spec().scenario_configs()) == 1


class TestLoadSweepSpec:
    def test_yaml_round_trip(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text(default_config_yaml())
        spec = load_sweep_spec(path)
        assert spec == SweepSpec()

    def test_partial_override(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text("rounds: 10\nmaster_seed: 9\n")
        spec = load_sweep_spec(path)
        assert spec.rounds == 10
        assert spec.master_seed == 9
        assert spec.t_max == 200

    def test_unknown_field_named_in_error(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text("roundz: 10\n")
        with pytest.raises(ConfigFileError, match="roundz"):
            load_sweep_spec(path)

    def test_bad_type_named_in_error(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text("rounds: lots\n")
        with pytest.raises(ConfigFileError, match="rounds"):
            load_sweep_spec(path)

    def test_invalid_yaml_reported(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text("cells: [[3, concentrated]\n")
        with pytest.raises(ConfigFileError, match="invalid YAML"):
            load_sweep_spec(path)

    def test_empty_list_rejected(self, tmp_path):
        path = tmp_path / "cfg.yaml"
        path.write_text("p_values: []\n")
        with pytest.raises(ConfigFileError, match="p_values"):
            load_sweep_spec(path)


class TestRunSweep:
    def test_writes_all_outputs(self, tmp_path):
        spec = tiny_spec(cells=[[3, "concentrated"], [3, "scattered"]])
        out = tmp_path / "results"
        summary = run_sweep(spec, out, raw_dump=True, auction_log=True, log=lambda *_: None)
        lines = summary.read_text().splitlines()
        assert lines[0] == "scenario_id,K,structure,p,tau,D"
        assert len(lines) == 3
        assert lines[1].startswith("K3_concentrated_p0.2_tau10,3,concentrated,0.2,10,")
        series = (out / "series_K3_concentrated_p0.2_tau10.csv").read_text().splitlines()
        assert series[0] == "t,c_norm"
        assert len(series) == spec.t_max + 1
        raw = (out / "raw_K3_scattered_p0.2_tau10.csv").read_text().splitlines()
        assert len(raw) == spec.rounds * spec.t_max + 1
        auction = (out / "auction_log_K3_concentrated_p0.2_tau10.csv").read_text().splitlines()
        assert auction[0] == "round,t,area,winner_id,winning_bid,clearing_price"
        # tau=10, t_max=15: auctions at t in {1, 11} x 3 areas x 3 rounds
        assert len(auction) == 2 * 3 * spec.rounds + 1
        manifest = (out / "manifest.txt").read_text()
        assert f"master_seed: {spec.master_seed}" in manifest
        assert f"config_sha256: {spec.config_hash()}" in manifest

    def test_rerun_is_byte_identical(self, tmp_path):
        spec = tiny_spec()
        h = []
        for name in ("a", "b"):
            summary = run_sweep(spec, tmp_path / name, log=lambda *_: None)
            h.append(hashlib.sha256(summary.read_bytes()).hexdigest())
        assert h[0] == h[1]

    def test_parallel_matches_serial(self, tmp_path):
        spec = tiny_spec(cells=[[3, "concentrated"], [5, "scattered"]], p_values=[0.0, 0.5])
        serial = run_sweep(spec, tmp_path / "serial", workers=1, log=lambda *_: None)
        parallel = run_sweep(spec, tmp_path / "parallel", workers=2, log=lambda *_: None)
        assert serial.read_bytes() == parallel.read_bytes()

    def test_manifest_config_round_trip(self, tmp_path):
        spec = tiny_spec(cells=[[5, "concentrated"]], master_seed=31)
        first = run_sweep(spec, tmp_path / "first", log=lambda *_: None)
        recovered = spec_from_manifest(tmp_path / "first" / "manifest.txt")
        assert recovered == spec
        again = run_sweep(recovered, tmp_path / "again", log=lambda *_: None)
        assert first.read_bytes() == again.read_bytes()

    def test_summary_rows_carry_all_identifiers(self, tmp_path):
        spec = tiny_spec(p_values=[0.0, 0.2], tau_values=[0, 1])
        summary = run_sweep(spec, tmp_path / "out", log=lambda *_: None)
        rows = summary.read_text().splitlines()[1:]
        assert len(rows) == 4
        for row in rows:
            scenario_id, k, structure, p, tau, d = row.split(",")
            assert scenario_id == f"K{k}_{structure}_p{p}_tau{tau}"
            float(d)


class TestMain:
    def test_print_config(self, capsys):
        assert main(["print-config"]) == 0
        parsed = yaml.safe_load(capsys.readouterr().out)
        assert parsed["rounds"] == 1500

    def test_sweep_with_config_and_overrides(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text(
            "cells: [[3, concentrated]]\np_values: [0.2]\ntau_values: [0]\nrounds: 2\nt_max: 10\n"
        )
        out = tmp_path / "res"
        code = main(["sweep", "--config", str(cfg), "--out", str(out), "--seed", "3"])
        assert code == 0
        assert (out / "summary.csv").exists()
        assert "master_seed: 3" in (out / "manifest.txt").read_text()

    def test_invalid_config_exits_nonzero(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("cells: [[4, concentrated]]\n")
        assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        assert "error" in capsys.readouterr().err

    def test_unknown_field_exits_nonzero(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("bogus: 1\n")
        assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
        err = capsys.readouterr().err
        assert "bogus" in err

    def test_unwritable_output_exits_nonzero(self, tmp_path, capsys):
        target = tmp_path / "blocked"
        target.write_text("a file, not a directory")
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text(
            "cells: [[3, concentrated]]\np_values: [0]\ntau_values: [0]\nrounds: 1\nt_max: 2\n"
        )
        code = main(["sweep", "--config", str(cfg), "--out", str(target)])
        assert code == 1
        assert "cannot write" in capsys.readouterr().err
