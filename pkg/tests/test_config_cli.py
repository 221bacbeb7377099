"""Config parsing, round trips, run outputs, plot-data emission, CLI surface."""

import json

import numpy as np
import pytest

import qmemnet as qm
from qmemnet.cli import main as cli_main
from qmemnet.config import config_from_preset, format_config, parse_config
from qmemnet.runner import emit_plot_data, run_experiment

GOOD_CONFIG = """
# three identical memristors, triangular
[circuit]
memristors = 3
topology = triangular
cap_sigma_1 = 3.6 fF
cap_sigma_2 = 3.6 fF
cap_sigma_3 = 3.6 fF
l_self_1 = 0.2 uH
l_self_2 = 0.2 uH
l_self_3 = 0.2 uH
l_couple_1_2 = 2 uH
l_couple_2_3 = 2 uH
l_couple_1_3 = 2 uH
theta_1 = pi/4
theta_2 = pi/4
theta_3 = pi/4
varphi_1 = pi/2
varphi_2 = pi/2
varphi_3 = pi/2

[simulation]
t_end = 3 periods
store_every = 10

[analyses]
run = form_factor
"""


class TestParseConfig:
    def test_good_config(self):
        cfg = parse_config(GOOD_CONFIG)
        assert cfg.circuit.topology == "triangular"
        assert cfg.circuit.cap_sigma == (3.6e-15,) * 3
        assert cfg.circuit.l_couple[(0, 2)] == 2e-6
        assert cfg.truncation == 2
        assert cfg.analyses == ("form_factor",)
        en = qm.derive_energies(cfg.circuit)
        # auto dt and the 3-period horizon
        assert cfg.dt == pytest.approx((2 * np.pi / en.omega.max()) / 200, rel=1e-12)
        assert cfg.t_end == pytest.approx(3 * max(d.period() for d in cfg.circuit.drives), rel=1e-12)
        # auto drive: ramp at twice the site frequency, quadrature phase
        for j, d in enumerate(cfg.circuit.drives):
            assert d.waveform == "linear_ramp"
            assert d.drive_frequency == pytest.approx(2 * en.omega[j], rel=1e-12)
            assert d.phase_offset == pytest.approx(-np.pi / 2)

    def test_default_dt_when_omitted(self):
        cfg = parse_config(GOOD_CONFIG)
        en = qm.derive_energies(cfg.circuit)
        assert cfg.dt == pytest.approx((2 * np.pi / en.omega.max()) / 200, rel=1e-12)

    def test_topology_contradiction(self):
        text = GOOD_CONFIG.replace("topology = triangular", "topology = linear")
        with pytest.raises(qm.ConfigError) as err:
            parse_config(text)
        assert any("contradicts" in e for e in err.value.errors)

    def test_collects_all_errors(self):
        text = GOOD_CONFIG.replace("cap_sigma_1 = 3.6 fF", "cap_sigma_1 = -3.6 fF")
        text = text.replace("l_self_2 = 0.2 uH", "l_self_2 = 0.2 parsecs")
        text = text.replace("run = form_factor", "run = form_factor, astrology")
        with pytest.raises(qm.ConfigError) as err:
            parse_config(text)
        msgs = "\n".join(err.value.errors)
        assert "cap_sigma_1" in msgs
        assert "l_self_2" in msgs
        assert "astrology" in msgs
        assert len(err.value.errors) >= 3

    def test_unknown_key_rejected(self):
        with pytest.raises(qm.ConfigError, match="unknown key"):
            parse_config(GOOD_CONFIG + "\n[simulation]\nwarp_factor = 9\n")

    def test_unit_suffixes(self):
        text = GOOD_CONFIG.replace("cap_sigma_1 = 3.6 fF", "cap_sigma_1 = 3600 pF")
        # 3600 pF = 3.6 nF, just checking the multiplier wiring
        cfg = parse_config(text)
        assert cfg.circuit.cap_sigma[0] == pytest.approx(3600e-12)
        text = GOOD_CONFIG + "\n[drive]\nfrequency = 5.9 GHz\n"
        cfg = parse_config(text)
        assert cfg.circuit.drives[0].drive_frequency == pytest.approx(2 * np.pi * 5.9e9)
        text = GOOD_CONFIG.replace("t_end = 3 periods", "t_end = 2 ns\ndt = 0.001 ns")
        cfg = parse_config(text)
        assert cfg.t_end == pytest.approx(2e-9)
        assert cfg.dt == pytest.approx(1e-12)

    def test_angle_formats(self):
        text = GOOD_CONFIG.replace("theta_1 = pi/4", "theta_1 = 45 deg")
        cfg = parse_config(text)
        assert cfg.circuit.theta[0] == pytest.approx(np.pi / 4)

    def test_round_trip_custom(self):
        cfg = parse_config(GOOD_CONFIG)
        assert parse_config(format_config(cfg)) == cfg

    def test_round_trip_every_preset(self):
        for name in qm.PRESETS:
            cfg = config_from_preset(name)
            assert parse_config(format_config(cfg)) == cfg

    def test_two_memristor_config(self, tmp_path):
        text = """
[circuit]
memristors = 2
topology = linear
cap_sigma_1 = 3.6 fF
cap_sigma_2 = 2.6 fF
l_self_1 = 0.2 uH
l_self_2 = 0.2 uH
l_couple_1_2 = 2 uH

[simulation]
t_end = 2 periods

[analyses]
run = form_factor, pair_eof, negativity
"""
        cfg = parse_config(text)
        assert cfg.circuit.n_sites == 2
        assert cfg.circuit.theta == (np.pi / 4,) * 2  # documented default
        paths = run_experiment(cfg, output_dir=tmp_path)
        lines = paths["pair_eof"].read_text().splitlines()
        assert {l.split(",")[1] for l in lines[1:]} == {"concurrence_12", "eof_12"}
        neg_measures = {l.split(",")[1] for l in paths["negativity"].read_text().splitlines()[1:]}
        assert neg_measures == {"negativity_1_2", "negativity_2_1"}

    def test_monogamy_requires_three_sites(self, tmp_path):
        text = """
[circuit]
memristors = 2
topology = linear
cap_sigma_1 = 3.6 fF
cap_sigma_2 = 3.6 fF
l_self_1 = 0.2 uH
l_self_2 = 0.2 uH
l_couple_1_2 = 2 uH

[simulation]
t_end = 1 periods

[analyses]
run = monogamy
"""
        cfg = parse_config(text)
        with pytest.raises(ValueError, match="three-site"):
            run_experiment(cfg, output_dir=tmp_path)


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    cfg = parse_config(GOOD_CONFIG.replace("run = form_factor",
                                           "run = form_factor, pair_eof, negativity, moment_check"))
    paths = run_experiment(cfg, output_dir=out)
    return out, paths


class TestRunExperiment:
    def test_emits_expected_files(self, run_dir):
        _, paths = run_dir
        for key in ("manifest", "trajectory", "form_factor", "pair_eof",
                    "negativity", "moment_check"):
            assert key in paths and paths[key].exists()

    def test_manifest_contents(self, run_dir):
        _, paths = run_dir
        manifest = json.loads(paths["manifest"].read_text())
        assert manifest["version"] == qm.__version__
        assert manifest["modes"]["inductance"] == "bare"
        assert manifest["modes"]["coupling_sign"] == "sum"
        assert manifest["modes"]["eof_h"] == "squared"
        assert len(manifest["derived_energies"]["omega"]) == 3
        # the canonical config text in the manifest re-parses to the same run
        assert parse_config(manifest["config"]).circuit.cap_sigma == (3.6e-15,) * 3

    def test_form_factor_columns(self, run_dir):
        _, paths = run_dir
        header = paths["form_factor"].read_text().splitlines()[0]
        assert header == "site,loop_index,t_start,t_end,area,perimeter,form_factor"

    def test_identical_sites_identical_columns(self, run_dir):
        _, paths = run_dir
        rows = [r.split(",") for r in paths["form_factor"].read_text().splitlines()[1:]]
        by_site = {}
        for r in rows:
            by_site.setdefault(r[0], []).append(float(r[-1]))
        ffs = list(by_site.values())
        assert len(ffs) == 3
        for other in ffs[1:]:
            assert np.allclose(ffs[0], other, atol=1e-6)

    def test_moment_check_rel_err_small_for_uncoupled(self, tmp_path):
        # uncoupled at d = 2 matches the oracle exactly, so rel_err ~ integrator noise
        text = GOOD_CONFIG.replace("topology = triangular", "topology = linear")
        text = "\n".join(l for l in text.splitlines() if not l.startswith("l_couple"))
        text = text.replace("run = form_factor", "run = moment_check")
        cfg = parse_config(text)
        paths = run_experiment(cfg, output_dir=tmp_path)
        rows = paths["moment_check"].read_text().splitlines()[1:]
        max_err = max(float(r.split(",")[-1]) for r in rows)
        assert max_err <= 1e-10

    def test_entanglement_csv_long_format(self, run_dir):
        _, paths = run_dir
        lines = paths["pair_eof"].read_text().splitlines()
        assert lines[0] == "t,measure,value,estimated"
        measures = {l.split(",")[1] for l in lines[1:]}
        assert {"concurrence_12", "concurrence_13", "concurrence_23",
                "eof_12", "eof_13", "eof_23"} <= measures


class TestEmitPlotData:
    def test_form_factor_pivot(self, tmp_path):
        p = tmp_path / "form_factor.csv"
        p.write_text("site,loop_index,t_start,t_end,area,perimeter,form_factor\n"
                     "1,0,0,1.5,2,6,0.5\n1,1,1.5,3,2,6,0.6\n"
                     "2,0,0,1.4,2,6,0.51\n2,1,1.4,3,2,6,0.61\n"
                     "3,0,0,1.45,2,6,0.52\n")
        out = emit_plot_data(p)
        lines = out.splitlines()
        assert lines[0] == "# t_end F_1 F_2 F_3"
        assert lines[1].split() == ["1.5", "0.5", "0.51", "0.52"]
        assert lines[2].split() == ["3", "0.6", "0.61", "nan"]

    def test_long_format_pivot(self, tmp_path):
        p = tmp_path / "monogamy.csv"
        p.write_text("t,measure,value,estimated\n"
                     "0,eof_2_13,0.1,0\n0,monogamy_m2,0.01,0\n"
                     "1,eof_2_13,0.2,1\n1,monogamy_m2,0.02,1\n")
        out = emit_plot_data(p)
        lines = out.splitlines()
        assert lines[0] == "# t eof_2_13 monogamy_m2 estimated_flag"
        assert lines[1].split() == ["0", "0.1", "0.01", "0"]
        assert lines[2].split() == ["1", "0.2", "0.02", "1"]

    def test_header_only_for_empty_series(self, tmp_path):
        p = tmp_path / "form_factor.csv"
        p.write_text("site,loop_index,t_start,t_end,area,perimeter,form_factor\n")
        out = emit_plot_data(p)
        assert out == "# t_end\n"

    def test_wide_passthrough_and_byte_stability(self, tmp_path):
        p = tmp_path / "moment_check.csv"
        p.write_text("t,site,n_engine,n_oracle,phi_engine,phi_oracle,rel_err\n"
                     "0,1,0.1,0.1,0,0,0\n")
        assert emit_plot_data(p) == emit_plot_data(p)
        assert emit_plot_data(p).splitlines()[0].startswith("# t site")

    def test_missing_column_reported(self, tmp_path):
        p = tmp_path / "broken.csv"
        p.write_text("a,b\n1\n")
        with pytest.raises(ValueError, match="expected 2"):
            emit_plot_data(p)


class TestCLI:
    def test_list_presets(self, capsys):
        assert cli_main(["list-presets"]) == 0
        out = capsys.readouterr().out
        for name in qm.PRESETS:
            assert name in out

    def test_validate_good(self, tmp_path, capsys):
        p = tmp_path / "good.cfg"
        p.write_text(GOOD_CONFIG)
        assert cli_main(["validate", str(p)]) == 0
        assert "OK" in capsys.readouterr().out

    def test_validate_bad(self, tmp_path, capsys):
        p = tmp_path / "bad.cfg"
        p.write_text(GOOD_CONFIG.replace("topology = triangular", "topology = linear"))
        assert cli_main(["validate", str(p)]) == 1
        assert "error:" in capsys.readouterr().err

    def test_simulate_and_plotdata(self, tmp_path, capsys):
        p = tmp_path / "run.cfg"
        p.write_text(GOOD_CONFIG)
        assert cli_main(["simulate", str(p), "--out", str(tmp_path / "out")]) == 0
        assert (tmp_path / "out" / "form_factor.csv").exists()
        capsys.readouterr()
        assert cli_main(["plotdata", str(tmp_path / "out" / "form_factor.csv")]) == 0
        assert capsys.readouterr().out.startswith("# t_end")

    def test_preset_with_mode_override(self, tmp_path):
        assert cli_main(["preset", "fig2a", "--out", str(tmp_path / "p"),
                         "--analyses", "form_factor", "--mode", "inductance=loaded",
                         "--seed", "3"]) == 0
        manifest = json.loads((tmp_path / "p" / "manifest.json").read_text())
        assert manifest["modes"]["inductance"] == "loaded"
        assert manifest["seed"] == 3

    def test_mode_rejects_unknown(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text(GOOD_CONFIG)
        with pytest.raises(SystemExit, match="unknown key"):
            cli_main(["simulate", str(p), "--mode", "flux_capacitor=on"])
