import pytest

from intdpid import cli
from intdpid.config import ConfigError, dumps, loads
from intdpid.scenario import PRESETS, preset


@pytest.fixture
def short_config(tmp_path):
    text = dumps(preset("case2_intd", horizon=0.05))
    path = tmp_path / "short.ini"
    path.write_text(text)
    return path


@pytest.mark.parametrize("name", list(PRESETS))
def test_config_round_trip(name):
    assert loads(dumps(PRESETS[name])) == PRESETS[name]


def test_show_preset(capsys):
    assert cli.main(["show-preset", "case1_han"]) == 0
    out = capsys.readouterr().out
    assert loads(out) == PRESETS["case1_han"]
    assert cli.main(["show-preset"]) == 0
    assert "case2_intd" in capsys.readouterr().out


def test_run_writes_bundle(short_config, tmp_path, capsys):
    out = tmp_path / "out"
    assert cli.main(["run", "--config", str(short_config), "-o", str(out)]) == 0
    printed = capsys.readouterr().out.split()
    assert printed[::2] == ["IAE", "ITAE", "ITSE", "ISU", "IAU"]
    lines = (out / "short_trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,r,y_clean,y_measured,u,z1,z2,x1,x2"
    assert len(lines) == 52
    metrics = (out / "short_metrics.csv").read_text()
    assert "# config_hash:" in metrics and "# seed: 0" in metrics and "Philox" in metrics
    assert "IAE," in metrics


def test_run_is_byte_identical(short_config, tmp_path):
    for d in ("a", "b"):
        assert cli.main(["run", str(short_config), "-o", str(tmp_path / d)]) == 0
    for f in ("short_trajectory.csv", "short_metrics.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_precision_env(short_config, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.PRECISION_ENV, "4")
    assert cli.main(["run", str(short_config), "-o", str(tmp_path)]) == 0
    row = (tmp_path / "short_trajectory.csv").read_text().splitlines()[10].split(",")
    assert all(len(v.lstrip("-").replace(".", "").split("e")[0].lstrip("0")) <= 4 for v in row)
    monkeypatch.setenv(cli.PRECISION_ENV, "many")
    assert cli.main(["run", str(short_config), "-o", str(tmp_path)]) == 1


def test_unknown_preset(capsys, tmp_path):
    assert cli.main(["run", "--preset", "case9", "-o", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "case1_intd" in err and "case2_han" in err


def test_invalid_config_names_field(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text(dumps(PRESETS["case1_intd"]).replace("alpha = 0.979", "alpha = 1.5"))
    assert cli.main(["run", str(bad), "-o", str(tmp_path)]) == 1
    assert "alpha" in capsys.readouterr().err
    bad.write_text(dumps(PRESETS["case1_intd"]).replace("horizon = 10.0", "horizon = soon"))
    assert cli.main(["run", str(bad), "-o", str(tmp_path)]) == 1
    assert "horizon" in capsys.readouterr().err
    bad.write_text(dumps(PRESETS["case1_intd"]) + "\n[intd2]\nx = 1\n")
    assert cli.main(["run", str(bad), "-o", str(tmp_path)]) == 1
    assert cli.main(["run", str(tmp_path / "missing.ini"), "-o", str(tmp_path)]) == 1


@pytest.mark.parametrize("text,field", [
    ("[scenario]\ntd_kind = intd\n", "intd_params"),
    ("[scenario]\ntd_kind = han\n[han]\nR = 11.6\ndelta = 0.0005\n[nlpid]\np_gain = 1\n", "p_alpha"),
    ("[scenario]\ntd_kind = han\n[han]\nR = 11.6\ndelta = 0.0005\nspeed = 3\n", "speed"),
])
def test_loads_errors(text, field):
    with pytest.raises(ConfigError, match=field):
        loads(text)


def test_simulation_failure_exit_code(tmp_path, capsys):
    text = dumps(preset("case1_intd", horizon=0.05)).replace("min_dt = 1e-12", "min_dt = 0.001")
    text = text.replace("rel_tol = 1e-06", "rel_tol = 1e-14").replace("abs_tol = 1e-09", "abs_tol = 1e-16")
    path = tmp_path / "fail.ini"
    path.write_text(text)
    assert cli.main(["run", str(path), "-o", str(tmp_path)]) == 2
    assert "StepUnderflow" in capsys.readouterr().err


def test_compare_identical(short_config, tmp_path, capsys):
    assert cli.main(["compare", str(short_config), str(short_config), "-o", str(tmp_path)]) == 0
    table = capsys.readouterr().out.splitlines()
    assert table[0].split()[:2] == ["Performance", "Index"]
    for row in table[1:]:
        assert row.split()[-1] == "tie"
        assert float(row.split()[-2]) == 0


def test_analyze(tmp_path, capsys):
    assert cli.main(["analyze", "case1_intd", "--omega-min", "0.01", "--omega-max", "1e5", "-o", str(tmp_path)]) == 0
    report = dict(kv.split("=") for kv in capsys.readouterr().out.split() if "=" in kv)
    assert abs(float(report["low_slope"]) - 20) < 0.5
    assert abs(float(report["high_slope"]) + 20) < 0.5
    assert float(report["omega_n"]) == pytest.approx(21.6303, rel=1e-5)
    lines = (tmp_path / "case1_intd_bode.csv").read_text().splitlines()
    assert lines[0] == "omega,magnitude_db" and len(lines) == 401


def test_analyze_equal_beta_gamma(tmp_path, capsys):
    path = tmp_path / "eq.ini"
    path.write_text(dumps(PRESETS["case1_intd"]).replace("gamma = 8.3864", "gamma = 5.5872"))
    assert cli.main(["analyze", str(path), "-o", str(tmp_path)]) == 0
    assert "omega_n=26.5005 " in capsys.readouterr().out


@pytest.mark.parametrize("args", [
    ["--points", "1"], ["--omega-min", "10", "--omega-max", "1"], ["--omega-min", "0"],
])
def test_analyze_bad_range(args, tmp_path):
    assert cli.main(["analyze", "case1_intd", *args, "-o", str(tmp_path)]) == 1


def test_analyze_needs_intd(tmp_path):
    assert cli.main(["analyze", "case1_han", "-o", str(tmp_path)]) == 1


def test_conflicting_sources(tmp_path):
    assert cli.main(["run", "case1_intd", "--preset", "case1_han", "-o", str(tmp_path)]) == 1
    assert cli.main(["run", "-o", str(tmp_path)]) == 1
