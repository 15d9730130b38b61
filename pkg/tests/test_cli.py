import os

import pytest

from simma import cli, config as cfgmod, csvio

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "configs")


def conf(name):
    return os.path.join(CONFIGS, name)


def text_columns(path):
    meta, header, rows = csvio.read(path)
    return meta, {h: [r[i] for r in rows] for i, h in enumerate(header)}


@pytest.mark.parametrize("name, code", [
    ("fractional_tempered.toml", 0), ("fractional_stable.toml", 1),
    ("step_compound_poisson.toml", 0), ("step_stable.toml", 0), ("supou_stable.toml", 0),
])
def test_check_exit_codes(tmp_path, name, code):
    assert cli.main(["check", "--config", conf(name), "--out", str(tmp_path), "--quiet"]) == code
    meta, cols = text_columns(tmp_path / "report.csv")
    assert cfgmod.parse_echo(meta[0]) == cfgmod.load(conf(name))
    assert {"verdict", "basis", "reason"} <= set(cols)


def test_check_to_stdout(capsys):
    assert cli.main(["check", "--config", conf("fractional_stable.toml"), "--quiet"]) == 1
    out = capsys.readouterr().out
    assert out.startswith(cfgmod.ECHO_PREFIX) and "NotSemimartingale" in out


def test_simulate_writes_paths_and_ensembles(tmp_path):
    assert cli.main(["simulate", "--config", conf("step_stable.toml"), "--out", str(tmp_path),
                     "--paths", "2", "--grid", "65", "--seed", "4", "--quiet"]) == 0
    assert sorted(os.listdir(tmp_path)) == ["ensemble_00000.csv", "ensemble_00001.csv",
                                           "path_00000.csv", "path_00001.csv"]
    meta, cols = csvio.read_columns(tmp_path / "path_00001.csv")
    assert "# seed: 4" in meta and "# path: 1" in meta
    assert cfgmod.parse_echo(meta[0]).simulation.n_grid == 65
    assert len(cols["t"]) == 65
    x, m, a = cols["x"], cols["m"], cols["a"]
    assert all(xi == x[0] + mi + ai for xi, mi, ai in zip(x, m, a))


def test_table_and_empty_sweep(tmp_path):
    assert cli.main(["table", "--config", conf("table_stable.toml"), "--out", str(tmp_path), "--quiet"]) == 0
    _, cols = text_columns(tmp_path / "table.csv")
    assert len(cols["verdict"]) == 24 and set(cols["verdict"]) == {"NotSemimartingale"}
    empty = tmp_path / "empty.toml"
    empty.write_text('[driver]\nfamily="stable"\nalpha=1.5\n[kernel]\nfamily="fractional"\ngamma=0.3\n'
                     '[sweep]\nalpha=[]\n')
    assert cli.main(["table", "--config", str(empty), "--out", str(tmp_path / "e"), "--quiet"]) == 0
    text = (tmp_path / "e" / "table.csv").read_text().splitlines()
    assert text[-1].split(",") == cli.TABLE_COLUMNS


def test_stats_from_input(tmp_path):
    cli.main(["simulate", "--config", conf("step_stable.toml"), "--out", str(tmp_path), "--paths", "1", "--quiet"])
    out = tmp_path / "s"
    assert cli.main(["stats", "--input", str(tmp_path / "path_00000.csv"), "--out", str(out), "--quiet"]) == 0
    _, cols = text_columns(out / "stats.csv")
    assert "verdict_fv_a" in cols["statistic"]


def test_demo(tmp_path):
    assert cli.main(["demo", "--out", str(tmp_path), "--quiet"]) == 0
    assert "conditional_mean" in (tmp_path / "demo.csv").read_text()


def test_error_exit_codes(tmp_path):
    assert cli.main(["nope"]) == 64
    assert cli.main(["check"]) == 64
    assert cli.main(["stats"]) == 64
    assert cli.main(["stats", "--input", str(tmp_path / "missing.csv")]) == 66
    assert cli.main(["check", "--config", str(tmp_path / "missing.toml")]) == 66
    bad = tmp_path / "bad.toml"
    bad.write_text('[driver]\nfamily="stable"\nalpha=2.5\n[kernel]\nfamily="step"\n')
    assert cli.main(["check", "--config", str(bad)]) == 65
    bad.write_text('[driver]\nfamily="stable"\nalpha=1.5\nfoo=1\n[kernel]\nfamily="step"\n')
    assert cli.main(["check", "--config", str(bad)]) == 64
    bad.write_text('[driver]\nfamily="stable"\nalpha=1.5\ngaussian_var=1.0\n[kernel]\nfamily="step"\n')
    assert cli.main(["simulate", "--config", str(bad), "--quiet"]) == 65
    assert cli.main(["simulate", "--config", conf("step_stable.toml"), "--paths", "0"]) == 64
