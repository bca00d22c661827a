import io

import pytest

from hetrank.cli import main
from hetrank.core import ConfigError, Mode, SystemConfig
from hetrank.experiments import (
    BOUND_COLUMNS,
    ESTIMATE_COLUMNS,
    SIMULATE_COLUMNS,
    ExperimentSpec,
    parse_users,
    read_config_file,
    read_csv,
    simulate_rows,
    write_csv,
)
from hetrank.scheduler import run_simulation

SHORT = "num_slots = 60\nwarmup_slots = 10\n"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_users():
    assert parse_users("1..4") == [1, 2, 3, 4]
    assert parse_users("1..3,8") == [1, 2, 3, 8]
    with pytest.raises(ConfigError):
        parse_users("a..b")


def test_config_file(tmp_path):
    p = tmp_path / "exp.cfg"
    p.write_text("# sweep\nnum_slots = 100  # short\nmode = hybrid\nseed = 0x10\n"
                 "users = 1..3\nlambdas = 50,100\nmodes = both\nrepetitions = 2\n")
    system, spec = read_config_file(p)
    assert system == {"num_slots": 100, "mode": Mode.HYBRID, "seed": 16}
    assert spec["users"] == [1, 2, 3] and spec["lambdas"] == [50.0, 100.0]
    assert spec["repetitions"] == 2 and len(spec["modes"]) == 2
    p.write_text("no_such_key = 1\n")
    with pytest.raises(ConfigError, match="no_such_key"):
        read_config_file(p)


def test_estimate_csv_round_trip_and_determinism(tmp_path, capsys):
    out = tmp_path / "est.csv"
    argv = ["estimate", "--users", "1..40", "--lambda", "50,100,500", "--out", str(out)]
    assert main(argv) == 0
    first = out.read_text()
    assert main(argv) == 0
    assert out.read_text() == first
    rows = read_csv(io.StringIO(first))
    assert first.splitlines()[0] == ",".join(ESTIMATE_COLUMNS)
    assert len(rows) == 120
    buf = io.StringIO()
    write_csv(rows, ESTIMATE_COLUMNS, buf)
    assert buf.getvalue() == first
    spot = {(r["lambda"], r["num_users"]): r["estimate"] for r in rows}
    assert spot[(500.0, 1)] == 500.0 and spot[(50.0, 20)] == 1000.0
    assert spot[(100.0, 32)] == pytest.approx(2195.2, rel=1e-9)


def test_bound_output(capsys):
    code, out, _ = run(["bound", "--users", "2,16,50"], capsys)
    assert code == 0
    assert out.splitlines() == [",".join(BOUND_COLUMNS), "2,960.0", "16,1600.0", "50,2560.0"]


def test_simulate_rows_sorted_and_parseable(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "short.cfg"
    cfg.write_text(SHORT)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["simulate", "--config", str(cfg), "--users", "1..3", "--lambda", "500,50",
            "--mode", "both", "--reps", "2", "--seed", "4"]
    monkeypatch.setenv("HETRANK_THREADS", "1")
    assert main(base + ["--out", str(out1)]) == 0
    # pretend to have spare cores so the process pool path runs
    monkeypatch.setattr("hetrank.experiments.os.cpu_count", lambda: 4)
    monkeypatch.setenv("HETRANK_THREADS", "3")
    assert main(base + ["--out", str(out2)]) == 0
    text = out1.read_text()
    assert text == out2.read_text()
    assert text.splitlines()[0] == ",".join(SIMULATE_COLUMNS)
    rows = read_csv(io.StringIO(text))
    assert len(rows) == 2 * 2 * 3 * 2
    keys = [(r["mode"], r["lambda"], r["num_users"], r["seed"]) for r in rows]
    assert keys == sorted(keys)
    assert {r["seed"] for r in rows} == {4, 5}
    buf = io.StringIO()
    write_csv(rows, SIMULATE_COLUMNS, buf)
    assert buf.getvalue() == text


def test_simulate_matches_library():
    base = SystemConfig.reference(num_slots=60, warmup_slots=10)
    spec = ExperimentSpec(base=base, users=[2], lambdas=[100.0], modes=[Mode.HYBRID])
    (row,) = simulate_rows(spec)
    m = run_simulation(base.with_(mode=Mode.HYBRID, traffic_rate=100.0), 2)
    assert row["aggregate_rate"] == m.aggregate_rate
    assert row["unused_fraction"] == m.unused_rb_fraction


def test_experiment_spec_validation():
    with pytest.raises(ConfigError):
        ExperimentSpec(users=[])
    with pytest.raises(ConfigError):
        ExperimentSpec(repetitions=0)


@pytest.mark.parametrize("argv", [
    ["simulate", "--mode", "digital"],
    ["estimate", "--users", "x"],
    ["bound", "--config", "/nonexistent/exp.cfg"],
    ["codec", "decode", "dci", "ffff"],
    ["codec", "decode", "bwp", "zz"],
    ["codec", "encode", "bwp", "start_rb=1", "num_rb=0", "tradcapuse=1", "num_trade_chains=1"],
    ["cost", "--catalog", "/nonexistent/catalog.csv"],
])
def test_config_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and "error" in err


def test_bad_config_value_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.cfg"
    p.write_text("se_hybrid = 9\n")
    code, _, err = run(["estimate", "--config", str(p)], capsys)
    assert code == 2 and "C_H" in err


def test_runtime_error_exit_3_reports_path(tmp_path, capsys):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(["bound", "--users", "1", "--out", str(target)], capsys)
    assert code == 3 and str(target) in err


def test_argparse_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_cost_command(capsys):
    code, out, _ = run(["cost"], capsys)
    assert code == 0 and "1802.84" in out and "3642.44" in out and "24 Gbps" in out


@pytest.mark.parametrize("kind,fields,hexed", [
    ("abcap", ["2:1:0x10"], "012110"),
    ("bwp", ["start_rb=20", "num_rb=20", "tradcapuse=0x10", "num_trade_chains=1"], "001400141001"),
    ("dci", ["mcs_digital=31", "port_width=6", "antenna_ports_digital=63"], "fdf8"),
])
def test_codec_encode_decode(kind, fields, hexed, capsys):
    code, out, _ = run(["codec", "encode", kind, *fields], capsys)
    assert code == 0 and out.strip() == hexed
    code, out, _ = run(["codec", "decode", kind, hexed], capsys)
    assert code == 0
    if kind == "bwp":
        assert "start_rb=20 num_rb=20" in out
    if kind == "dci":
        assert "port_width=6 antenna_ports_digital=63" in out
    if kind == "abcap":
        assert "options=[32ant/32bw]" in out
