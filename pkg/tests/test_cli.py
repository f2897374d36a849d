import subprocess
import sys

from amoebot import io as aio
from amoebot.cli import main
from amoebot.dynamics import hexagon


def test_run_writes_outputs(tmp_path, capsys):
    out = tmp_path / "runs"
    code = main(["run", "--initial", "hexagon:2", "--iterations", "20000", "--record_interval",
                 "1000", "--trials", "3", "--seed", "10", "--output_dir", str(out),
                 "--snapshot_interval", "10000", "--workers", "1"])
    assert code == 0
    assert sorted(p.name for p in out.glob("trial_*.csv")) == [f"trial_00{k}.csv" for k in range(3)]
    assert (out / "trial_001_t20000.snap").exists()
    assert "lambda = 4.0" in (out / "config.txt").read_text()
    assert "success_rate_+y" in capsys.readouterr().out

    code = main(["msd", *map(str, sorted(out.glob("trial_*.csv"))), "--output",
                 str(tmp_path / "msd.csv")])
    assert code == 0
    assert "gamma=" in capsys.readouterr().out

    code = main(["render", str(out / "trial_000_t0.snap"), "--ascii"])
    assert code == 0
    assert capsys.readouterr().out.count("*") == 5


def test_parallel_matches_serial(tmp_path):
    args = ["run", "--initial", "line:8", "--iterations", "5000", "--record_interval", "500",
            "--trials", "2"]
    main(args + ["--output_dir", str(tmp_path / "a"), "--workers", "1"])
    main(args + ["--output_dir", str(tmp_path / "b"), "--workers", "2"])
    for k in range(2):
        name = f"trial_00{k}.csv"
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("lambda = 0\n")
    assert main(["run", "--config", str(cfg), "--output_dir", str(tmp_path)]) == 2
    assert "lambda" in capsys.readouterr().err
    assert main(["run", "--kernel", "bogus", "--output_dir", str(tmp_path)]) == 2


def test_oracle_and_render_svg(tmp_path, capsys):
    assert main(["oracle", "--n", "2"]) == 0
    assert "kernel half_valid" in capsys.readouterr().out
    snap = tmp_path / "h.snap"
    aio.write_snapshot(snap, hexagon(1))
    assert main(["render", str(snap), "--output", str(tmp_path / "h.svg")]) == 0
    assert (tmp_path / "h.svg").read_text().startswith("<svg")


def test_sweep(tmp_path, capsys):
    code = main(["sweep", "--initial", "hexagon:1", "--iterations", "2000", "--record_interval",
                 "100", "--trials", "2", "--lambdas", "2", "4", "--dim-probs", "1/4",
                 "--workers", "1"])
    assert code == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0].startswith("lambda") and len(rows) == 3


def test_verify_exit_codes():
    ok = subprocess.run([sys.executable, "-m", "amoebot.cli", "verify", "--only", "1", "3", "9"],
                        capture_output=True, text=True)
    assert ok.returncode == 0, ok.stdout + ok.stderr
    assert ok.stdout.count("[PASS]") == 3


def test_verify_failure_exit_code(monkeypatch, capsys):
    from amoebot import verify

    bad = verify.CriterionResult(0, "always fails", False, "forced", 0.0)
    monkeypatch.setattr(verify, "run_all", lambda skip_scale=False, only=None: [bad])
    assert main(["verify"]) == 1
    assert "[FAIL]" in capsys.readouterr().out
