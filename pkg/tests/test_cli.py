import subprocess
import sys

from bowen_lab.experiments_cli import EXIT_PASS, EXIT_USAGE, main
from bowen_lab.metric_core import random_system, save_system
from bowen_lab.transforms import diameter


def run(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = main(list(args) + ["--out", str(out)])
    return code, out.read_text() if out.exists() else ""


def test_warmup_t2(tmp_path):
    code, text = run(["warmup", "--t", "2"], tmp_path)
    assert code == EXIT_PASS
    assert text.startswith("# bowen-lab csv v1 kind=warmup\n")
    row6 = [ln for ln in text.splitlines() if ln.startswith("2,6,")][0].split(",")
    assert row6[3] == row6[4] == "24"


def test_empty_horizons_is_usage_error(tmp_path):
    code, _ = run(["warmup", "--t", "2", "--horizons", ""], tmp_path)
    assert code == EXIT_USAGE


def test_unknown_subcommand():
    assert main(["frobnicate"]) == EXIT_USAGE


def test_rates_strict(tmp_path, capsys):
    code, text = run(["rates"], tmp_path)
    assert code == EXIT_PASS
    assert "final,9/10,22/25" in text
    assert "strict" in capsys.readouterr().err


def test_reruns_byte_identical(tmp_path):
    _, a = run(["transform", "amplify", "--seed", "3"], tmp_path, "a.csv")
    _, b = run(["transform", "amplify", "--seed", "3"], tmp_path, "b.csv")
    assert a == b and a


def test_parallel_matches_sequential(tmp_path):
    _, a = run(["transform", "amplify"], tmp_path, "a.csv")
    _, b = run(["transform", "amplify", "--parallel"], tmp_path, "b.csv")
    assert a == b


def test_transform_config_file(tmp_path):
    cfg = tmp_path / "sub.cfg"
    cfg.write_text("shifts=golden\nhorizons=1,2\neps=1/2\n")
    code, text = run(["transform", "subshift", "--params", str(cfg)], tmp_path)
    assert code == EXIT_PASS and text.count("golden") == 2
    cfg.write_text("shifts=nonsense\n")
    assert run(["transform", "subshift", "--params", str(cfg)], tmp_path)[0] == EXIT_USAGE


def test_duplicate_from_files(tmp_path):
    y = random_system(4, 2)
    save_system(y, tmp_path / "y.txt")
    save_system(y, tmp_path / "x.txt")
    (tmp_path / "f.txt").write_text("".join(f"f {i} {i}\n" for i in range(4)))
    (tmp_path / "dup.cfg").write_text(f"x={tmp_path / 'x.txt'}\ny={tmp_path / 'y.txt'}\n"
                                      f"f={tmp_path / 'f.txt'}\nalpha={diameter(y) * 3 / 4}\nhorizons=1,2\n")
    code, text = run(["transform", "duplicate", "--params", str(tmp_path / "dup.cfg")], tmp_path)
    assert code == EXIT_PASS and "file" in text


def test_solve(tmp_path, capsys):
    save_system(random_system(6, 1), tmp_path / "s.txt")
    code = main(["solve", "--system", str(tmp_path / "s.txt"), "--which", "sep", "--eps", "3/4"])
    assert code == EXIT_PASS
    assert capsys.readouterr().out.splitlines()[0].isdigit()


def test_ec_build_ry(tmp_path):
    code, text = run(["ec", "build-ry", "--depth", "1"], tmp_path)
    assert code == EXIT_PASS and "PY1" in text


def test_params_check_bad_file(tmp_path):
    (tmp_path / "p.txt").write_text("level.0.C=3\n")
    assert run(["params-check", "--params", str(tmp_path / "p.txt")], tmp_path)[0] == EXIT_USAGE


def test_console_module_entry():
    r = subprocess.run([sys.executable, "-m", "bowen_lab", "transform", "subshift"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("# bowen-lab csv v1 kind=subshift")
