import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from blochwave import cli
from blochwave.core import ConfigError
from blochwave.io import config_hash, read_csv, to_jsonable, write_csv, write_json

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def _run(tmp_path, *argv):
    return cli.run([argv[0], "--out-dir", str(tmp_path), *argv[1:]])


def test_config_hash_is_canonical():
    assert config_hash({"a": 1, "b": [1.0, 2]}) == config_hash({"b": [1.0, 2], "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_to_jsonable_nonfinite_and_numpy():
    out = to_jsonable({"x": np.float64("inf"), "y": np.arange(2), "z": (np.int64(3), complex(1, 2))})
    assert out == {"x": "inf", "y": [0, 1], "z": [3, {"re": 1.0, "im": 2.0}]}
    json.dumps(out)


def test_csv_roundtrip_with_header(tmp_path):
    path = write_csv(tmp_path / "t.csv", {"F0": "V/Å", "rate": "1/fs"}, [[0.1, 2.0], [0.2, 3.5]], "abc",
                     comment="two rows")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# units: F0 [V/Å], rate [1/fs]"
    assert lines[1] == "# config_sha256: abc"
    names, data = read_csv(path)
    assert names == ["F0", "rate"] and np.array_equal(data, [[0.1, 2.0], [0.2, 3.5]])
    with pytest.raises(ValueError):
        write_csv(tmp_path / "bad.csv", {"a": ""}, [[1.0, 2.0]], "abc")


def test_atomic_write_leaves_no_temporaries(tmp_path):
    write_json(tmp_path / "x.json", {"a": 1})
    write_json(tmp_path / "x.json", {"a": 2})
    assert [p.name for p in tmp_path.iterdir()] == ["x.json"]
    assert json.loads((tmp_path / "x.json").read_text())["a"] == 2


def test_atomic_write_cleans_up_on_failure(tmp_path):
    class Boom:
        pass

    with pytest.raises(TypeError):
        write_json(tmp_path / "y.json", {"a": Boom()})
    assert list(tmp_path.iterdir()) == []


def test_materials_row(tmp_path, capsys):
    assert _run(tmp_path, "materials", "--name", "GaAs") == 0
    row = json.loads(capsys.readouterr().out)
    assert (row["Eg"], row["a"], row["xi_max"]) == (1.43, 5.65, 3.42)
    assert "config_sha256" in json.loads((tmp_path / "materials.json").read_text())


def test_regimes_sio2_example(tmp_path, capsys):
    assert _run(tmp_path, "regimes", "--material", "SiO2", "--lambda0-nm", "750", "--F0", "1.0") == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["gamma_DL"] == pytest.approx(2.9641, abs=1e-4)


def test_negative_fwhm_exits_2_without_artifacts(tmp_path):
    code = _run(tmp_path, "rabi", "--photon-energy", "1.5", "--F0", "0.1", "--envelope", "sine-square",
                "--fwhm", "-5")
    assert code == 2
    assert not tmp_path.exists() or list(tmp_path.iterdir()) == []


def test_unknown_subcommand_and_unknown_key(tmp_path):
    assert cli.run(["nonsense"]) == 2
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"subcommand": "materials", "bogus": 1}))
    assert cli.run(["materials", "--config", str(cfg), "--out-dir", str(tmp_path / "o")]) == 2
    assert not (tmp_path / "o").exists()


def test_unknown_material_exit_2(tmp_path, capsys):
    assert _run(tmp_path, "materials", "--name", "unobtainium") == 2
    assert "available" in capsys.readouterr().err


def test_config_for_other_subcommand_rejected(tmp_path):
    assert cli.run(["hhg", "--config", str(CONFIGS / "rabi_weak_pulse.json"), "--out-dir", str(tmp_path)]) == 2


def test_numerical_failure_exit_3(tmp_path, capsys):
    # the Chern model closes its gap at u = -2
    assert _run(tmp_path, "berry", "--set", "u=-2", "--set", "n=40") == 3
    assert "numerical failure" in capsys.readouterr().err
    assert not tmp_path.exists() or list(tmp_path.iterdir()) == []


def test_identical_configs_give_identical_bytes(tmp_path):
    cfg = str(CONFIGS / "rabi_weak_pulse.json")
    assert cli.run(["rabi", "--config", cfg, "--out-dir", str(tmp_path / "a")]) == 0
    assert cli.run(["rabi", "--config", cfg, "--out-dir", str(tmp_path / "b")]) == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names and names == sorted(p.name for p in (tmp_path / "b").iterdir())
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()


def test_same_out_dir_rerun_is_bit_identical(tmp_path):
    cfg = str(CONFIGS / "rabi_weak_pulse.json")
    cli.run(["rabi", "--config", cfg, "--out-dir", str(tmp_path)])
    first = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    cli.run(["rabi", "--config", cfg, "--out-dir", str(tmp_path)])
    assert first == {p.name: p.read_bytes() for p in tmp_path.iterdir()}


def test_csv_artifact_header_carries_hash(tmp_path):
    assert _run(tmp_path, "regimes", "--material", "SiO2", "--lambda0-nm", "750", "--F0", "1.0",
                "--config", str(CONFIGS / "ponderomotive_sweep.json")) == 0
    csv = next(tmp_path.glob("*.csv"))
    head = csv.read_text(encoding="utf-8").splitlines()[:2]
    assert head[0].startswith("# units: F0 [V/Å]")
    sha = json.loads(next(tmp_path.glob("*.json")).read_text())["config_sha256"]
    assert head[1] == f"# config_sha256: {sha}"


def test_threads_env_fallback(monkeypatch):
    args = cli.build_parser().parse_args(["materials"])
    monkeypatch.setenv("BLOCHWAVE_THREADS", "3")
    assert cli._threads(args) == 3
    monkeypatch.setenv("BLOCHWAVE_THREADS", "x")
    with pytest.raises(ConfigError):
        cli._threads(args)
    args = cli.build_parser().parse_args(["materials", "--threads", "2"])
    assert cli._threads(args) == 2


def test_set_requires_key_value(tmp_path):
    assert _run(tmp_path, "berry", "--set", "u") == 2


@pytest.mark.parametrize("cfg", sorted(p.name for p in CONFIGS.glob("*.json") if "keldysh" not in p.name))
def test_recipe_configs_validate_and_run(cfg, tmp_path):
    sub = json.loads((CONFIGS / cfg).read_text())["subcommand"]
    assert cli.run([sub, "--config", str(CONFIGS / cfg), "--out-dir", str(tmp_path)]) == 0
    assert any(tmp_path.iterdir())


def test_all_configs_pass_schema():
    for path in CONFIGS.glob("*.json"):
        cli.validate(cli.load_config(path))


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "blochwave", "materials", "--name", "SiO2", "--out-dir",
                          str(tmp_path)], capture_output=True, text=True, env={**os.environ})
    assert out.returncode == 0
    assert json.loads(out.stdout)["Eg"] == 9.0
