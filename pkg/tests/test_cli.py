import csv
import json
from pathlib import Path

import numpy as np
import pytest

from config import Config
from src.cli import RunManifest, cache_spectrum, format_float, lookup_spectrum, to_csv, to_json
from src.cli.config_format import (body_snippet, body_spec_from, body_spec_from_snippet, experiment_config_from,
                                   load_experiment_config, parse_config, parse_inline)
from src.cli.dispatch import EXIT_OK, EXIT_USAGE, dispatch
from src.errors import ConfigError
from src.fourier import ray_spectrum
from src.geometry import BodySpec, Direction, make_body

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


@pytest.fixture
def settings(tmp_path, monkeypatch):
    monkeypatch.setenv("DISCLAB_HOME", str(tmp_path / "home"))
    monkeypatch.setenv("DISCLAB_THREADS", "2")
    monkeypatch.setenv("DISCLAB_PROGRESS", "0")
    return Config()


def test_parse_config_sections_and_dotted_keys():
    tree = parse_config("""
        # sweep
        name = demo
        sizes = 1, 2, 4, 8   # trailing comment
        policy.window = 4
        [body]
        kind = disk
        r = 0.25
        flag = true
    """)
    assert tree == {"name": "demo", "sizes": [1, 2, 4, 8], "policy": {"window": 4},
                    "body": {"kind": "disk", "r": 0.25, "flag": True}}


def test_parse_config_errors():
    with pytest.raises(ConfigError):
        parse_config("name = a\nname = b")
    with pytest.raises(ConfigError):
        parse_config("just words")
    with pytest.raises(ConfigError):
        parse_config("[]\nx = 1")
    with pytest.raises(ConfigError):
        parse_config("a = 1\na.b = 2")


def test_parse_config_brace_blocks():
    assert parse_config('body { kind = "c_sigma", sigma = 0.75 }') == {"body": {"kind": "c_sigma", "sigma": 0.75}}
    tree = parse_config("""
        name = demo
        body {
            kind = "custom_profile"
            support = 0.3; 0.3; 0.3; 0.3
        }
        sizes = 1, 2, 3, 4
    """)
    assert tree["body"] == {"kind": "custom_profile", "support": [0.3, 0.3, 0.3, 0.3]}
    assert tree["sizes"] == [1, 2, 3, 4]
    with pytest.raises(ConfigError):
        parse_config("body {\nkind = disk\n")
    with pytest.raises(ConfigError):
        parse_config("body { kind = disk")


@pytest.mark.parametrize("spec", [BodySpec(kind="c_sigma", sigma=0.75),
                                  BodySpec(kind="disk", r=0.2, center=(0.01, -0.02)),
                                  BodySpec(kind="custom_profile", support=(0.3, 0.31, 0.29, 0.3, 0.3))],
                         ids=["c_sigma", "shifted_disk", "custom_profile"])
def test_body_snippet_reads_back(spec):
    text = body_snippet(spec)
    assert text.startswith("body { kind = ")
    assert body_spec_from_snippet(text) == spec


def test_parse_inline_specs():
    assert parse_inline("kind=disk,r=0.25,center=0.1;0.2") == {"kind": "disk", "r": 0.25, "center": (0.1, 0.2)}
    spec = body_spec_from("kind=custom_profile,support=0.3;0.3;0.3;0.3")
    assert spec.support == (0.3, 0.3, 0.3, 0.3)
    with pytest.raises(ConfigError):
        parse_inline("kind=disk,r")


def test_experiment_config_from_tree():
    tree = parse_config("kind = envelope\nsizes = 8, 16, 32, 64\nexponent = irredistr\nsigma = 0.75\n"
                        "lam = 0.5:1\nbody = kind=disk,r=0.25\n")
    config = experiment_config_from(tree)
    assert (config.lam.lo, config.lam.hi) == (0.5, 1.0)
    assert config.body.kind == "disk"
    assert config.generators == ["grid_for_sigma"]


@pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.cfg")), ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    config = load_experiment_config(path)
    assert config.name
    assert len(config.sizes) >= 4


def test_output_keeps_seventeen_digits():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(float("nan")) == "NaN"
    assert format_float(float("-inf")) == "-Infinity"
    text = to_json({"x": np.float64(1 / 3), "flags": [True, None], "n": np.int64(7)})
    assert '"x": 0.33333333333333331' in text
    assert json.loads(text)["n"] == 7
    assert to_csv([{"a": 1.5, "b": None, "c": False}], ["a", "b", "c"]) == "a,b,c\n1.5,,false\n"


def test_body_info_command(settings, tmp_path, capsys):
    out = tmp_path / "run"
    assert dispatch(["body", "info", "--spec", "kind=disk,r=0.25", "--out", str(out)], settings) == EXIT_OK
    header, row = capsys.readouterr().out.splitlines()[:2]
    values = dict(zip(header.split(","), row.split(",")))
    assert float(values["area"]) == pytest.approx(np.pi / 16)
    manifest = RunManifest.load(out / "manifest.json")
    assert manifest.command[:2] == ["body", "info"]
    assert "body.csv" in manifest.outputs
    assert manifest.verify(out)


def test_body_info_reports_support_intervals(settings, tmp_path):
    out = tmp_path / "square"
    assert dispatch(["body", "info", "--spec", "kind=axis_square,side=0.5", "--out", str(out)], settings) == EXIT_OK
    with open(out / "body.csv", newline="") as handle:
        row = next(csv.DictReader(handle))
    columns = [f"{end}_{k}" for k in range(8) for end in "AB"]
    assert all(name in row for name in columns)
    assert float(row["A_0"]) == pytest.approx(-0.25)
    assert float(row["B_0"]) == pytest.approx(0.25)
    diagonal = 0.5 / np.sqrt(2.0)
    for k in (1, 3, 5, 7):
        assert float(row[f"A_{k}"]) == pytest.approx(-diagonal)
        assert float(row[f"B_{k}"]) == pytest.approx(diagonal)


def test_usage_errors(settings, capsys):
    assert dispatch([], settings) == EXIT_USAGE
    assert dispatch(["bogus"], settings) == EXIT_USAGE
    assert dispatch(["verify", "majorant"], settings) == EXIT_USAGE
    assert dispatch(["body", "info", "--spec", "kind=disk"], settings) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_equivalence_rejects_cornered_body(settings, tmp_path):
    argv = ["verify", "equivalence", "--body", "kind=axis_square,side=0.5", "--alpha", "1", "--out", str(tmp_path)]
    assert dispatch(argv, settings) == EXIT_USAGE


def test_cassels_on_grid(settings, tmp_path, capsys):
    out = tmp_path / "cassels"
    assert dispatch(["verify", "cassels", "--grid-shape", "4,4", "--out", str(out)], settings) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["check"] == "cassels" and report["pass"]
    assert report["r_omega"] == pytest.approx(16.0)
    assert RunManifest.load(out / "manifest.json").verify(out)


def test_cassels_random_runs_print_seed(settings, tmp_path, capsys):
    argv = ["verify", "cassels", "--runs", "3", "--n", "20", "--n-max", "40", "--out", str(tmp_path)]
    assert dispatch(argv, settings) == EXIT_OK
    captured = capsys.readouterr()
    assert "seed: " in captured.err
    assert json.loads(captured.out)["runs"] == 3


def test_disc_command_mc(settings, tmp_path, capsys):
    argv = ["disc", "--body", "kind=disk,r=0.25", "--points", "kind=grid,k=4,l=4", "--engine", "mc",
            "--samples", "1000", "--seed", "3", "--out", str(tmp_path)]
    assert dispatch(argv, settings) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["engine"] == "mc" and report["seed"] == 3
    assert (tmp_path / "disc.json").exists()


def test_points_command_writes_file(settings, tmp_path, capsys):
    argv = ["points", "--gen", "kind=uniform,n=10", "--seed", "5", "--out", str(tmp_path)]
    assert dispatch(argv, settings) == EXIT_OK
    lines = [line for line in capsys.readouterr().out.splitlines() if not line.startswith("#")]
    assert len(lines) == 10
    assert RunManifest.load(tmp_path / "manifest.json").seed == 5


def test_default_output_directory(settings, capsys):
    assert dispatch(["body", "info", "--spec", "kind=axis_square,side=0.5"], settings) == EXIT_OK
    runs = list(settings.OUTPUT_DIR.glob("body-info-*"))
    assert len(runs) == 1
    assert (runs[0] / "manifest.json").exists()


def test_manifest_detects_tampering(tmp_path):
    target = tmp_path / "a.txt"
    target.write_text("one")
    manifest = RunManifest(version="test", command=["x"])
    manifest.record(target)
    manifest.write(tmp_path)
    assert RunManifest.load(tmp_path / "manifest.json").verify(tmp_path)
    target.write_text("two")
    assert not manifest.verify(tmp_path)


def test_spectrum_cache_round_trip(tmp_path):
    body = make_body(BodySpec(kind="disk", r=0.25))
    direction = Direction(0.5)
    path = cache_spectrum(body, direction, 8.0, tmp_path)
    assert path.exists()
    cached = lookup_spectrum(body, direction, 8.0, tmp_path)
    assert cached is not None
    fresh = ray_spectrum(body, direction, 8.0)
    np.testing.assert_array_equal(cached.rho_values, fresh.rho_values)
    np.testing.assert_array_equal(cached.ft_values, fresh.ft_values)
    assert lookup_spectrum(body, direction, 8.0, tmp_path, oversample=16) is None


def test_body_info_accepts_block_spec(settings, tmp_path):
    out = tmp_path / "block"
    argv = ["body", "info", "--spec", 'body { kind = "c_sigma", sigma = 0.75 }', "--out", str(out)]
    assert dispatch(argv, settings) == EXIT_OK
    stored = (out / "body.cfg").read_text()
    assert body_spec_from_snippet(stored) == BodySpec(kind="c_sigma", sigma=0.75)
    assert RunManifest.load(out / "manifest.json").verify(out)
