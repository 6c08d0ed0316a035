import json
from fractions import Fraction

import pytest

from scalent import lab
from scalent.cli import EXIT_CONFIG, EXIT_OK, main
from scalent.formats import format_space
from scalent.lab import (ConfigError, ExperimentConfig, TrendReport, coinduce_row,
                         coinduce_table, gapped_window, resolve_sigma, scaling_row,
                         scaling_table, staircase_window)
from scalent.amenable import folner_window
from scalent.semimetric import hamming_cube

TWO_ATOMS = "atoms 2\na 1/2\nb 1/2\ndist a b 1\n"


# --- configuration -------------------------------------------------------

def test_resolve_sigma():
    assert str(resolve_sigma("alternating", 5)) == "10101"
    assert str(resolve_sigma("zeros", 3)) == "000"
    with pytest.raises(ConfigError):
        resolve_sigma("101", 5)
    with pytest.raises(ConfigError):
        resolve_sigma("1x1", 3)


def test_config_parsing_and_overrides():
    cfg = ExperimentConfig.from_text("eps = 1/8\nn = 2..4\n# note\nsigma = ones\n", {"n": "8"})
    assert cfg.eps == (Fraction(1, 8),) and cfg.n == (8,) and cfg.sigma == "ones"
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({"colour": "red"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({"mode": "sampled", "samples": "10"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({"eps": "1/0"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_mapping({"eps": "3/2"})


def test_rows_must_be_tagged():
    with pytest.raises(ValueError):
        TrendReport(("a",), [{"a": 1}])
    with pytest.raises(ValueError):
        TrendReport(("tag",), [{"tag": "sampled"}])


# --- scaling rows ---------------------------------------------------------

def test_zero_sigma_rows_have_unit_entropy():
    # the two constant words are the only blocks, so Φ = log2 2 = 1
    for n in (2, 16, 1024):
        r = scaling_row("zeros", n, Fraction(1, 4))
        assert r["tag"] == "exact" and r["lower_blocks"] == r["upper_blocks"] == 2
        assert r["phi_lower"] == r["phi_upper"] == 1


def test_ones_rows_exact():
    r = scaling_row("ones", 8, Fraction(1, 10))
    assert r["tag"] == "exact" and r["lower_blocks"] == 231


def test_sampled_rows_carry_seed():
    r = scaling_row("alternating", 16, Fraction(1, 8), mode="sampled", samples=2000, seed=3)
    assert r["tag"] == "sampled" and r["samples"] == 2000 and r["seed"] == 3


def test_scaling_table_verdicts():
    rep = scaling_table(ExperimentConfig(sigma="ones", eps=(Fraction(1, 4),), n=(2, 4, 8)))
    v = rep.verdicts["1/4"]
    assert v["predicted_log_slope"] == pytest.approx(1.0, abs=0.2)
    assert rep.to_csv().splitlines()[0].split(",") == list(lab.SCALING_COLUMNS)


# --- coinduce rows -------------------------------------------------------

def test_window_shapes():
    assert len(staircase_window(3)) == 3 + 4 + 5
    assert len(gapped_window(3)) == 9


def test_small_box_row_is_exact():
    r = coinduce_row("alternating", folner_window(2, 2), Fraction(1, 10), Fraction(2), None, None, 2)
    assert r["tag"] == "exact" and r["k"] == 2 and r["product_lower"] == r["product_upper"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bound_formula_audit(n):
    eps, phi = Fraction(1, 10), Fraction(2)
    r = coinduce_row("alternating", folner_window(2, n), eps, phi, None, None, n)
    # for a box the slice sizes sum to |W|
    assert r["sum_s"] == r["size"]
    assert (r["bound_lower"] + r["k"] + 1) / r["size"] == pytest.approx(r["predicted_per_size"], abs=1e-6)
    assert r["bound_lower"] == pytest.approx(float(eps ** 3 / phi) * r["h4eps_lower"] - r["k"] - 1, abs=1e-6)


def test_gapped_window_counts_nonempty_slices():
    r = coinduce_row("alternating", gapped_window(3), Fraction(1, 10), Fraction(2), None, None, 3)
    assert r["k"] == 3


def test_coinduce_table_needs_small_eps():
    with pytest.raises(ConfigError):
        coinduce_table(ExperimentConfig(eps=(Fraction(1, 4),), n=(2,)))


# --- command line --------------------------------------------------------

def test_cli_entropy(tmp_path, capsys):
    f = tmp_path / "two.space"
    f.write_text(TWO_ATOMS)
    assert main(["entropy", str(f), "--eps", "1/4"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["lower_blocks"] == out["upper_blocks"] == 2
    cube = tmp_path / "cube.space"
    cube.write_text(format_space(hamming_cube(3)))
    assert main(["entropy", str(cube), "--eps", "1/4,1/2"]) == EXIT_OK
    res = json.loads(capsys.readouterr().out)["results"]
    # at 1/2 blocks are points or edges and more than 4 points must be covered
    assert [r["lower_blocks"] for r in res] == [7, 3]


def test_cli_bad_input_exit_code(tmp_path, capsys):
    f = tmp_path / "bad.space"
    f.write_text("atoms 2\na 1/2\nb 1/3\ndist a b 1\n")
    assert main(["entropy", str(f), "--eps", "1/4"]) == EXIT_CONFIG
    assert "bad.space:3:" in capsys.readouterr().err
    assert main(["entropy", str(tmp_path / "missing"), "--eps", "1/4"]) == EXIT_CONFIG
    assert main(["scaling-table", "--mode", "sampled", "--samples", "10"]) == EXIT_CONFIG
    assert main(["scaling-table", "--eps", "1/0"]) == EXIT_CONFIG
    assert main(["window-dist", "--window", "0,x"]) == EXIT_CONFIG


def test_cli_outputs_are_deterministic(tmp_path, capsys):
    args = ["scaling-table", "--sigma", "alternating", "--n", "4,8", "--eps", "1/8",
            "--mode", "sampled", "--samples", "500", "--seed", "9"]
    assert main(args + ["--out", str(tmp_path / "a.csv")]) == EXIT_OK
    assert main(args + ["--out", str(tmp_path / "b.csv")]) == EXIT_OK
    capsys.readouterr()
    for ext in ("csv", "json"):
        assert (tmp_path / f"a.{ext}").read_bytes() == (tmp_path / f"b.{ext}").read_bytes()
    rows = json.loads((tmp_path / "a.json").read_text())["rows"]
    assert all(r["tag"] == "sampled" and r["seed"] == 9 for r in rows)


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sigma = zeros\nn = 2,4\neps = 1/4\n")
    assert main(["scaling-table", "--config", str(cfg)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3 and all(",exact," in line for line in lines[1:])
    cfg.write_text("sigma = zeros\nwidth = 3\n")
    assert main(["scaling-table", "--config", str(cfg)]) == EXIT_CONFIG


def test_cli_verify(capsys):
    assert main(["verify", "partitions", "--seed", "1", "--instances", "20"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("PASS partitions")


def test_cli_orbit_and_window(capsys):
    assert main(["adic-orbit", "--sigma", "ones", "--level", "2", "--steps", "5"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    # four positions, then the overflow stops the orbit
    assert [line.split(",")[1] for line in lines[1:]] == ["0", "1", "2", "3"]
    assert main(["window-dist", "--sigma", "zeros", "--window", "0..2"]) == EXIT_OK
    dist = json.loads(capsys.readouterr().out)
    assert dist["probabilities"] == {"000": "1/2", "111": "1/2"}


def test_cli_coinduce_table(capsys):
    assert main(["coinduce-table", "--n", "2,3", "--eps", "1/10"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split(",") == list(lab.COINDUCE_COLUMNS) and len(lines) == 3
