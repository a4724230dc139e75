import json

import numpy as np
import pytest

from sparseph.cli import RunManifest, main, run_bench
from sparseph.data import load_csv, write_csv
from sparseph.filtration import BettiCurve


@pytest.fixture
def study2(tmp_path):
    out = tmp_path / "sim"
    assert main(["simulate", "--study", "2", "--seed", "7", "--out", str(out)]) == 0
    return out


def test_simulate_defaults_and_manifest(study2):
    X = load_csv(study2 / "group1.csv")
    Y = load_csv(study2 / "group2.csv")
    assert X.values.shape == Y.values.shape == (20, 100)
    m = RunManifest.from_json((study2 / "manifest.json").read_text())
    assert m.schema_version == 1 and m.seed == 7
    assert m.extra["config"]["p"] == 100 and m.extra["rng"].startswith("philox")
    assert RunManifest.from_json(m.to_json()) == m


def test_simulate_reproducible(tmp_path, study2):
    again = tmp_path / "again"
    main(["simulate", "--study", "2", "--seed", "7", "--out", str(again)])
    for name in ("group1.csv", "group2.csv"):
        assert (again / name).read_bytes() == (study2 / name).read_bytes()


def test_simulate_invalid(tmp_path, capsys):
    assert main(["simulate", "--study", "2", "--p", "4", "--out", str(tmp_path / "x")]) != 0
    assert "InvalidConfig" in capsys.readouterr().err
    assert not list((tmp_path / "x").glob("*"))


def test_unknown_flag_is_error(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["simulate", "--study", "1", "--bogus", "--out", str(tmp_path)])
    assert err.value.code != 0


def test_filtrate_outputs(tmp_path, study2):
    out = tmp_path / "f"
    assert main(["filtrate", str(study2 / "group1.csv"), "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == sorted(
        ["edge_weights.csv", "filtration.csv", "betti_curve.csv", "betti_curve.json", "betti_plot.svg", "manifest.json"]
    )
    curve = BettiCurve.from_json((out / "betti_curve.json").read_text())
    assert curve.betti[-1] == 100 and curve.domain_max == 1.0
    w = np.loadtxt(out / "edge_weights.csv", delimiter=",", skiprows=1)
    assert w.shape == (100, 100)


def test_filtrate_svg_deterministic(tmp_path, study2):
    for name in ("a", "b"):
        main(["filtrate", str(study2 / "group2.csv"), "--out", str(tmp_path / name)])
    assert (tmp_path / "a" / "betti_plot.svg").read_bytes() == (tmp_path / "b" / "betti_plot.svg").read_bytes()


def test_group2_curve_below_group1(tmp_path, study2):
    curves = {}
    for g in ("group1", "group2"):
        main(["filtrate", str(study2 / f"{g}.csv"), "--out", str(tmp_path / g)])
        curves[g] = BettiCurve.from_json((tmp_path / g / "betti_curve.json").read_text())
    grid = np.linspace(0.75, 0.95, 2001)
    assert np.all(curves["group2"](grid) <= curves["group1"](grid))


def test_filtrate_constant_column(tmp_path, capsys):
    f = tmp_path / "c.csv"
    f.write_text("a,b,c\n1,5,2\n2,5,1\n3,5,7\n")
    out = tmp_path / "o"
    assert main(["filtrate", str(f), "--header", "--out", str(out)]) == 1
    err = capsys.readouterr().err
    assert "ZeroVariance" in err and "(b)" in err
    assert not out.exists() or not any(out.iterdir())


def test_filtrate_missing_file(tmp_path):
    assert main(["filtrate", str(tmp_path / "none.csv"), "--out", str(tmp_path / "o")]) == 1


def test_filtrate_covariance(tmp_path, rng):
    f = tmp_path / "x.csv"
    write_csv(f, rng.standard_normal((8, 5)) * 3)
    main(["filtrate", str(f), "--mode", "covariance", "--out", str(tmp_path / "o")])
    m = json.loads((tmp_path / "o" / "manifest.json").read_text())
    curve = BettiCurve.from_json((tmp_path / "o" / "betti_curve.json").read_text())
    assert m["mode"] == "covariance" and curve.domain_max == m["domain_max"] == curve.lambdas[-1]


def test_compare_outputs(tmp_path, study2):
    out = tmp_path / "cmp"
    assert main(["compare", str(study2 / "group1.csv"), str(study2 / "group2.csv"), "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    assert names == sorted(["replicate_curves.json", "auc.csv", "result.json", "jackknife_plot.svg", "manifest.json"])
    res = json.loads((out / "result.json").read_text())
    assert res["p_value"] < 0.001 and len(res["auc1"]) == len(res["auc2"]) == 20
    reps = json.loads((out / "replicate_curves.json").read_text())
    assert len(reps["group1"]) == 20
    assert len((out / "auc.csv").read_text().splitlines()) == 41
    svg = (out / "jackknife_plot.svg").read_text()
    assert svg.count("<polyline") == 40 and "stroke-dasharray" in svg


def test_compare_study1(tmp_path):
    main(["simulate", "--study", "1", "--seed", "3", "--out", str(tmp_path / "s")])
    out = tmp_path / "cmp"
    main(["compare", str(tmp_path / "s" / "group1.csv"), str(tmp_path / "s" / "group2.csv"), "--out", str(out)])
    assert json.loads((out / "result.json").read_text())["p_value"] > 0.05


def test_compare_mismatched_nodes(tmp_path, rng, capsys):
    write_csv(tmp_path / "a.csv", rng.standard_normal((5, 4)))
    write_csv(tmp_path / "b.csv", rng.standard_normal((5, 6)))
    assert main(["compare", str(tmp_path / "a.csv"), str(tmp_path / "b.csv"), "--out", str(tmp_path / "o")]) == 1
    assert "NodeCountMismatch" in capsys.readouterr().err


def test_bench_small_and_paper_size():
    r = run_bench(2)
    assert r["levels"] == 2
    assert run_bench(548)["seconds"] < 1.0


def test_bench_cli(capsys):
    assert main(["bench", "--p", "10"]) == 0
    assert "seconds=" in capsys.readouterr().out
