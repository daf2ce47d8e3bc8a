import csv
import json
import os

import numpy as np
import pytest

from trendlet import cli, preprocess


def run_cli(args):
    return cli.main([str(a) for a in args])


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synth")
    assert run_cli(["synth", "--outdir", out, "--seed", 42]) == 0
    return out


# ---------------------------------------------------------------- synth

def test_synth_default_shape(synth_dir):
    panel = preprocess.ingest_csv(synth_dir / "panel.csv")
    assert panel.values.shape == (60, 846)
    labels = read_rows(synth_dir / "planted_labels.csv")
    assert labels[0] == ["entity", "archetype"]
    assert len(labels) == 61


def test_synth_seed_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli(["synth", "--outdir", a, "--seed", 7, "--days", 256,
                    "--increasing", 2, "--stagnating", 2, "--seasonal", 2]) == 0
    assert run_cli(["synth", "--outdir", b, "--seed", 7, "--days", 256,
                    "--increasing", 2, "--stagnating", 2, "--seasonal", 2]) == 0
    assert (a / "panel.csv").read_bytes() == (b / "panel.csv").read_bytes()
    assert (a / "planted_labels.csv").read_bytes() == (b / "planted_labels.csv").read_bytes()


def test_synth_too_few_days(tmp_path, capsys):
    assert run_cli(["synth", "--outdir", tmp_path, "--days", 10]) == 4
    assert "64" in capsys.readouterr().err


def test_seed_env_var_default(tmp_path, monkeypatch):
    a, b = tmp_path / "a", tmp_path / "b"
    monkeypatch.setenv("TRENDLET_SEED", "7")
    assert run_cli(["synth", "--outdir", a, "--days", 256,
                    "--increasing", 2, "--stagnating", 2, "--seasonal", 2]) == 0
    monkeypatch.delenv("TRENDLET_SEED")
    assert run_cli(["synth", "--outdir", b, "--seed", 7, "--days", 256,
                    "--increasing", 2, "--stagnating", 2, "--seasonal", 2]) == 0
    assert (a / "panel.csv").read_bytes() == (b / "panel.csv").read_bytes()


# ---------------------------------------------------------------- cluster

def test_cluster_report_and_labels(synth_dir, tmp_path):
    out = tmp_path / "cluster"
    code = run_cli([
        "cluster", "--input", synth_dir / "panel.csv", "--wavelet", "sym2",
        "--k", 3, "--seed", 42, "--outdir", out,
        "--anchors", "increasing=shop01,stagnating=shop21,special=shop41",
    ])
    assert code == 0
    report = json.loads((out / "cluster_report.json").read_text())
    assert report["feature_length"] == 21
    assert report["levels"] == 8
    assert report["band_lengths_coarse_to_fine"][:3] == [6, 6, 9]
    assert report["n_days"] == 846
    rows = read_rows(out / "cluster_labels.csv")
    assert rows[0] == ["entity", "cluster", "name"]
    assert len(rows) == 61
    names = {row[2] for row in rows[1:]}
    assert names == {"increasing", "stagnating", "special"}


def test_cluster_without_anchors_uses_neutral_names(synth_dir, tmp_path):
    out = tmp_path / "plain"
    assert run_cli(["cluster", "--input", synth_dir / "panel.csv", "--seed", 42,
                    "--outdir", out]) == 0
    rows = read_rows(out / "cluster_labels.csv")
    names = {row[2] for row in rows[1:]}
    assert names == {"cluster0", "cluster1", "cluster2"}


def test_cluster_unknown_wavelet(synth_dir, tmp_path, capsys):
    code = run_cli(["cluster", "--input", synth_dir / "panel.csv",
                    "--wavelet", "nope", "--outdir", tmp_path])
    assert code == 2
    assert "unknown wavelet" in capsys.readouterr().err


def test_cluster_anchor_collision(synth_dir, tmp_path, capsys):
    code = run_cli([
        "cluster", "--input", synth_dir / "panel.csv", "--outdir", tmp_path,
        "--anchors", "a=shop01,b=shop02",  # same planted cluster
    ])
    assert code == 4
    err = capsys.readouterr().err
    assert "shop01" in err and "shop02" in err


def test_cluster_missing_input(tmp_path, capsys):
    code = run_cli(["cluster", "--input", tmp_path / "missing.csv", "--outdir", tmp_path])
    assert code == 3


def test_cluster_degenerate_series(tmp_path, capsys):
    path = tmp_path / "flat.csv"
    rows = ["date,a,b"] + [f"2020-01-{d:02d},5,{d}" for d in range(1, 31)]
    path.write_text("\n".join(rows) + "\n")
    run_dir = tmp_path / "out"
    assert run_cli(["cluster", "--input", path, "--wavelet", "haar", "--k", 2,
                    "--outdir", run_dir]) == 4
    assert "a" in capsys.readouterr().err


# ---------------------------------------------------------------- stability

def test_stability_outputs(synth_dir, tmp_path):
    out = tmp_path / "stab"
    code = run_cli([
        "stability", "--input", synth_dir / "panel.csv", "--outdir", out,
        "--wavelets", "haar,sym2,db3", "--seed", 42,
        "--anchors", "increasing=shop01,stagnating=shop21,special=shop41",
    ])
    assert code == 0
    matrix_rows = read_rows(out / "cooccurrence.csv")
    assert len(matrix_rows) == 61
    values = np.array([[float(v) for v in row[1:]] for row in matrix_rows[1:]])
    assert np.array_equal(values, values.T)
    assert np.all(np.diag(values) == 1.0)
    assert np.all((values * 3) % 1 == 0)  # multiples of 1/3
    table = read_rows(out / "wavelet_labels.csv")
    assert table[0] == ["entity", "haar", "sym2", "db3"]
    report = json.loads((out / "stability_report.json").read_text())
    assert report["n_wavelets"] == 3
    assert len(report["wavelets"]) == 3
    assert (out / "cooccurrence.svg").exists()


def test_stability_determinism(synth_dir, tmp_path):
    outs = []
    for sub in ("one", "two"):
        out = tmp_path / sub
        assert run_cli([
            "stability", "--input", synth_dir / "panel.csv", "--outdir", out,
            "--wavelets", "haar,sym2", "--seed", 11,
        ]) == 0
        outs.append(out)
    for name in ("cooccurrence.csv", "wavelet_labels.csv", "stability_report.json",
                 "cooccurrence.svg"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


# ---------------------------------------------------------------- reconstruct

def test_reconstruct_full_depth_matches_normalized(synth_dir, tmp_path):
    out = tmp_path / "rec"
    code = run_cli([
        "reconstruct", "--input", synth_dir / "panel.csv", "--entity", "shop01",
        "--wavelet", "sym2", "--mode", "levels:max", "--outdir", out,
    ])
    assert code == 0
    rows = read_rows(out / "reconstruction.csv")
    assert rows[0] == ["date", "normalized", "reconstruction"]
    data = np.array([[float(r[1]), float(r[2])] for r in rows[1:]])
    assert data.shape[0] == 846
    assert np.max(np.abs(data[:, 0] - data[:, 1])) <= 1e-8
    assert (out / "reconstruction.svg").exists()


def test_reconstruct_coarse_smooth_differs(synth_dir, tmp_path):
    out = tmp_path / "rec2"
    assert run_cli([
        "reconstruct", "--input", synth_dir / "panel.csv", "--entity", "shop01",
        "--wavelet", "sym2", "--mode", "levels:2", "--outdir", out,
        "--plot-format", "csv",
    ]) == 0
    rows = read_rows(out / "reconstruction.csv")
    data = np.array([[float(r[1]), float(r[2])] for r in rows[1:]])
    # a real smooth: not equal to the signal, but strongly correlated
    assert np.max(np.abs(data[:, 0] - data[:, 1])) > 1e-3
    assert np.corrcoef(data[:, 0], data[:, 1])[0, 1] > 0.8
    assert not (out / "reconstruction.svg").exists()


def test_reconstruct_single_zero_coefficient(tmp_path):
    # haar finest detail of a locally-constant pair is exactly zero
    days = 128
    values = [float(3 + (i % 5)) for i in range(days)]
    values[120] = values[121] = 9.0
    rows = ["date,a"] + [
        f"{d.isoformat()},{v}"
        for d, v in zip(
            (np.datetime64("2020-01-01") + np.arange(days)).astype("datetime64[D]").tolist(),
            values,
        )
    ]
    path = tmp_path / "panel.csv"
    path.write_text("\n".join(rows) + "\n")
    out = tmp_path / "rec3"
    assert run_cli([
        "reconstruct", "--input", path, "--entity", "a", "--wavelet", "haar",
        "--mode", "single:detail,6,60", "--outdir", out, "--plot-format", "csv",
    ]) == 0
    data = read_rows(out / "reconstruction.csv")
    recon = np.array([float(r[2]) for r in data[1:]])
    assert np.all(recon == 0.0)


def test_reconstruct_index_out_of_range(synth_dir, tmp_path, capsys):
    code = run_cli([
        "reconstruct", "--input", synth_dir / "panel.csv", "--entity", "shop01",
        "--wavelet", "sym2", "--mode", "single:detail,1,999", "--outdir", tmp_path,
    ])
    assert code == 4
    assert "0.." in capsys.readouterr().err


def test_reconstruct_bad_mode_usage_error(synth_dir, tmp_path):
    with pytest.raises(SystemExit) as exc:
        run_cli(["reconstruct", "--input", synth_dir / "panel.csv",
                 "--entity", "shop01", "--mode", "bogus", "--outdir", tmp_path])
    assert exc.value.code == 2


# ---------------------------------------------------------------- pca

def test_pca_outputs(synth_dir, tmp_path):
    out = tmp_path / "pca"
    code = run_cli([
        "pca", "--input", synth_dir / "panel.csv", "--wavelet", "sym2",
        "--seed", 42, "--outdir", out,
    ])
    assert code == 0
    loadings = read_rows(out / "pca_loadings.csv")
    assert len(loadings) == 22
    assert [row[0] for row in loadings[1:7]] == [f"c0,{i}" for i in range(6)]
    assert loadings[13][0] == "d1,0"
    scores = read_rows(out / "pca_scores.csv")
    assert len(scores) == 61
    assert (out / "pca_biplot.svg").exists()
    assert (out / "pca_coefficients.svg").exists()
    coef = read_rows(out / "pca_coefficients.csv")
    assert len(coef[0]) == 22


def test_pca_and_reconstruct_determinism(synth_dir, tmp_path):
    for sub in ("one", "two"):
        assert run_cli(["pca", "--input", synth_dir / "panel.csv", "--wavelet", "db3",
                        "--seed", 5, "--outdir", tmp_path / f"p_{sub}"]) == 0
        assert run_cli(["reconstruct", "--input", synth_dir / "panel.csv",
                        "--entity", "shop41", "--wavelet", "db3", "--mode", "levels:1",
                        "--outdir", tmp_path / f"r_{sub}"]) == 0
    for name in ("pca_scores.csv", "pca_loadings.csv", "pca_coefficients.csv",
                 "pca_biplot.svg", "pca_coefficients.svg"):
        assert (tmp_path / "p_one" / name).read_bytes() == (tmp_path / "p_two" / name).read_bytes()
    for name in ("reconstruction.csv", "reconstruction.svg"):
        assert (tmp_path / "r_one" / name).read_bytes() == (tmp_path / "r_two" / name).read_bytes()


# ---------------------------------------------------------------- filters

def test_filters_dump(capsys):
    assert run_cli(["filters", "dump"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 16
    header = lines[0].split(",")
    assert header == ["wavelet", "filter_length", "selected_coefficients_n846"]
    counts = {line.split(",")[0]: int(line.split(",")[2]) for line in lines[1:]}
    assert counts["sym2"] == 21
    assert counts["db3"] == 40
    assert counts["haar"] == 8
