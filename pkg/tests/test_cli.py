import json

import numpy as np

from depspan.cli import main
from depspan.fileio import read_edge_list, write_points


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_clique_stdout(capsys):
    code, out, _ = run(capsys, "gen-clique", "--n", "4")
    assert code == 0
    assert out.splitlines()[0] == "4 6"


def test_build_fourhop_with_sidecar(tmp_path, capsys):
    out = tmp_path / "g.edges"
    code, _, _ = run(capsys, "build", "fourhop", "--n", "256", "--psi", "0.5",
                     "--seed", "3", "--out", str(out))
    assert code == 0
    g = read_edge_list(out)
    assert g.n == 256
    sidecar = json.loads((tmp_path / "g.edges.json").read_text())
    assert sidecar["construction"] == "fourhop"
    assert {"nu", "block_size", "radius", "connector_rate", "seed"} <= set(sidecar)

    # byte-identical rebuild
    out2 = tmp_path / "g2.edges"
    run(capsys, "build", "fourhop", "--n", "256", "--psi", "0.5",
        "--seed", "3", "--out", str(out2))
    assert out.read_bytes() == out2.read_bytes()


def test_filter_then_deficiency_pipeline(tmp_path, capsys):
    g = tmp_path / "k.edges"
    run(capsys, "gen-clique", "--n", "64", "--out", str(g))
    h = tmp_path / "h.edges"
    code, _, _ = run(capsys, "filter", "--graph", str(g), "--psi", "0.5",
                     "--seed", "1", "--out", str(h))
    assert code == 0
    code, out, _ = run(capsys, "deficiency", "--graph", str(h))
    assert code == 0
    assert int(out.strip()) >= 0

    code, out, _ = run(capsys, "deficiency", "--graph", str(g), "--psi", "0.5",
                       "--trials", "5", "--seed", "2", "--hops", "2")
    assert code == 0
    assert out.splitlines()[0] == "n,psi,hop_bound,trials,mean,stderr,seed"


def test_validation_errors_exit_2(tmp_path, capsys):
    g = tmp_path / "k.edges"
    run(capsys, "gen-clique", "--n", "8", "--out", str(g))
    code, _, err = run(capsys, "filter", "--graph", str(g), "--psi", "1.5",
                       "--out", str(tmp_path / "x"))
    assert code == 2
    assert "error" in err
    code, _, err = run(capsys, "deficiency", "--graph", str(tmp_path / "nope"))
    assert code == 2


def test_build_euclid_and_verify_stretch(tmp_path, capsys):
    pts = np.random.default_rng(4).random((48, 2))
    pfile = tmp_path / "pts.txt"
    write_points(pts, pfile)
    gfile = tmp_path / "e.edges"
    code, _, _ = run(capsys, "build", "euclid", "--points", str(pfile),
                     "--eps", "0.25", "--psi", "0.5", "--seed", "5",
                     "--max-orderings", "8", "--out", str(gfile))
    assert code == 0
    sidecar = json.loads((tmp_path / "e.edges.json").read_text())
    assert sidecar["mode"] == "four-hop"
    assert sidecar["family_size"] >= sidecar["orderings_used"]

    code, out, _ = run(capsys, "verify-stretch", "--graph", str(gfile),
                       "--points", str(pfile), "--eps", "0.25", "--hops", "4",
                       "--check")
    assert code in (0, 3)
    assert "stretch_failures=" in out


def test_lso_check_quick(capsys):
    code, out, _ = run(capsys, "lso-check", "--d", "1", "--eps", "0.5",
                       "--n", "64", "--pairs", "50", "--check")
    assert code == 0
    assert "pass_rate=100.0000%" in out


def test_experiment_csv_and_jobs_identical(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    base = ["experiment", "sparse-failure", "--n", "64", "--psi", "0.5",
            "--trials", "10", "--seed", "3"]
    assert run(capsys, *base, "--out", str(a))[0] == 0
    assert run(capsys, *base, "--jobs", "2", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_experiment_check_flag(capsys):
    code, out, err = run(capsys, "experiment", "clique-scaling", "--n", "64",
                         "--psi", "0.5", "--trials", "50", "--seed", "1",
                         "--hops", "2", "--check")
    assert code == 0, err
    assert out.startswith("schema_version,")
