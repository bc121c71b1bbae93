import csv
import json

import pytest

from hittingtime.cli import main

FIG1 = "# Fig. 1 style graph\n0 1\n1 2\n0 2\n2 3\n3 4\n"


@pytest.fixture
def fig1_file(tmp_path):
    p = tmp_path / "fig1.txt"
    p.write_text(FIG1)
    return p


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_hit_fig1(fig1_file, tmp_path):
    out = tmp_path / "o"
    assert main(["hit", "--graph", str(fig1_file), "--target", "3", "--out", str(out)]) == 0
    rows = _rows(out / "hit.csv")
    assert [int(r["node"]) for r in rows] == [0, 1, 2, 4]
    means = [float(r["mean"]) for r in rows]
    assert means == pytest.approx([9, 9, 7, 1], abs=1e-10)
    assert float(rows[3]["variance"]) == 0
    assert rows[0]["mean"] == "8.9999999999999893"  # 17 significant digits
    man = json.loads((out / "manifest.json").read_text())
    assert man["command"] == "hit"
    assert man["converged"] is True
    assert man["eps"] == 1e-13
    assert "solve" in man["phases"]
    assert man["outputs"] == ["hit.csv"]


def test_hit_k2(tmp_path):
    g = tmp_path / "k2.txt"
    g.write_text("0 1\n")
    assert main(["hit", "--graph", str(g), "--target", "1", "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "hit.csv").read_text() == "node,mean,variance\n0,1,0\n"


def test_exit_codes(tmp_path, fig1_file):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\nnot an edge\n")
    disc = tmp_path / "disc.txt"
    disc.write_text("0 1\n2 3\n")
    out = str(tmp_path / "o")
    assert main(["hit", "--graph", str(bad), "--target", "0", "--out", out]) == 2
    assert main(["hit", "--graph", str(tmp_path / "missing.txt"), "--target", "0",
                 "--out", out]) == 2
    assert main(["hit", "--graph", str(disc), "--target", "0", "--out", out]) == 3
    assert main(["hit", "--graph", str(fig1_file), "--target", "5", "--out", out]) == 4
    assert main(["simulate", "--graph", str(fig1_file), "--target", "3", "--walks", "5",
                 "--sources", "3", "--out", out]) == 4


def test_not_converged_writes_partial(fig1_file, tmp_path):
    out = tmp_path / "o"
    code = main(["hit", "--graph", str(fig1_file), "--target", "3", "--max-iters", "5",
                 "--out", str(out)])
    assert code == 5
    assert len(_rows(out / "hit.csv")) == 4
    man = json.loads((out / "manifest.json").read_text())
    assert man["converged"] is False and man["exit_code"] == 5


def test_walks_zero_is_usage_error(fig1_file, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["compare", "--graph", str(fig1_file), "--target", "3", "--walks", "0",
              "--out", str(tmp_path)])
    assert info.value.code == 2


def test_simulate_csv(fig1_file, tmp_path):
    out = tmp_path / "o"
    assert main(["simulate", "--graph", str(fig1_file), "--target", "3", "--walks", "2000",
                 "--seed", "4", "--out", str(out)]) == 0
    text = (out / "simulate.csv").read_text()
    assert text.splitlines()[0] == "source,sample_mean,sample_variance,std_error,walks"
    rows = _rows(out / "simulate.csv")
    assert [r["source"] for r in rows] == ["0", "1", "2", "4"]
    assert rows[3]["sample_mean"] == "1"
    man = json.loads((out / "manifest.json").read_text())
    assert man["seed"] == 4 and man["capped_walks"] == 0


def test_compare_fig1(fig1_file, tmp_path):
    out = tmp_path / "o"
    assert main(["compare", "--graph", str(fig1_file), "--target", "3", "--walks", "20000",
                 "--seed", "1", "--out", str(out)]) == 0
    rows = _rows(out / "compare.csv")
    assert all(abs(float(r["delta_sigma"])) < 5 for r in rows)
    man = json.loads((out / "manifest.json").read_text())
    assert set(man["phases"]) == {"analytic", "montecarlo"}
    assert man["speedup"] > 0


def test_byte_identical_reruns(fig1_file, tmp_path):
    for cmd, name, extra in [
        ("hit", "hit.csv", []),
        ("simulate", "simulate.csv", ["--walks", "3000", "--seed", "9"]),
        ("curve", "curve.csv", []),
    ]:
        outs = []
        for k in range(2):
            out = tmp_path / f"{cmd}{k}"
            assert main([cmd, "--graph", str(fig1_file), "--target", "3", "--out", str(out)]
                        + extra) == 0
            outs.append((out / name).read_bytes())
        assert outs[0] == outs[1]


def test_json_output(fig1_file, tmp_path):
    out = tmp_path / "o"
    assert main(["hit", "--graph", str(fig1_file), "--target", "3", "--json",
                 "--out", str(out)]) == 0
    records = json.loads((out / "hit.json").read_text())
    assert records[3] == {"node": 4, "mean": 1.0, "variance": 0.0}
    assert not (out / "hit.csv").exists()


def test_curve_split_distances(fig1_file, tmp_path):
    out = tmp_path / "o"
    assert main(["curve", "--graph", str(fig1_file), "--target", "3", "--out", str(out)]) == 0
    rows = _rows(out / "curve.csv")
    assert [(r["rank"], r["node"]) for r in rows] == [("0", "4"), ("1", "2"), ("2", "0"),
                                                      ("3", "1")]
    assert main(["split", "--graph", str(fig1_file), "--target", "3", "--out", str(out)]) == 0
    split = {r["node"]: r["group"] for r in _rows(out / "split.csv")}
    # means 1, 7, 9, 9: the widest gap isolates the adherent
    assert split == {"0": "1", "1": "1", "2": "1", "4": "0"}
    assert main(["distances", "--graph", str(fig1_file), "--nodes", "0", "3",
                 "--out", str(out)]) == 0
    (row,) = _rows(out / "distances.csv")
    assert list(row) == ["u", "v", "d_uv", "d_vu", "ratio"]
    assert float(row["d_uv"]) == pytest.approx(9, abs=1e-10)


def test_generate_and_use(tmp_path):
    out = tmp_path / "g"
    assert main(["generate", "planted", "--n-per-side", "10", "--p-in", "0.5",
                 "--p-out", "0.1", "--seed", "3", "--out", str(out)]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["node_count"] == 20 and man["final_seed"] >= 3
    again = tmp_path / "g2"
    main(["generate", "planted", "--n-per-side", "10", "--p-in", "0.5",
          "--p-out", "0.1", "--seed", "3", "--out", str(again)])
    assert (out / "graph.txt").read_bytes() == (again / "graph.txt").read_bytes()
    assert main(["hit", "--graph", str(out / "graph.txt"), "--target", "0",
                 "--out", str(tmp_path / "h")]) == 0

    cp = tmp_path / "cp"
    assert main(["generate", "clique-pendant", "--clique-size", "10",
                 "--pendant-degree", "3", "--out", str(cp)]) == 0
    assert json.loads((cp / "manifest.json").read_text())["edge_count"] == 48
    one = tmp_path / "one"
    assert main(["generate", "planted", "--n-per-side", "1", "--p-in", "1",
                 "--p-out", "1", "--out", str(one)]) == 0
    assert (one / "graph.txt").read_text().splitlines()[1:] == ["0 1 1.0"]


def test_generate_impossible(tmp_path):
    assert main(["generate", "planted", "--n-per-side", "2", "--p-in", "1",
                 "--p-out", "0", "--out", str(tmp_path)]) == 2


def test_reduce_dump(fig1_file, tmp_path):
    out = tmp_path / "o"
    assert main(["reduce", "--graph", str(fig1_file), "--target", "3", "--dump",
                 "--out", str(out)]) == 0
    doc = json.loads((out / "reduction.json").read_text())
    assert doc["adherents"] == [4] and doc["X1"][2] == 1 / 3
    assert len(doc["B"]) == 6


def test_manifest_digest_and_replay(fig1_file, tmp_path):
    import hashlib

    out = tmp_path / "o"
    main(["simulate", "--graph", str(fig1_file), "--target", "3", "--walks", "1000",
          "--seed", "2", "--out", str(out)])
    man = json.loads((out / "manifest.json").read_text())
    assert man["input"]["sha256"] == hashlib.sha256(fig1_file.read_bytes()).hexdigest()

    again = tmp_path / "again"
    assert main(["replay", str(out / "manifest.json"), "--out", str(again)]) == 0
    assert (again / "simulate.csv").read_bytes() == (out / "simulate.csv").read_bytes()

    fig1_file.write_text(FIG1 + "4 0\n")
    assert main(["replay", str(out / "manifest.json"), "--out", str(tmp_path / "x")]) == 2


def test_threads_flag_does_not_change_output(fig1_file, tmp_path):
    outs = []
    for t in ("1", "3"):
        out = tmp_path / t
        main(["hit", "--graph", str(fig1_file), "--target", "3", "--threads", t,
              "--out", str(out)])
        outs.append((out / "hit.csv").read_bytes())
    assert outs[0] == outs[1]
