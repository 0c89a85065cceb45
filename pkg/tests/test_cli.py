import io
import json

from netdecomp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["generate", "random", "100", "300", "42", "--out", str(a)]) == 0
    assert main(["generate", "random", "100", "300", "42", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = run(capsys, "generate", "path", "3")
    assert code == 0 and out == "3 2\n0 1\n1 2\n"


def test_decompose_then_verify(tmp_path, capsys):
    colors = tmp_path / "colors.txt"
    code, out, _ = run(capsys, "decompose", "--gen", "random", "256", "1024", "7", "--out", str(colors))
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["per_color"] and len(rep["per_color"]) <= 9
    graph = tmp_path / "g.txt"
    main(["generate", "random", "256", "1024", "7", "--out", str(graph)])
    code, out, _ = run(capsys, "verify", "--input", str(graph), "--decomposition", str(colors))
    assert code == 0 and json.loads(out)["ok"]


def test_reports_are_deterministic(capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "isolate", "--gen", "path", "150")
        outs.append(out)
    assert outs[0] == outs[1] and json.loads(outs[0])["ok"]
    assert "rounds_indicative" in json.loads(run(capsys, "cluster", "--gen", "grid", "5", "5")[1])


def test_verify_flags_adjacent_clusters(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("2 1\n0 1\n")
    listing = tmp_path / "d.txt"
    listing.write_text("0 1 0 0\n1 1 1 1\n")
    code, out, _ = run(capsys, "verify", "--input", str(graph), "--decomposition", str(listing))
    assert code == 1 and not json.loads(out)["ok"]


def test_spanner_tree(tmp_path, capsys):
    edges = tmp_path / "sp.txt"
    code, out, _ = run(capsys, "spanner", "--gen", "tree", "64", "--k", "3", "--out", str(edges))
    rep = json.loads(out)
    assert code == 0 and rep["edges"] == 63
    assert rep["checks"][1]["measured"] == 1.0
    code, out, _ = run(capsys, "verify", "--gen", "tree", "64", "--spanner", str(edges), "--k", "3")
    assert code == 0


def test_hitting_set(tmp_path, capsys):
    inst = tmp_path / "inst.txt"
    inst.write_text("20 3 1 4\n2 3 1 2 3\n1 2 5 6\n4 4 7 8 9 10\n")
    code, out, _ = run(capsys, "hitting-set", "--input", str(inst))
    rep = json.loads(out)
    assert code == 0 and rep["checks"][0]["measured"] <= 4
    ordered = tmp_path / "ord.txt"
    ordered.write_text("6 2 1 2\n3 3 1 2\n2 5 6\n")
    code, out, _ = run(capsys, "hitting-set", "--input", str(ordered), "--ordered")
    rep = json.loads(out)
    assert code == 0 and rep["ordered_cost"] <= rep["reduced_cost"] <= 3 * rep["ordered_cost"]


def test_oracle_queries(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("0 0\n0 3\n"))
    code, out, _ = run(capsys, "oracle", "--gen", "path", "4", "--sources", "0", "--k", "2", "--queries")
    assert code == 0 and out.splitlines() == ["0 0 0", "0 3 3"]


def test_usage_errors(tmp_path, capsys):
    code, _, err = run(capsys, "decompose", "--gen", "blob", "3")
    assert code == 2 and "unknown generator" in err
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1\n")
    code, _, err = run(capsys, "spanner", "--input", str(bad))
    assert code == 2 and "line 1" in err
