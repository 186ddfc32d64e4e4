import json

from pgblock.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(out):
    return json.loads(out)["report"]


def test_gaussian(capsys):
    code, out, _ = call(capsys, "gaussian", "--n", "2", "--k", "1", "--q", "7")
    assert code == 0 and report(out)["value"] == 8


def test_spread(capsys):
    code, out, _ = call(capsys, "spread", "--p", "2", "--h", "1", "--t", "3", "--n", "1")
    rep = report(out)
    assert code == 0 and rep["elements"] == 9 and rep["partition"]


def test_usage_errors(capsys):
    code, _, err = call(capsys, "gaussian", "--n", "2", "--k", "1", "--q", "7", "--bogus")
    assert code == 64 and "--bogus" in err
    assert call(capsys, "nosuch")[0] == 64
    assert call(capsys)[0] == 64
    code, _, err = call(capsys, "gaussian", "--n", "x", "--k", "1", "--q", "7")
    assert code == 64 and "--n" in err


def test_csv_only_for_histograms(capsys):
    code, _, err = call(capsys, "gaussian", "--n", "2", "--k", "1", "--q", "7", "--format", "csv")
    assert code == 64 and "csv" in err


def test_field(capsys):
    code, out, _ = call(capsys, "field", "--p", "7", "--t", "3", "--a", "2", "--b", "5",
                        "--op", "mul")
    rep = report(out)
    assert code == 0 and rep["orders"]["top"] == 343 and rep["result"]["value"] == 10 % 7


def test_points(capsys):
    code, out, _ = call(capsys, "points", "--p", "2", "--t", "1", "--n", "2")
    rep = report(out)
    assert code == 0 and rep["count"] == 7 and len(rep["points"]) == 7


def test_gap(capsys):
    code, out, _ = call(capsys, "gap", "--n", "2", "--k", "1", "--s", "1", "--q", "7")
    assert code == 0 and report(out)["pass"]
    code, out, _ = call(capsys, "gap", "--n", "2", "--k", "1", "--s", "1", "--q", "2")
    assert code == 1


def test_pointset_workflow(tmp_path, capsys):
    b = str(tmp_path / "b.txt")
    code, out, _ = call(capsys, "construct", "--p", "3", "--n", "2", "--k", "1", "--save", b)
    assert code == 0 and report(out)["size"] % 3 == 1
    code, out, _ = call(capsys, "blocking-check", "--pointset", b, "--k", "1")
    rep = report(out)
    assert code == 0 and rep["blocking"] and rep["minimal"] and rep["criterion"]
    code, out, _ = call(capsys, "spectrum", "--pointset", b, "--d", "1", "--mod", "3",
                        "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "size,count"
    sizes = [int(l.split(",")[0]) for l in lines[1:]]
    assert sizes == sorted(sizes) and all(s % 3 == 1 for s in sizes)
    assert sum(int(l.split(",")[1]) for l in lines[1:]) == 757
    code, out, _ = call(capsys, "certify", "--pointset", b)
    assert code == 0 and report(out)["status"] == "linear"
    code, out, _ = call(capsys, "audit", "--pointset", b, "--k", "1")
    assert code == 0 and report(out)["conclusion"] == "linear"
    code, out, _ = call(capsys, "moments", "--pointset", b, "--k", "1",
                        "--rows", "1 0 0; 0 1 0; 0 0 1")
    assert code == 0 and report(out)["identities_hold"]


def test_certify_inconclusive_exit_code(tmp_path, capsys):
    b = str(tmp_path / "b.txt")
    call(capsys, "construct", "--p", "3", "--n", "2", "--k", "1", "--save", b,
         "--source", "seeded-random-subspace", "--seed", "3")
    code, out, _ = call(capsys, "certify", "--pointset", b, "--budget", "0")
    assert code == 2 and report(out)["status"] == "inconclusive"


def test_linearset(capsys):
    code, out, _ = call(capsys, "linearset", "--p", "2", "--t", "3", "--n", "1",
                        "--rows", "1 0 0 0 0 0; 0 0 0 1 0 0")
    rep = report(out)["linear_sets"][0]
    assert code == 0 and rep["size"] == 3 and rep["kind"] == "subline"


def test_subline_scan_command_q2(capsys):
    code, out, _ = call(capsys, "scan-result4", "--q", "2")
    rep = report(out)
    assert code == 0 and rep["exhaustive"] and set(map(int, rep["histogram"])) <= {0, 1, 2, 3}


def test_baer_scan_command_requires_square(capsys):
    code, _, err = call(capsys, "scan-result5", "--q", "3")
    assert code == 64 and "square" in err


def test_bound_exceeded_reported(capsys):
    code, out, _ = call(capsys, "spread", "--p", "7", "--t", "3", "--n", "2")
    rep = report(out)
    assert code == 2 and rep["error"] == "bound exceeded" and rep["bound"] > 0


def test_reports_are_byte_identical(tmp_path, capsys):
    args = ["scan-result4", "--q", "3", "--sample", "30", "100", "--seed", "5"]
    _, a, _ = call(capsys, *args, "--workers", "1")
    _, b, _ = call(capsys, *args, "--workers", "2", "--cache-dir", str(tmp_path))
    assert a == b
    assert "wall_time_s" not in a
    _, c, _ = call(capsys, *args, "--timing")
    assert "wall_time_s" in c


def test_output_file_and_env_cache(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("PGBLOCK_CACHE_DIR", str(tmp_path / "cache"))
    out = tmp_path / "r.json"
    code = run(["spread", "--p", "3", "--t", "3", "--n", "1", "--output", str(out)])
    assert code == 0 and json.loads(out.read_text())["report"]["elements"] == 28
    assert (tmp_path / "cache" / "manifest.json").exists()


def test_verify_all_subset(capsys):
    code, out, _ = call(capsys, "verify-all", "--only", "8,2")
    doc = json.loads(out)
    assert code == 0 and [s["criterion"] for s in doc["report"]["summary"]] == [8, 2]
    assert call(capsys, "verify-all", "--only", "11")[0] == 64
