from __future__ import annotations

import json

import pytest

from digext import cli, selftest
from digext.cache import ResultCache, fingerprint
from digext.constructions import dturan
from digext.digraph import from_edge_list, parse_text


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    return code, capsys.readouterr().out


@pytest.fixture
def files(tmp_path):
    planted = from_edge_list(20, [(a, 10 + b) for a in range(5) for b in range(5)])
    paths = {
        "d4": tmp_path / "d4.dg",
        "k3": tmp_path / "k3.dg",
        "planted": tmp_path / "planted.dg",
        "A": tmp_path / "A.json",
        "B": tmp_path / "B.json",
        "P": tmp_path / "P.json",
        "host": tmp_path / "host.dg",
        "R": tmp_path / "R.json",
        "H": tmp_path / "H.dg",
        "plan": tmp_path / "plan.json",
    }
    paths["d4"].write_text(dturan(4, 2).to_text())
    paths["k3"].write_text("digraph/1 n=3\n0 1\n1 0\n0 2\n2 0\n1 2\n2 1\n")
    paths["planted"].write_text(planted.to_text())
    paths["A"].write_text(json.dumps(list(range(10))))
    paths["B"].write_text(json.dumps(list(range(10, 20))))
    paths["P"].write_text(json.dumps({"exceptional": [], "clusters": [list(range(10)), list(range(10, 20))]}))
    paths["host"].write_text(from_edge_list(8, [(a, b) for a in range(4) for b in range(4, 8)]).to_text())
    paths["R"].write_text(json.dumps({"k": 2, "edges": [[0, 1]], "eps": 0.1, "d": 0.5}))
    paths["H"].write_text("digraph/1 n=2\n0 1\n")
    paths["plan"].write_text(json.dumps({"sigma": [0, 1], "s": 1}))
    (tmp_path / "P8.json").write_text(json.dumps({"exceptional": [], "clusters": [[0, 1, 2, 3], [4, 5, 6, 7]]}))
    paths["P8"] = tmp_path / "P8.json"
    return paths


def test_construct(capsys):
    code, out = run(capsys, "construct", "--family", "dturan", "-r", 2, "-n", 4)
    G = parse_text(out)
    assert code == 0 and G == dturan(4, 2) and G.edge_count() == 8
    code, out = run(capsys, "construct", "--family", "blowup", "-r", 3, "-t", 2)
    assert parse_text(out).n == 6
    code, out = run(capsys, "construct", "--family", "cycle", "-n", 2)
    assert code == 1 and json.loads(out)["error"] == "input-error"


def test_extremal_and_census(capsys):
    code, out = run(capsys, "extremal", "--n", 3, "--pattern", "tt:3", "--a", 2, "--exhaustive")
    rec = json.loads(out)
    assert code == 0 and rec["value"] == 4 and rec["witness_classes"] == 1
    code, out = run(capsys, "census", "--n", 3, "--class", "o", "--pattern", "tt:3", "--alpha", 0.2)
    assert json.loads(out)["total"] == 21
    code, out = run(capsys, "census", "--n", 3, "--class", "o", "--pattern", "tt:3", "--alpha", 0.2, "--tsv")
    assert out.splitlines()[1].split("\t")[:3] == ["3", "oriented", "21"]


def test_shard_refusal(capsys):
    code, out = run(capsys, "census", "--n", 6, "--class", "d", "--pattern", "tt:3", "--alpha", 0.1)
    err = json.loads(out)
    assert code == 1 and err["error"] == "shard-required" and err["required_shards"] == 4**8


def test_sharded_census_sums(capsys):
    total = 0
    for i in range(16):
        _, out = run(capsys, "census", "--n", 4, "--class", "d", "--pattern", "tt:3", "--alpha", 0.25, "--shards", 16, "--shard", i)
        total += json.loads(out)["total"]
    assert total == 921


def test_usage_errors(capsys):
    for argv in (["bogus"], ["census", "--n", "3"], ["weight", "--bogus", "x"]):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_contains_weight_pairs(capsys, files):
    code, out = run(capsys, "contains", "--pattern", "tt:3", files["d4"])
    assert code == 3 and json.loads(out)["contains"] is False
    code, out = run(capsys, "contains", "--pattern", f"file:{files['H']}", files["k3"])
    assert code == 0 and json.loads(out)["witness"] is not None
    code, out = run(capsys, "weight", "--a", "log3", files["d4"])
    assert code == 0 and json.loads(out)["f2"] == 4
    code, out = run(capsys, "pairs", "--theta", 0.1, files["k3"])
    assert out.splitlines()[0] == "u\tv\tt3\tclass" and len(out.splitlines()) == 4
    code, out = run(capsys, "contains", "--pattern", "nonsense", files["d4"])
    assert code == 1


def test_regularity_commands(capsys, files):
    code, out = run(capsys, "regularity", "check", "--eps", 0.2, "--exact", files["A"], files["B"], files["planted"])
    v = json.loads(out)
    assert code == 0 and not v["regular"] and v["witness"]["deviation_exact"] == "3/4"
    code, out = run(capsys, "regularity", "check", "--eps", 0.2, "--samples", 50, "--seed", 3, files["A"], files["B"], files["planted"])
    assert json.loads(out)["mode"] == "sampled"
    code, out = run(capsys, "regularity", "reduce", "--eps", 0.2, "--d", 0.2, "--partition", files["P"], files["planted"])
    R = json.loads(out)
    assert R["edges"] == [] and len(R["audit"]) == 2


def test_embed_command(capsys, files):
    code, out = run(
        capsys, "embed", "--host", files["host"], "--partition", files["P8"], "--reduced", files["R"],
        "--pattern", f"file:{files['H']}", "--plan", files["plan"],
    )
    res = json.loads(out)
    assert code == 0 and res["success"] and res["map"] == {"0": 0, "1": 4}


def test_stability_and_removal(capsys, files, tmp_path):
    code, out = run(capsys, "stability", "audit", "--a", 2, "--gamma", 0.1, "--theta", 0.1, "--alpha", 0.1, files["d4"])
    assert json.loads(out)["case"] == "2.1"
    code, out = run(capsys, "stability", "distance", "--mode", "bipartite", files["k3"])
    assert json.loads(out)["distance"] == 2
    code, out = run(capsys, "removal", "--pattern", "tt:3", "--exact", files["k3"])
    assert out.startswith("# deleted=2") and parse_text(out).edge_count() == 4
    dest = tmp_path / "out.dg"
    code, out = run(capsys, "removal", "--pattern", "tt:3", "--out", dest, files["k3"])
    assert json.loads(out)["deleted"] == 2 and parse_text(dest.read_text()).edge_count() == 4


def test_selftest_command(capsys):
    code, out = run(capsys, "selftest", "--only", "counting")
    assert code == 0 and "counting" in out and "lemma1" not in out


def test_selftest_catches_mutation(monkeypatch):
    from digext import constructions

    real = constructions.turan_number
    monkeypatch.setattr(constructions, "turan_number", lambda n, r: real(n, r) + (n == 4 and r == 2))
    lines = []
    assert not selftest.run(["lemma1"], out=lines.append)
    assert any("ex_2(4,T3)" in line and "FAIL" in line for line in lines)


def test_output_independent_of_jobs(capsys):
    outs = set()
    for jobs in (1, 2):
        _, out = run(capsys, "census", "--n", 4, "--class", "d", "--pattern", "tt:3", "--alpha", 0.25, "--shards", 16, "--jobs", jobs)
        outs.add(out)
    assert len(outs) == 1


def test_cache_replay(capsys, files, tmp_path):
    cache = tmp_path / "cache.jsonl"
    commands = [
        ["extremal", "--n", n, "--pattern", "tt:3", "--a", a] for n in (2, 3, 4) for a in ("2", "log3", "8/5")
    ] + [
        ["census", "--n", n, "--class", c, "--pattern", "tt:3", "--alpha", 0.25] for n in (3, 4) for c in ("o", "d")
    ] + [
        ["regularity", "check", "--eps", 0.2, "--exact", files["A"], files["B"], files["planted"]],
        ["regularity", "reduce", "--eps", 0.2, "--d", 0.2, "--partition", files["P"], files["planted"]],
        ["stability", "audit", files["d4"]],
        ["stability", "distance", files["k3"]],
        ["stability", "distance", "--mode", "bipartite", files["k3"]],
        ["extremal", "--n", 5, "--pattern", "tt:3", "--a", "2", "--construction-only"],
        ["embed", "--host", files["host"], "--partition", files["P8"], "--reduced", files["R"],
         "--pattern", f"file:{files['H']}", "--plan", files["plan"]],
    ]
    assert len(commands) == 20
    fresh = [run(capsys, *c) for c in commands]
    first = [run(capsys, *c, "--cache", cache) for c in commands]
    again = [run(capsys, *c, "--cache", cache) for c in commands]
    assert fresh == first == again
    assert len(cache.read_text().splitlines()) == 20


def test_cache_env_and_versioning(tmp_path, monkeypatch, capsys):
    path = tmp_path / "env.jsonl"
    monkeypatch.setenv("DIGEXT_CACHE", str(path))
    run(capsys, "extremal", "--n", 3, "--pattern", "tt:3")
    assert path.exists()
    key = fingerprint("x", {"a": 1})
    c1 = ResultCache(path)
    c1.put(key, "v1")
    assert c1.get(key) == "v1"
    assert ResultCache(path, version="2").get(key) is None
    with path.open("a") as fh:
        fh.write('{"key": "torn')
    assert c1.get(key) == "v1"
