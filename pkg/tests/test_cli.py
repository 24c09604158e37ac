import csv
import hashlib
import io
import json

import pytest
from click.testing import CliRunner

from chainsd.chain_ring import ChainRing, preset
from chainsd.cli import main, verify_report
from chainsd.oracle import so_summary
from reference_tables import TABLES


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)

    return go


def csv_rows(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ring: ")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_ring_info_r52(run):
    res = run("ring-info", "--ring", "R52")
    assert res.exit_code == 0
    assert "2 = u^2 + u^4" in res.output
    assert "eta = (1,0,1)" in res.output
    info = json.loads(run("ring-info", "--ring", "R52", "--format", "json").output)
    assert info["e"] == 5 and info["kappa"] == 2 and info["eta"] == ["1", "0", "1"]


def test_ring_info_r41(run):
    info = json.loads(run("ring-info", "--ring", "R41", "--format", "json").output)
    assert (info["e"], info["kappa"], info["size"]) == (4, 2, 16)
    assert info["ideal_sizes"] == [16, 8, 4, 2, 1]


def test_ring_from_file(run, tmp_path):
    p = tmp_path / "ring.json"
    p.write_text(json.dumps(preset("R52").to_json()))
    assert "2 = u^2 + u^4" in run("ring-info", "--ring", p).output


@pytest.mark.parametrize("g", [[[0, 0], [0, 0]], [[1, 0]], "x"])
def test_malformed_ring_spec(run, tmp_path, g):
    spec = dict(preset("R52").to_json(), g=g)
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(spec))
    res = run("ring-info", "--ring", p)
    assert res.exit_code == 2
    assert "invalid ring spec" in res.output


def test_unknown_ring(run):
    assert run("ring-info", "--ring", "R99").exit_code == 2


def test_count_single_type(run):
    res = run("count", "--ring", "R42", "--n", 3, "--type", "0,0,0,2")
    assert res.exit_code == 0
    assert csv_rows(res.output) == [{"type": "0,0,0,2", "count": "21"}]


def test_count_all_reproduces_table(run):
    rows = csv_rows(run("count", "--ring", "R42", "--n", 3, "--all").output)
    got = {tuple(map(int, r["type"].split(","))): int(r["count"]) for r in rows if r["type"] != "total"}
    expected = dict(TABLES[("R42", 3)])
    expected[(0, 0, 0, 0)] = 1
    assert got == expected
    assert rows[-1] == {"type": "total", "count": str(sum(expected.values()))}


def test_count_json_and_self_dual(run):
    out = json.loads(run("count", "--ring", "R41", "--n", 2, "--all", "--self-dual", "--format", "json").output)
    assert out["n"] == 2
    sd = {r["type"]: r["count"] for r in out["rows"]}
    census = so_summary(preset("R41"), 2).sd
    assert {k: v for k, v in sd.items() if k != "total" and v} == {",".join(map(str, t)): v for t, v in census.items() if any(t)}
    assert sd["total"] == sum(v for k, v in sd.items() if k != "total")


def test_count_infeasible_type(run):
    rows = csv_rows(run("count", "--ring", "R42", "--n", 3, "--type", "2,0,0,0").output)
    assert rows == [{"type": "2,0,0,0", "count": "0", "note": "infeasible (torsion containment bound)"}]


@pytest.mark.parametrize("args", [("--type", "1,0"), ("--type", "a,b,c,d"), ()])
def test_count_bad_input(run, args):
    assert run("count", "--ring", "R42", "--n", 3, *args).exit_code == 2


@pytest.mark.parametrize("name,types", [("R41", 8), ("R61", 15)])
def test_verify_pass(run, name, types):
    res = run("verify", "--ring", name, "--n", 2)
    assert res.exit_code == 0
    assert res.output.startswith(f"PASS: {types} types compared")


def test_verify_json(run):
    out = json.loads(run("verify", "--ring", "R51", "--n", 2, "--format", "json").output)
    assert out["status"] == "PASS" and out["mismatches"] == []


def test_verify_refuses_large_census(run):
    res = run("verify", "--ring", "R41", "--n", 6)
    assert res.exit_code == 2


def test_corrupted_eta_is_caught():
    good = preset("R71")
    spec = good.spec
    bad = ChainRing(spec)
    eta = list(good.eta)
    eta[1] ^= 1
    bad.__dict__["eta"] = tuple(eta)
    rep = verify_report(bad, 2)
    assert len(rep["mismatches"]) == 1
    m = rep["mismatches"][0]
    assert m["type"] == "1,0,0,0,0,0,0"
    assert "eta_1 = 0" in m["s_theta_case"]
    assert verify_report(good, 2)["mismatches"] == []


@pytest.fixture
def example_chain_file(tmp_path):
    p = tmp_path / "chain.json"
    p.write_text(json.dumps({"spaces": [[[1, 1, 0]]] * 3}))
    return p


def test_construct_example(run, example_chain_file):
    res = run("construct", "--ring", "R52", "--n", 3, "--type", "1,0,0,0,0", "--chain", example_chain_file, "--seed", 4)
    assert res.exit_code == 0
    out = json.loads(res.output)
    cert = out["certificate"]
    assert cert["self_orthogonal"] and all(cert["torsion_match"])
    assert [s["solutions"] for s in out["steps"]] == [4, 256]


def test_construct_enumerate(run, example_chain_file):
    out = json.loads(run("construct", "--ring", "R52", "--n", 3, "--type", "1,0,0,0,0", "--chain", example_chain_file, "--enumerate").output)
    assert out["count"] == out["expected"] == 1024
    assert len({json.dumps(c, sort_keys=True) for c in out["codes"]}) == 1024


def test_construct_self_dual(run):
    out = json.loads(run("construct", "--ring", "R41", "--n", 2, "--type", "0,1,0,1", "--random-chain").output)
    assert out["certificate"]["self_dual"] is True


def test_construct_rejects_bad_chain(run, tmp_path):
    p = tmp_path / "a2.json"
    p.write_text(json.dumps({"spaces": [[[1, 1]]] * 3}))
    res = run("construct", "--ring", "R52", "--n", 2, "--type", "1,0,0,0,0", "--chain", p)
    assert res.exit_code == 3
    assert "chain condition failed: A2" in res.output
    res = run("construct", "--ring", "R52", "--n", 2, "--type", "1,0,0,0,0", "--chain", p, "--skip-chain-check")
    assert res.exit_code == 3
    assert "violated: A2" in res.output


def test_construct_wrong_mode(run):
    res = run("construct", "--ring", "R51", "--n", 2, "--type", "1,0,0,0,0", "--random-chain", "--mode", "X")
    assert res.exit_code == 2


def test_manifest_digest_is_deterministic(run, tmp_path):
    digests = []
    for k in range(2):
        mf = tmp_path / f"m{k}.json"
        res = run("count", "--ring", "R41", "--n", 3, "--all", "--manifest", mf)
        man = json.loads(mf.read_text())
        assert man["command"] == "count" and man["ring"] == preset("R41").to_json()
        assert {"parameters", "seed", "version", "seconds"} <= set(man)
        digests.append(man["digest"])
        assert man["digest"] == hashlib.sha256(res.output.encode()).hexdigest()
    assert digests[0] == digests[1]


def test_version(run):
    assert run("--version").exit_code == 0
