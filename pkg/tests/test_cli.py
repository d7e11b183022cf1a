import json
import subprocess
import sys

import pytest

from strandmirror import mirrorcheck as MC
from strandmirror.cli import RunConfig, UsageError, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_config_validation():
    assert RunConfig(k=3).n == 2
    for kw in ({"k": 0}, {"k": 2, "n": 4}, {"wmax": -1}, {"threads": 0}, {"format": "xml"},
               {"k": 2, "dvars": (1,)}, {"field": "fp:4"}):
        with pytest.raises(UsageError):
            RunConfig(**kw)
    with pytest.raises(UsageError):
        RunConfig(n=1, k=3).require_mirror()


def test_algebra_a_identity_only(capsys):
    code, out, _ = run(capsys, "algebra", "a", "--n", "1", "--k", "1", "--wmax", "0")
    doc = json.loads(out)
    assert code == 0
    assert doc["objects"] == ["{0}", "{1}"]
    assert all(h["alphas"] == [[0]] for h in doc["homs"])
    # only identities at wmax 0, and u, v chords need one letter
    assert {(h["src"], h["tgt"]) for h in doc["homs"]} == {("{0}", "{0}"), ("{1}", "{1}")}


def test_algebra_a_round_trip(capsys):
    code, out, _ = run(capsys, "algebra", "a", "--n", "2", "--k", "3", "--wmax", "3")
    doc = json.loads(out)
    want = MC.table_json(MC.strand_table(3, 3))
    assert code == 0
    assert {key: doc[key] for key in want} == json.loads(json.dumps(want))


def test_algebra_a_ranks(capsys):
    # n=2, k=3: End(L_{1,2}) is R/(x_1 x_2 x_3) truncated to w <= 4
    code, out, _ = run(capsys, "algebra", "a", "--n", "2", "--k", "3", "--wmax", "4")
    doc = json.loads(out)
    (blk,) = [h for h in doc["homs"] if h["src"] == h["tgt"] == "{1,2}"]
    want = [[a, b, c] for a in range(3) for b in range(3) for c in range(3) if min(a, b, c) == 0]
    assert sorted(blk["alphas"]) == sorted(want)


def test_algebra_b_dot(capsys):
    code, out, _ = run(capsys, "algebra", "b", "--k", "2", "--format", "dot")
    assert code == 0 and out.startswith("digraph")
    assert sum(1 for line in out.splitlines() if "\" -> \"" in line) == 4
    assert out.count("// relation") == 2


def test_algebra_b_json(capsys):
    code, out, _ = run(capsys, "algebra", "b", "--k", "2", "--wmax", "2", "--initial")
    doc = json.loads(out)
    assert doc["objects"] == ["[1,1]", "[1,2]"]


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "mirror", "--k", "2", "--wmax", "4")
    assert code == 0 and json.loads(out)["ok"]
    code, _, err = run(capsys, "verify", "mirror", "--n", "1", "--k", "3")
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "cover", "--k", "2", "--gamma", "0")
    assert code == 2
    code, _, _ = run(capsys, "algebra", "a", "--k", "2", "--field", "fp:6")
    assert code == 2
    with pytest.raises(SystemExit) as e:
        main(["verify", "nonsense"])
    assert e.value.code == 2


def test_verify_gradingX(capsys):
    code, out, _ = run(capsys, "verify", "gradingX", "--n", "2", "--k", "4")
    doc = json.loads(out)
    assert code == 0
    (h1,) = [p for p in doc["parts"] if p["name"] == "h1-of-X"]
    assert h1["details"]["h1_rank"] == 0 and h1["details"]["torsion"] == []


def test_verify_all_text(capsys):
    code, out, _ = run(capsys, "verify", "all", "--k", "2", "--wmax", "4", "--format", "text")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("PASS all")
    assert "FAIL" not in out


def test_semiorth_reports_ext1_forms(capsys):
    code, out, _ = run(capsys, "verify", "semiorth", "--k", "3", "--wmax", "4")
    doc = json.loads(out)
    (ext,) = [p for p in doc["parts"] if p["name"] == "ext-tables"]
    assert code == 0
    assert ext["details"]["ext1_stated_form"] == [
        {"i": 1, "matches_x_[i+1,k]_form": False},
        {"i": 2, "matches_x_[i+1,k]_form": True},
    ]


def test_thread_count_does_not_change_tables(capsys, tmp_path):
    outs = []
    for t in ("1", "3"):
        p = tmp_path / f"a{t}.json"
        assert main(["cover", "--k", "2", "--wmax", "4", "--gamma", "2", "--phi", "1,1", "--threads", t, "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    docs = []
    for t in ("1", "2"):
        code, out, _ = run(capsys, "verify", "all", "--k", "2", "--wmax", "3", "--threads", t)
        d = json.loads(out)
        for part in [d] + d["parts"]:
            part.pop("wall_time")
        docs.append(d)
    assert docs[0] == docs[1]


def test_cover_trivial_matches_algebra(capsys):
    _, a, _ = run(capsys, "algebra", "a", "--k", "3", "--wmax", "3")
    code, c, _ = run(capsys, "cover", "--k", "3", "--wmax", "3", "--gamma", "1")
    assert code == 0 and a == c


def test_cover_z2_doubling(capsys):
    code, out, _ = run(capsys, "cover", "--k", "2", "--wmax", "4", "--gamma", "2", "--phi", "1,1")
    doc = json.loads(out)
    assert code == 0
    rep = doc["report"]
    assert rep["dimension_identity"] and rep["degree_errors"] == 0 and rep["associativity_failures"] == []
    _, base, _ = run(capsys, "algebra", "a", "--k", "2", "--wmax", "4")
    base = json.loads(base)
    assert len(doc["objects"]) == 2 * len(base["objects"])
    assert sum(len(h["alphas"]) for h in doc["homs"]) == 2 * sum(len(h["alphas"]) for h in base["homs"])


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "strandmirror", "verify", "gradingX", "--n", "1", "--k", "2",
                        "--format", "text"], capture_output=True, text=True)
    assert r.returncode == 0 and "PASS gradingX" in r.stdout
