import json
import shutil
import subprocess
import sys

import pytest

from factorcomplex import formats
from factorcomplex.cli import main
from factorcomplex.field import build_CB, build_PD
from factorcomplex.poset import face_closure


def run(*argv):
    return main([str(a) for a in argv])


def read(path):
    return json.loads(path.read_text())


# formats

def test_complex_round_trip():
    k = build_CB(2, 3)
    doc = formats.complex_to_json(k, {"model": "CB-field"})
    assert doc["format"] == "sc-v1"
    back = formats.complex_from_json(json.loads(formats.dumps(doc)))
    assert back.faces == k.faces and back.labels == k.labels


def test_poset_round_trip():
    p = build_PD(2, 2)
    back = formats.poset_from_json(json.loads(formats.dumps(formats.poset_to_json(p))))
    assert len(back) == len(p)
    assert [back.leq(a, b) for a in range(len(p)) for b in range(len(p))] == [
        p.leq(a, b) for a in range(len(p)) for b in range(len(p))
    ]


def test_dumps_is_stable():
    doc = formats.complex_to_json(face_closure([[0, 1, 2]]))
    assert formats.dumps(doc) == formats.dumps(json.loads(formats.dumps(doc)))
    assert formats.dumps(doc).endswith("\n")


def test_load_errors(tmp_path):
    with pytest.raises(formats.FormatError):
        formats.load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(formats.FormatError):
        formats.load(bad)
    untagged = tmp_path / "untagged.json"
    untagged.write_text("{}")
    with pytest.raises(formats.FormatError):
        formats.load(untagged)


def test_wrong_tag_rejected():
    with pytest.raises(formats.FormatError):
        formats.complex_from_json({"format": "poset-v1"})


def test_bundle_rows():
    assert formats.bundle_rows([]) == (None, [])
    with pytest.raises(formats.FormatError):
        formats.bundle_rows([{"format": "sc-v1"}, {"format": "homology-v1"}])


# CLI

def test_build_then_homology(tmp_path, capsys):
    cb = tmp_path / "cb.json"
    assert run("build-cb-field", "--n", 2, "--q", 2, "--out", cb) == 0
    hom = tmp_path / "hom.json"
    assert run("homology", "--in", cb, "--out", hom) == 0
    doc = read(hom)
    assert doc["betti"] == [0, 1] and doc["torsion"] == [[], []]
    assert doc["meta"]["model"] == "CB-field"


def test_homology_csv_and_mod_p(tmp_path):
    cb = tmp_path / "cb.json"
    run("build-cb-field", "--n", 2, "--q", 3, "--out", cb)
    out = tmp_path / "hom.csv"
    assert run("homology", "--in", cb, "--coefficients", "GFp:2", "--out", out) == 0
    assert out.read_text().splitlines() == ["dimension,faces,reduced_betti,torsion", "0,4,0,", "1,6,3,"]


def test_homology_of_poset_uses_order_complex(tmp_path):
    pd, hom = tmp_path / "pd.json", tmp_path / "hom.json"
    assert run("build-pd-field", "--n", 2, "--q", 2, "--out", pd) == 0
    assert run("homology", "--in", pd, "--out", hom) == 0
    assert read(hom)["betti"] == [0, 1]


def test_fcd_and_free_builders(tmp_path):
    fcd, free = tmp_path / "fcd.json", tmp_path / "free.json"
    assert run("build-fcd-field", "--n", 2, "--q", 2, "--out", fcd) == 0
    assert read(fcd)["format"] == "poset-v1"
    assert run("build-cb-free", "--n", 2, "--L", 1, "--out", free) == 0
    assert read(free)["meta"] == {"model": "CB-free", "n": 2, "L": 1}


def test_phi_check(tmp_path):
    out = tmp_path / "phi.json"
    assert run("phi-check", "--n", 2, "--q", 2, "--out", out) == 0
    doc = read(out)
    assert doc["order_preserving"] and doc["failures"] == [] and doc["checked"] == len(doc["fibers"])


def test_sphere_verify(tmp_path, capsys):
    out = tmp_path / "v.json"
    assert run("sphere-verify", "--n", 3, "--max-edges", 5, "--out", out) == 0
    assert "violations: 0" in capsys.readouterr().out
    doc = read(out)
    assert doc["format"] == "verify-v1" and doc["violations"] == [] and doc["checked"] > 0


@pytest.mark.parametrize(
    "argv,code",
    [
        (["homology", "--in", "missing.json"], 2),
        (["homology"], 2),
        (["build-cb-field", "--n", "2", "--q", "4"], 3),
        (["build-cb-field", "--n", "4", "--q", "2"], 3),
        (["build-cb-field", "--n", "0", "--q", "2"], 2),
        (["build-cb-field", "--n", "2", "--q", "2", "--coefficients", "GFp:4"], 2),
        (["build-cb-free", "--n", "4", "--L", "1"], 3),
        (["sphere-verify", "--n", "5", "--max-edges", "3"], 3),
        (["no-such-command"], 2),
    ],
)
def test_exit_codes(argv, code, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == code


def test_invariant_breach_exits_4_with_witness(tmp_path, capsys, monkeypatch):
    from factorcomplex import cli
    from factorcomplex.errors import InvariantError

    def broken(*args, **kwargs):
        raise InvariantError("Euler characteristic mismatch", {"faces": 1, "betti": 2})

    cb = tmp_path / "cb.json"
    run("build-cb-field", "--n", 2, "--q", 2, "--out", cb)
    monkeypatch.setattr(cli, "homology_report", broken)
    assert run("homology", "--in", cb) == 4
    err = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert err["witness"] == {"faces": 1, "betti": 2}


def test_malformed_complex_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": "sc-v1", "vertices": [{"id": 0, "label": "x"}], "facets": [[0, 7]]}))
    assert run("homology", "--in", bad) == 2


def test_report_bundles(tmp_path, capsys):
    paths = []
    for q in (2, 3):
        cb, hom = tmp_path / f"cb{q}.json", tmp_path / f"hom{q}.json"
        run("build-cb-field", "--n", 2, "--q", q, "--out", cb)
        run("homology", "--in", cb, "--out", hom)
        paths.append(hom)
    out = tmp_path / "bundle.csv"
    assert run("report", *paths, "--out", out) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    js = tmp_path / "bundle.json"
    assert run("report", *paths, "--out", js) == 0
    assert len(read(js)["rows"]) == 2


def test_report_empty_and_mixed(tmp_path):
    assert run("report", "--out", tmp_path / "empty.csv") == 0
    cb, hom = tmp_path / "cb.json", tmp_path / "hom.json"
    run("build-cb-field", "--n", 2, "--q", 2, "--out", cb)
    run("homology", "--in", cb, "--out", hom)
    assert run("report", cb, hom) == 2


def test_outputs_do_not_depend_on_threads(tmp_path):
    outs = []
    for t in (1, 3):
        p = tmp_path / f"v{t}.json"
        run("sphere-verify", "--n", 3, "--max-edges", 6, "--threads", t, "--out", p)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    again = tmp_path / "again.json"
    run("sphere-verify", "--n", 3, "--max-edges", 6, "--out", again)
    assert again.read_bytes() == outs[0]


def test_console_script(tmp_path):
    exe = shutil.which("factorcomplex")
    cmd = [exe] if exe else [sys.executable, "-m", "factorcomplex"]
    cb = tmp_path / "cb.json"
    proc = subprocess.run(cmd + ["build-cb-field", "--n", "2", "--q", "2", "--out", str(cb)], capture_output=True)
    assert proc.returncode == 0
    proc = subprocess.run(cmd + ["homology", "--in", str(cb)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["betti"] == [0, 1]
