import json

import numpy as np
import pytest

from posmaps import cp_split, gallery
from posmaps.cli import main
from posmaps.maps import choi_from_json, choi_to_json
from posmaps.report import SCHEMA, revalidate, vector_from_json
from posmaps.schmidt import objective

QUICK = ["--restarts", "8"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def write_json(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_analyze_choi3(capsys):
    r = run_json(capsys, "analyze", "--gallery", "choi3", *QUICK)
    assert r["schema"] == SCHEMA
    v = r["verdicts"]
    assert v["completely_positive"]["kind"] == "CertifiedNo"
    assert v["positive"]["kind"] == "HeuristicYes"
    assert v["k_positive"]["2"]["kind"] == "CertifiedNo"
    assert v["k_positive"]["2"]["witness"]["type"] == "schmidt_vector"
    assert v["decomposable"]["kind"] == "CertifiedNo"
    assert v["decomposable"]["witness"]["type"] == "state"
    assert "timings" not in r


def test_analyze_trace(capsys):
    r = run_json(capsys, "analyze", "--gallery", "trace", "--dim", "3", *QUICK)
    v = r["verdicts"]
    assert v["completely_positive"]["kind"] == "CertifiedYes"
    assert all(x["kind"] == "CertifiedYes" for x in v["k_positive"].values())
    assert r["split"]["c"] == 1


def test_analyze_reduction(capsys):
    r = run_json(capsys, "analyze", "--gallery", "reduction", "--param", "0.5", "--dim", "3", *QUICK)
    k = r["verdicts"]["k_positive"]
    assert k["2"]["kind"] == "HeuristicYes"
    assert k["3"]["kind"] == "CertifiedNo"


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "--gallery", "choi3", *QUICK)
    assert code == 0
    assert "2-positive" in out and "CertifiedNo" in out


def test_analyze_timings_opt_in(capsys):
    r = run_json(capsys, "analyze", "--gallery", "transpose", "--timings", *QUICK)
    assert set(r["timings"]) >= {"split", "decomposable"}


def test_analyze_deterministic(capsys):
    a = run(capsys, "analyze", "--gallery", "choi3", "--seed", "7", "--json", *QUICK)[1]
    b = run(capsys, "analyze", "--gallery", "choi3", "--seed", "7", "--json", *QUICK)[1]
    assert a == b


def test_report_revalidates(capsys, tmp_path):
    phi = gallery("choi3")
    r = run_json(capsys, "analyze", "--gallery", "choi3", *QUICK)
    # round-trip through text, then recompute every witness objective
    r = json.loads(json.dumps(r))
    checks = revalidate(r, phi)
    assert len(checks) >= 4
    for _, stored, recomputed in checks:
        assert recomputed == pytest.approx(stored, abs=1e-9)


def test_analyze_non_self_adjoint(capsys, tmp_path):
    choi = np.triu(np.ones((4, 4)))
    data = {"dim_k": 2, "dim_h": 2, "choi": [[float(x), 0.0] for x in choi.reshape(-1)]}
    path = write_json(tmp_path, "m.json", data)
    r = run_json(capsys, "analyze", "--choi", path)
    assert r["self_adjoint"] is False
    assert r["split"]["exists"] is False


def test_analyze_from_choi_file(capsys, tmp_path):
    path = write_json(tmp_path, "t.json", choi_to_json(gallery("transpose", n=2)))
    r = run_json(capsys, "analyze", "--choi", path, *QUICK)
    assert r["map"]["file"] == path
    assert r["verdicts"]["k_positive"]["2"]["kind"] == "CertifiedNo"


def test_malformed_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "analyze", "--choi", str(path))
    assert code == 2
    assert "error" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "split", "--choi", str(tmp_path / "absent.json"))
    assert code == 2


def test_wrong_shape(capsys, tmp_path):
    path = write_json(tmp_path, "s.json", {"dim_k": 2, "dim_h": 2, "choi": [[1.0, 0.0]] * 5})
    assert run(capsys, "split", "--choi", path)[0] == 2


def test_split_trace(capsys):
    r = run_json(capsys, "split", "--gallery", "trace", "--dim", "3")
    assert r["c"] == 1
    assert np.allclose(choi_from_json(r["phi_cp"]).choi, 0)


def test_split_identity(capsys):
    r = run_json(capsys, "split", "--gallery", "identity", "--dim", "2")
    assert r["c"] == pytest.approx(2, abs=1e-12)
    assert r["residual"] <= 1e-12


def test_split_negative_of_cp(capsys, tmp_path):
    path = write_json(tmp_path, "neg.json", choi_to_json(-1.0 * gallery("trace", n=2)))
    code, _, err = run(capsys, "split", "--choi", path)
    assert code == 3
    assert "split undefined" in err


def test_kpos(capsys):
    r = run_json(capsys, "kpos", "--gallery", "transpose", "--k", "2", *QUICK)
    v = r["verdict"]
    assert v["kind"] == "CertifiedNo"
    z = vector_from_json(v["witness"])
    assert z.rank() == 2
    assert v["value"] == pytest.approx(2, abs=1e-9)


def test_kpos_verdict_never_changes_exit_code(capsys):
    assert run(capsys, "kpos", "--gallery", "choi3", "--k", "2", *QUICK)[0] == 0
    assert run(capsys, "kpos", "--gallery", "identity", "--k", "2", *QUICK)[0] == 0


def test_witness_default(capsys):
    for extra in ([], ["--copositive"]):
        r = run_json(capsys, "witness", "--gallery", "choi3", *extra)
        assert r["preconditions"]["ok"]
        assert r["value"] > 1 + 1e-7
        assert r["witness"]["terms"] == 2


def test_witness_inapplicable(capsys):
    r = run_json(capsys, "witness", "--gallery", "identity", "--dim", "3")
    assert not r["preconditions"]["ok"]
    assert "witness" not in r


def test_witness_from_vector_file(capsys, tmp_path):
    x = np.ones(3) / np.sqrt(3)
    vec = {"type": "schmidt_vector", "dim_k": 3, "dim_h": 3, "terms": 1,
           "left": [[v, 0.0] for v in x], "right": [[v, 0.0] for v in x]}
    path = write_json(tmp_path, "y.json", vec)
    r = run_json(capsys, "witness", "--gallery", "choi3", "--vector", path)
    z = vector_from_json(r["witness"])
    assert objective(cp_split(gallery("choi3")).phi_cp.choi, z) == pytest.approx(r["value"], abs=1e-12)


def test_decomposable(capsys):
    r = run_json(capsys, "decomposable", "--gallery", "choi3", *QUICK)
    assert r["verdict"]["kind"] == "CertifiedNo"
    r = run_json(capsys, "decomposable", "--gallery", "transpose", "--dim", "3", *QUICK)
    assert r["verdict"]["kind"] == "HeuristicYes"


@pytest.mark.parametrize("cone,expect", [("cp", 3.0), ("positive", 1.0), ("k3", 3.0)])
def test_norm_identity(capsys, cone, expect):
    r = run_json(capsys, "norm", "--gallery", "identity", "--dim", "3", "--cone", cone, *QUICK)
    assert r["norm"] == pytest.approx(expect, abs=1e-9)


def test_norm_bad_cone(capsys):
    assert run(capsys, "norm", "--gallery", "trace", "--cone", "nope")[0] == 2


def test_walkthrough_command(capsys):
    r = run_json(capsys, "paper-example")
    assert r["ok"]
    assert all(passed for _, passed in r["checks"])
    assert r["phi"]["witness_value"] > 1
    code, out, _ = run(capsys, "paper-example")
    assert code == 0 and "FAIL" not in out


def test_gallery_list(capsys):
    code, out, _ = run(capsys, "gallery", "list")
    assert code == 0
    for name in ("identity", "transpose", "trace", "choi3", "reduction", "adv"):
        assert name in out


def test_adv_matrix(capsys, tmp_path):
    V = {"rows": 2, "cols": 2, "entries": [[1, 0], [0, 1], [0, 0], [1, 0]]}
    path = write_json(tmp_path, "v.json", V)
    r = run_json(capsys, "analyze", "--gallery", "adv", "--matrix", path, *QUICK)
    assert r["verdicts"]["completely_positive"]["kind"] == "CertifiedYes"


def test_reduction_needs_param(capsys):
    assert run(capsys, "analyze", "--gallery", "reduction")[0] == 2
