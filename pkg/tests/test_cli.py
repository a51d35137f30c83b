import csv
import io
import json
import math

import numpy as np
import pytest

from revpinsker.cli import main, parse_alpha_list, parse_range
from revpinsker.measure import PairSampler, pair_from_dict, sample_pair

LN2 = math.log(2)


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps({"alphabet": ["a", "b"], "P": [0.5, 0.5], "Q": [0.25, 0.75]}))
    return path


@pytest.fixture
def q_file(tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps({"alphabet": ["a", "b"], "Q": [0.25, 0.75]}))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_helpers():
    assert parse_alpha_list("0.5, 2,inf") == [0.5, 2.0, math.inf]
    assert parse_range("0.25:1.0:0.25") == [0.25, 0.5, 0.75, 1.0]
    assert len(parse_range("0.1:5.0:0.1")) == 50


def test_bounds_report(capsys, pair_file):
    code, out, _ = run(capsys, "bounds", "--input", pair_file, "--base", "nats")
    assert code == 0
    d = json.loads(out)
    assert d["exact"]["kl_pq"] == pytest.approx(0.14384103622589046, rel=1e-15)
    assert all(b["holds"] is not False for b in d["bounds"])


def test_bits_are_scaled_nats(capsys, pair_file):
    _, nats, _ = run(capsys, "bounds", "--input", pair_file)
    _, bits, _ = run(capsys, "bounds", "--input", pair_file, "--base", "bits")
    n, b = json.loads(nats), json.loads(bits)
    for key in ("kl_pq", "kl_qp", "d2", "d_half"):
        assert b["exact"][key] == pytest.approx(n["exact"][key] / LN2, rel=1e-15)
    for bn, bb in zip(n["bounds"], b["bounds"]):
        if bn["value"] is None:
            continue
        scale = 1 / LN2 if bn["target"] in ("KL", "KL_QP", "D_alpha", "D2") else 1.0
        assert bb["value"] == pytest.approx(bn["value"] * scale, rel=1e-15)


def test_report_round_trip(capsys, tmp_path):
    pair = sample_pair(PairSampler(2024, 7))
    path = tmp_path / "p.json"
    path.write_text(json.dumps(pair.to_dict()))
    _, out, _ = run(capsys, "bounds", "--input", path)
    again = pair_from_dict(json.loads(out)["pair"])
    np.testing.assert_array_equal(again.p, pair.p)
    np.testing.assert_array_equal(again.q, pair.q)


def test_compute(capsys, pair_file):
    code, out, _ = run(capsys, "compute", "--input", pair_file, "--alpha", "0.5,2,inf")
    v = json.loads(out)["values"]
    assert code == 0
    assert v["renyi"]["inf"] == pytest.approx(LN2)
    assert v["renyi"]["2"] == pytest.approx(math.log(4 / 3))
    assert v["tv"] == 0.5


def test_compute_csv(capsys, pair_file):
    code, out, _ = run(capsys, "compute", "--input", pair_file, "--format", "csv")
    rows = {r["quantity"]: r["value"] for r in csv.DictReader(io.StringIO(out))}
    assert code == 0 and float(rows["chi2"]) == pytest.approx(1 / 3)


def test_infinite_values_serialize(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"alphabet": ["a", "b"], "P": [0.5, 0.5], "Q": [1.0, 0.0]}))
    code, out, _ = run(capsys, "bounds", "--input", path)
    d = json.loads(out)
    assert code == 0 and d["exact"]["kl_pq"] == "inf"


def test_sweep_attained(capsys):
    code, out, _ = run(capsys, "sweep", "--construction", "thm2", "--eta", "0.25:3.0:0.25")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 12
    assert list(rows[0]) == ["eta1", "eta2", "tv", "lower_bound", "attained"]
    assert all(r["attained"] == "true" for r in rows)


def test_sweep_two_param(capsys, tmp_path):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--construction", "thm2_two_param", "--eta", "0.15:3.0:0.15",
                     "--output", out_path)
    rows = list(csv.DictReader(out_path.open()))
    assert code == 0 and len(rows) == 400
    assert all(r["attained"] == "true" for r in rows)


def test_exponent_json(capsys, q_file):
    code, out, _ = run(capsys, "exponent", "--q", q_file, "--delta", "0.1")
    d = json.loads(out)
    assert code == 0 and d["discrepancy"] is True
    assert d["exact"] == pytest.approx(1.6316744813203590e-3, rel=1e-12)
    assert d["e_upper_paper"] == pytest.approx(1.249219400431925e-3, rel=1e-12)


def test_exponent_csv(capsys, q_file):
    code, out, _ = run(capsys, "exponent", "--q", q_file, "--delta", "0.3", "--mc-n", "1,50",
                       "--trials", "2000", "--seed", "7", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["N", "p_hat", "neg_log_rate"]
    assert rows[0]["N"] == "1" and float(rows[0]["p_hat"]) == 1.0


def test_exponent_seed_is_honoured(capsys, q_file):
    args = ("exponent", "--q", q_file, "--delta", "0.3", "--mc-n", "60", "--trials", "3000", "--format", "csv")
    a = run(capsys, *args, "--seed", "1")[1]
    b = run(capsys, *args, "--seed", "1")[1]
    assert a == b


def test_dstar(capsys, tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps({"Q": [0.5, 0.5]}))
    code, out, _ = run(capsys, "dstar", "--q", path, "--eps", "0.2", "--grid", "2000")
    d = json.loads(out)
    assert code == 0
    assert d["value"] == pytest.approx(0.020135513550688873, abs=1e-4)
    assert d["metadata"]["semantics"] == "upper bound on infimum, gap O(n/m)"


def test_chain(capsys, tmp_path):
    path = tmp_path / "b.json"
    path.write_text(json.dumps({"p": [0.275, 0.33], "q": [0.25, 0.3]}))
    code, out, _ = run(capsys, "chain", "--input", path, "--alpha", "0.5,1,3,inf")
    d = json.loads(out)
    assert code == 0
    assert d["k1"] == pytest.approx(2 * math.log(1.01), rel=1e-12)
    assert all(row["holds"] for row in d["chain"])


def test_verify_quick(capsys, tmp_path):
    summary = tmp_path / "summary.json"
    code, out, _ = run(capsys, "verify", "--suite", "attainment,scaling,equiprobable", "--trials", "1000",
                       "--seed", "42", "--output", summary)
    assert code == 0 and "all checks passed" in out
    assert json.loads(summary.read_text())["violations"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--input", "missing.json"],
        ["verify", "--suite", "bogus"],
        ["sweep", "--eta", "1:0:0.1"],
        ["compute", "--input", "BAD", "--alpha", "-1"],
    ],
)
def test_usage_errors_exit_2(capsys, argv, tmp_path, pair_file):
    argv = [str(pair_file) if a == "BAD" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_invalid_pair_exit_2(capsys, tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"alphabet": ["a", "b"], "P": [0.5, 0.6], "Q": [0.5, 0.5]}))
    code, _, err = run(capsys, "bounds", "--input", path)
    assert code == 2 and "error" in err


def test_verify_violation_writes_witness(capsys, tmp_path, monkeypatch):
    from revpinsker import verify

    def broken(trials, seed, workers):
        res = verify.SuiteResult("broken")
        res.record("always fails", np.array([2.0]), np.array([1.0]), np.array([0.0]),
                   np.array([[0.5, 0.5]]), np.array([[0.25, 0.75]]), seed, 0)
        return res

    monkeypatch.setitem(verify.RUNNERS, "broken", broken)
    monkeypatch.setattr(verify, "SUITES", verify.SUITES + ("broken",))
    monkeypatch.setattr("revpinsker.cli.SUITES", verify.SUITES)
    witness = tmp_path / "w.json"
    code, _, err = run(capsys, "verify", "--suite", "broken", "--witness", witness)
    assert code == 1
    w = json.loads(witness.read_text())
    assert w[0]["lhs"] == 2.0 and w[0]["pair"]["P"] == [0.5, 0.5]
