import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import jsonschema
import pytest

from harnesslab.cli import main
from harnesslab.qops import q_number
from harnesslab.report import REPORT_SCHEMA, SCHEMA_ID


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    obj = json.loads(out)
    jsonschema.validate(obj, REPORT_SCHEMA)
    return code, obj


@pytest.fixture
def pfile(tmp_path):
    def write(**kw):
        d = {"q": "0", "eta": "0", "theta": "0", "sigma": "0", "tau": "0"}
        d.update({k: str(v) for k, v in kw.items()})
        path = tmp_path / "p.json"
        path.write_text(json.dumps(d))
        return str(path)
    return write


def test_params(capsys):
    code, out = run(capsys, "params", "--params", "free")
    obj = json.loads(out)
    assert code == 0 and obj["admissibility"]["admissible"]
    assert obj["families"] == ["free"]
    assert obj["time_inverse"]["sigma"] == "1/4"


def test_params_inadmissible_exits_1(capsys, pfile):
    code, out = run(capsys, "params", "--params", pfile(q=-1, sigma=1, tau=1))
    assert code == 1 and not json.loads(out)["admissibility"]["admissible"]


def test_regression_times(capsys):
    code, out = run(capsys, "regression", "--params", "brownian", "--times", "1,2,3")
    obj = json.loads(out)
    assert code == 0
    assert obj["form"] == {"A": "1/4", "B": "1/2", "C": "1/4", "D": "0", "E": "0", "F": "1/2"}
    assert obj["linear"] == {"a": "1/2", "b": "1/2"}


def test_regression_verify(capsys):
    code, obj = report(capsys, "regression", "--params", "general", "--verify", "1/2,1,3/2,2")
    assert code == 0 and obj["passed"]
    assert {c["name"] for c in obj["checks"]} >= {"A1", "F3", "tmp"}
    assert all(c["residual"] == "0" for c in obj["checks"])


def test_regression_zero_denominator_exits_1(capsys, pfile):
    code, _ = run(capsys, "regression", "--params", pfile(q=3), "--times", "1,2,3")
    assert code == 1


def test_recur_sigma0_csv(capsys, pfile):
    path = pfile(q="1/2", eta="1/3", theta="1/5", tau="1/7")
    code, out = run(capsys, "recur", "--family", "sigma0", "--params", path, "-N", "20", "--t", "1")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "a_n", "b_n", "c_n"]
    assert len(rows) == 22
    q, eta, theta, tau = F(1, 2), F(1, 3), F(1, 5), F(1, 7)
    for row in rows[2:]:
        n = int(row[0])
        m, m1 = q_number(n, q), q_number(n - 1, q)
        assert F(row[2]) == (eta + theta + (m + m1) * eta * tau) * m


def test_recur_json_general(capsys):
    code, out = run(capsys, "recur", "--params", "general", "-N", "5", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["family"] == "general"
    assert obj["tables"]["omega"][1] == "1" and len(obj["coefficients"]) == 6


def test_recur_family_mismatch_exits_1(capsys):
    code, _ = run(capsys, "recur", "--params", "general", "--family", "free", "-N", "5")
    assert code == 1


def test_qops_table1(capsys):
    code, obj = report(capsys, "qops", "verify-table1", "--q", "2/3", "-N", "30")
    assert code == 0 and len(obj["checks"]) == 10


def test_qops_ccom(capsys):
    code, obj = report(capsys, "qops", "verify-ccom", "--family", "bipoisson", "--params", "bipoisson", "-N", "30")
    assert code == 0 and [c["name"] for c in obj["checks"]] == ["ccom_bipoisson", "dual_ccom_bipoisson"]


def test_qops_ccom_needs_params(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qops", "verify-ccom"])
    assert exc.value.code == 2


def test_matrix_verify(capsys):
    code, obj = report(capsys, "matrix", "verify", "--params", "general", "--times", "1,2,3", "-N", "40")
    assert code == 0 and obj["truncation"] == {"N": 40}


def test_matrix_verify_float(capsys):
    code, obj = report(capsys, "matrix", "verify", "--params", "classical", "--float", "-N", "30")
    assert code == 0 and obj["mode"] == "float"
    assert all(isinstance(c["residual"], float) for c in obj["checks"])


def test_matrix_moments(capsys):
    code, out = run(capsys, "matrix", "moments", "--params", "brownian", "--t", "2", "-n", "6")
    obj = json.loads(out)
    assert code == 0 and obj["moments"] == ["1", "0", "2", "0", "12", "0", "120"]


def test_quad_rule_csv(capsys):
    code, out = run(capsys, "quad", "--params", "brownian", "--t", "1", "-M", "2")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["node", "weight"]
    assert [round(float(r[0]), 12) for r in rows[1:]] == [-1.0, 1.0]


def test_quad_martingale(capsys):
    code, obj = report(capsys, "quad", "martingale", "--params", "qmeixner", "--s", "1", "--t", "2",
                       "-n", "8", "-M", "40")
    assert code == 0 and obj["passed"]


@pytest.mark.parametrize("name", ["brownian", "qmeixner", "bipoisson", "free", "classical"])
def test_verify_all_presets(capsys, name):
    code, obj = report(capsys, "verify-all", "--params", name, "-N", "40")
    assert code == 0 and obj["passed"] and obj["schema"] == SCHEMA_ID
    assert "elapsed_s" not in obj


def test_verify_all_covers_suites(capsys):
    _, obj = report(capsys, "verify-all", "--params", "qmeixner", "--timing")
    names = {c["name"] for c in obj["checks"]}
    for want in ("admissibility", "round_trip", "chain_identities", "eq1_eq5", "closed_form_qmeixner",
                 "table1", "operator_ccom_qmeixner", "matrix_ccom", "matrix_quadratic",
                 "moments_low_order", "quadrature_gram_t1", "kernel_martingale"):
        assert want in names
    assert obj["elapsed_s"] >= 0


def test_verify_all_failure_exits_1(capsys, pfile):
    # sigma tau = 1 leaves the engine's domain
    code, obj = report(capsys, "verify-all", "--params", pfile(q="-1/2", sigma=1, tau=1), "-N", "10", "-M", "5")
    assert code == 1 and not obj["passed"]


def test_byte_stable(capsys):
    _, a = run(capsys, "verify-all", "--params", "bipoisson", "-N", "20", "-M", "10")
    _, b = run(capsys, "verify-all", "--params", "bipoisson", "-N", "20", "-M", "10")
    assert a == b


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout = run(capsys, "qops", "verify-table1", "--q=-1/2", "--out", str(out))
    assert code == 0 and stdout == ""
    jsonschema.validate(json.loads(out.read_text()), REPORT_SCHEMA)


@pytest.mark.parametrize("argv", [
    [],
    ["nope"],
    ["params"],
    ["params", "--params", "no-such-preset"],
    ["regression", "--params", "brownian", "--times", "1,2"],
    ["regression", "--params", "brownian", "--times", "1,x,3"],
    ["recur", "--params", "brownian", "--family", "bogus"],
    ["verify-all", "--params", "brownian", "--exact", "--float"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "harnesslab", "params", "--params", "brownian"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["families"]
    proc = subprocess.run([sys.executable, "-m", "harnesslab"], capture_output=True, text=True)
    assert proc.returncode == 2
