import json
import subprocess
import sys

import pytest

from primefrac.cfrac import ContinuedFraction, evaluate
from primefrac.cli import main
from primefrac.primes import PrimeFamily, family_quotients


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_all_primes(capsys):
    code, out, _ = run(capsys, "eval", "all-primes", "--limit", "10000", "--digits", "50")
    assert code == 0
    doc = json.loads(out)
    assert doc["digits"].startswith("0.43233208718590286890925379324199996370511089687")
    assert doc["error_exponent"] == -50
    assert doc["terms_used"] == 1229


def test_eval_all_digits_certified(capsys):
    code, out, _ = run(capsys, "eval", "u", "--digits", "all")
    doc = json.loads(out)
    assert doc["error_exponent"] <= -8000
    assert len(doc["digits"]) - 2 == -doc["error_exponent"]


@pytest.mark.slow
def test_eval_uq_reach(capsys):
    code, out, _ = run(capsys, "eval", "m2p1", "--limit", "1e8", "--digits", "all")
    assert json.loads(out)["error_exponent"] <= -11000


def test_eval_single_mersenne(capsys):
    code, out, _ = run(capsys, "eval", "mersenne", "--max-exponent", "2", "--digits", "10")
    assert json.loads(out)["digits"] == "0.3333333333"


def test_table1_d6(capsys):
    code, out, _ = run(capsys, "table1", "--d", "6", "--digits", "50")
    doc = json.loads(out)
    # agrees with the published row except in the final place
    assert doc["digits"][:50] == "4.3413245800886640441937906138426444157119875018764e-2"[:50]
    assert doc["digits"].endswith("e-2")
    assert doc["error_exponent"] == -51


def test_table1_csv(capsys):
    code, out, _ = run(capsys, "table1", "--d-max", "8", "--limit", "1e6", "--digits", "20", "--format", "csv")
    lines = out.splitlines()
    assert lines[0].startswith("name,digits")
    assert [l.split(",")[0] for l in lines[1:]] == ["u_4", "u_6", "u_8"]


def test_profile_delta_and_mu(capsys):
    code, out, _ = run(capsys, "profile", "delta", "mersenne", "--n", "10")
    doc = json.loads(out)
    assert doc["name"] == "delta:u_M" and len(doc["series"]) == 10
    code, out, _ = run(capsys, "profile", "mu", "all-primes", "--n", "100", "--format", "csv")
    assert out.splitlines()[0] == "n,value" and len(out.splitlines()) == 101


def test_profile_khinchin_levy_dr(capsys):
    for kind in ("khinchin", "levy", "dr"):
        code, out, _ = run(capsys, "profile", kind, "twin", "--limit", "1000")
        assert code == 0 and json.loads(out)["series"]


def test_predict(capsys):
    code, out, _ = run(capsys, "predict", "hl", "--x", "1000", "10000")
    rows = json.loads(out)["series"]
    assert [r[2] for r in rows] == [35, 205]
    code, out, _ = run(capsys, "predict", "gaps", "--d-max", "6", "--limit", "1000")
    rows = json.loads(out)["series"]
    assert [r[4] for r in rows] == [3, 7, 23]
    code, out, _ = run(capsys, "predict", "wagstaff")
    docs = json.loads(out)
    assert docs[0]["digits"].startswith("0.385")


def test_expand(capsys, tmp_path):
    f = tmp_path / "half.txt"
    f.write_text("# e\n2.718281828459045235360287471352662497757\n")
    code, out, _ = run(capsys, "expand", str(f))
    terms = [a for _, a in json.loads(out)["series"]]
    assert terms[:9] == [2, 1, 2, 1, 1, 4, 1, 1, 6]


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "L0", "--digits", "11")
    assert json.loads(out)["digits"] == "3.27582291872"


def test_errors_are_json(capsys):
    code, out, err = run(capsys, "eval", "bogus")
    assert code != 0 and out == ""
    assert json.loads(err)["error"] == "DomainError"
    code, out, err = run(capsys, "constants", "C2", "--digits", "12")
    assert code != 0 and "achievable" in json.loads(err)["message"]
    code, out, err = run(capsys, "frobnicate")
    assert code == 2 and json.loads(err)["error"] == "usage"


def test_output_is_reproducible_with_and_without_cache(capsys, tmp_path):
    args = ["eval", "twin", "--limit", "10000", "--digits", "120", "--cache-dir", str(tmp_path)]
    _, cold, _ = run(capsys, *args)
    _, warm, _ = run(capsys, *args)
    _, fresh, _ = run(capsys, *args, "--no-cache")
    assert cold == warm == fresh
    assert (tmp_path / "twin-10000.txt").exists()


def test_digits_reverify_at_higher_precision(capsys):
    code, out, _ = run(capsys, "eval", "fi", "--digits", "60")
    doc = json.loads(out)
    cf = ContinuedFraction.from_stream(family_quotients(PrimeFamily.friedlander_iwaniec(100, 10)))
    assert evaluate(cf, 70).value.digits.startswith(doc["digits"])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "primefrac", "constants", "mR", "--digits", "11"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["digits"] == "0.43233235838"
