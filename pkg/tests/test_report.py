import json

from primefrac.report import ReportDocument, emit, wrap_digits


def test_json_key_order():
    doc = ReportDocument("u", "0.43", -2, 10, "all-primes", "10000", [[1, 0.5]])
    out = emit(doc, "json").decode()
    assert out == (
        '{"name": "u", "digits": "0.43", "error_exponent": -2, "terms_used": 10, '
        '"family": "all-primes", "bound": "10000", "series": [[1, 0.5]]}\n'
    )


def test_empty_profile_json():
    data = json.loads(emit(ReportDocument("mu:u"), "json"))
    assert data["series"] == [] and data["digits"] is None and data["error_exponent"] is None


def test_list_is_array():
    out = json.loads(emit([ReportDocument("a"), ReportDocument("b")], "json"))
    assert [d["name"] for d in out] == ["a", "b"]


def test_csv_records_and_series():
    rows = emit([ReportDocument("u_4", "1.4e-1", -2), ReportDocument("u_6", "4.3e-2", -3)], "csv").decode()
    assert rows.splitlines() == [
        "name,digits,error_exponent,terms_used,family,bound",
        "u_4,1.4e-1,-2,,,",
        "u_6,4.3e-2,-3,,,",
    ]
    series = emit(ReportDocument("delta:u", series=[[1, 2.5], [2, 2.25]]), "csv").decode()
    assert series.splitlines() == ["n,value", "1,2.5", "2,2.25"]


def test_text_wraps_at_fifty():
    digits = "0." + "1234567890" * 12
    lines = wrap_digits(digits)
    assert lines[0] == "0." + "1234567890" * 5
    assert len(lines) == 3 and len(lines[2].strip()) == 20
    text = emit(ReportDocument("u", digits, -120), "text").decode()
    assert "error bound: 1e-120" in text


def test_text_scientific_keeps_exponent():
    lines = wrap_digits("4." + "3" * 60 + "e-2")
    assert lines[-1].endswith("e-2")
    assert lines[0] == "4." + "3" * 50
