"""Report documents and their JSON, CSV and text renderings."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

FORMATS = ("json", "csv", "text")
WRAP = 50  # digits per line in text output


@dataclass(frozen=True)
class ReportDocument:
    """One computed quantity.

    ``error_exponent`` is ``k`` in ``|true - digits| <= 10**k``; None means
    the digits are exact (or there is no digit string).  ``series`` rows are
    ``[n, value, ...]``.
    """

    name: str
    digits: str | None = None
    error_exponent: int | None = None
    terms_used: int | None = None
    family: str | None = None
    bound: str | None = None
    series: list = field(default_factory=list)

    def as_dict(self) -> dict:
        # key order is part of the output format
        return {
            "name": self.name,
            "digits": self.digits,
            "error_exponent": self.error_exponent,
            "terms_used": self.terms_used,
            "family": self.family,
            "bound": self.bound,
            "series": [list(row) for row in self.series],
        }


def _json_value(v):
    if isinstance(v, float) and v != v:
        return None
    return v


def emit(reports: ReportDocument | Sequence[ReportDocument], fmt: str = "json") -> bytes:
    """Render one report (or a list of them) as bytes.

    JSON is a single object for one report and an array otherwise.  CSV
    writes the scalar fields, one record per report; a lone report with a
    series is written as ``n,value`` rows instead.
    """
    single = isinstance(reports, ReportDocument)
    docs = [reports] if single else list(reports)
    if fmt == "json":
        payload = docs[0].as_dict() if single else [d.as_dict() for d in docs]
        return (json.dumps(payload, default=_json_value) + "\n").encode("utf-8")
    if fmt == "csv":
        return _csv(docs, single)
    if fmt == "text":
        return "\n".join(_text(d) for d in docs).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _csv(docs: list[ReportDocument], single: bool) -> bytes:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if single and docs[0].series:
        width = max(len(row) for row in docs[0].series)
        w.writerow(["n", "value"] + [f"value{i}" for i in range(2, width)])
        w.writerows(docs[0].series)
    else:
        keys = ["name", "digits", "error_exponent", "terms_used", "family", "bound"]
        w.writerow(keys)
        for d in docs:
            row = d.as_dict()
            w.writerow(["" if row[k] is None else row[k] for k in keys])
    return buf.getvalue().encode("utf-8")


def wrap_digits(text: str, width: int = WRAP) -> list[str]:
    """Split a decimal string so each line holds ``width`` fractional digits."""
    head, dot, tail = text.partition(".")
    mantissa, e, exp = tail.partition("e")
    if not dot:
        return [text]
    chunks = [mantissa[i : i + width] for i in range(0, len(mantissa), width)] or [""]
    lines = [f"{head}.{chunks[0]}"] + ["  " + c for c in chunks[1:]]
    if e:
        lines[-1] += f"e{exp}"
    return lines


def _text(d: ReportDocument) -> str:
    out = [d.name]
    if d.family is not None:
        out.append(f"  family: {d.family}   bound: {d.bound}")
    if d.terms_used is not None:
        out.append(f"  terms used: {d.terms_used}")
    if d.digits is not None:
        err = "exact" if d.error_exponent is None else f"1e{d.error_exponent}"
        out.append(f"  error bound: {err}")
        out.extend("  " + line for line in wrap_digits(d.digits))
    for row in d.series:
        out.append("  " + "  ".join(str(v) for v in row))
    return "\n".join(out) + "\n"
