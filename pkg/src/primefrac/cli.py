"""Command-line front end: ``primefrac <command> ...``.

Every command prints a report (JSON by default) on stdout.  Failures print
``{"error": ..., "message": ...}`` on stderr and exit nonzero.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from . import analysis
from .cache import CorruptCacheError, cached_quotients
from .cfrac import ContinuedFraction, denominators, evaluate, expand_real, read_digit_file
from .exactnum import DomainError
from .primes import Kind, PrimeFamily, ResourceLimitError, family_quotients
from .report import FORMATS, ReportDocument, emit

FAMILIES = {
    "all-primes": ("u", Kind.ALL_PRIMES),
    "twin": ("u_2", Kind.TWIN),
    "dtwin": ("u_d", Kind.DTWIN),
    "m2p1": ("u_q", Kind.QUAD_M2P1),
    "fi": ("u_FI", Kind.FRIEDLANDER_IWANIEC),
    "mersenne": ("u_M", Kind.MERSENNE),
    "primorial-plus": ("u_r+", Kind.PRIMORIAL_PLUS),
    "primorial-minus": ("u_r-", Kind.PRIMORIAL_MINUS),
}
ALIASES = {"u": "all-primes", "u2": "twin", "ud": "dtwin", "uq": "m2p1", "ufi": "fi",
           "um": "mersenne", "ur+": "primorial-plus", "ur-": "primorial-minus"}
DEFAULT_LIMITS = {
    Kind.ALL_PRIMES: 10**4,
    Kind.TWIN: 10**4,
    Kind.DTWIN: 10**8,
    Kind.QUAD_M2P1: 10**8,
    Kind.MERSENNE: 607,
    Kind.PRIMORIAL_PLUS: 1021,
    Kind.PRIMORIAL_MINUS: 1021,
}
DEFAULT_DIGITS = 50
TABLE1_LIMIT = 10**8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _integer(text: str) -> int:
    """Accept ``10000``, ``1e8`` or ``10**8``."""
    text = text.strip()
    if "**" in text:
        base, _, exp = text.partition("**")
        return int(base) ** int(exp)
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _digits(text: str):
    return "all" if text == "all" else _integer(text)


def _add_family_options(p):
    p.add_argument("family", help="family name (all-primes, twin, dtwin, m2p1, fi, mersenne, primorial-plus, primorial-minus)")
    p.add_argument("--limit", type=_integer, help="prime or value bound")
    p.add_argument("--d", type=_integer, default=6, help="gap for dtwin")
    p.add_argument("--m-max", type=_integer, default=100)
    p.add_argument("--n-max", type=_integer, default=10)
    p.add_argument("--max-exponent", type=_integer, help="Mersenne exponent bound")
    p.add_argument("--max-r", type=_integer, help="primorial base bound")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--cache-dir", type=Path, help="overrides PRIMEFRAC_CACHE")
    common.add_argument("--no-cache", action="store_true", help="regenerate quotient streams")

    parser = _Parser(prog="primefrac", description="Continued fractions built from prime families.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="evaluate a prime-family constant")
    _add_family_options(p)
    p.add_argument("--digits", type=_digits, default=DEFAULT_DIGITS, help="places to print, or 'all' certified")

    p = sub.add_parser("table1", parents=[common], help="u_d for even gaps d")
    p.add_argument("--d", type=_integer, help="a single gap")
    p.add_argument("--d-max", type=_integer, default=50)
    p.add_argument("--limit", type=_integer, default=TABLE1_LIMIT)
    p.add_argument("--digits", type=_integer, default=DEFAULT_DIGITS, help="significant digits")

    p = sub.add_parser("profile", parents=[common], help="per-convergent diagnostics")
    p.add_argument("kind", choices=("delta", "khinchin", "levy", "mu", "dr"))
    _add_family_options(p)
    p.add_argument("--n", type=_integer, help="last index")

    p = sub.add_parser("predict", parents=[common], help="conjectured counts and fits")
    p.add_argument("kind", choices=("hl", "gaps", "wagstaff"))
    p.add_argument("--family", default="twin", help="hl family: twin, m2p1 or fi")
    p.add_argument("--x", type=_integer, nargs="+", help="hl scales")
    p.add_argument("--d-max", type=_integer, default=20)
    p.add_argument("--limit", type=_integer, default=10**7, help="prime bound for actual gap data")
    p.add_argument("--exponents", type=Path, help="file of Mersenne exponents (default: shipped list)")

    p = sub.add_parser("expand", parents=[common], help="continued fraction of a decimal in a file")
    p.add_argument("digitfile", type=Path)
    p.add_argument("--max-terms", type=_integer, default=1000)

    p = sub.add_parser("constants", parents=[common], help="reference constants")
    p.add_argument("name", choices=analysis.CONSTANT_NAMES)
    p.add_argument("--digits", type=_integer, default=10)
    return parser


def _family(args) -> PrimeFamily:
    name = ALIASES.get(args.family, args.family)
    if name not in FAMILIES:
        raise DomainError(f"unknown family {args.family!r}")
    kind = FAMILIES[name][1]
    if kind is Kind.FRIEDLANDER_IWANIEC:
        if args.limit is not None:
            return PrimeFamily(kind, args.limit)
        return PrimeFamily.friedlander_iwaniec(args.m_max, args.n_max)
    if kind is Kind.MERSENNE:
        bound = args.max_exponent or args.limit or DEFAULT_LIMITS[kind]
    elif kind in (Kind.PRIMORIAL_PLUS, Kind.PRIMORIAL_MINUS):
        bound = args.max_r or args.limit or DEFAULT_LIMITS[kind]
    else:
        bound = args.limit or DEFAULT_LIMITS[kind]
    return PrimeFamily(kind, bound, args.d if kind is Kind.DTWIN else 2)


def _label(family: PrimeFamily) -> str:
    if family.kind is Kind.DTWIN:
        return f"u_{family.d}"
    return FAMILIES[family.kind.value][0]


def _stream(family: PrimeFamily, args):
    return cached_quotients(family, args.cache_dir, use_cache=not args.no_cache)


def _cmd_eval(args):
    family = _family(args)
    stream = _stream(family, args)
    cf = ContinuedFraction.from_stream(stream)
    res = evaluate(cf, 1 if args.digits == "all" else args.digits, exhaust=True)
    places = max(res.certified_digits, 1) if args.digits == "all" else args.digits
    if args.digits == "all" or places > res.value.certified_digits:
        text = evaluate(cf, places, exhaust=True).value
    else:
        text = res.value
    error = -min(places, res.certified_digits)
    return ReportDocument(_label(family), text.digits, error, res.terms_used, family.describe(), family.bound_text())


def table1_row(d: int, limit: int, significant: int, args=None) -> ReportDocument:
    family = PrimeFamily.dtwin(d, limit)
    stream = _stream(family, args) if args is not None else family_quotients(family)
    cf = ContinuedFraction.from_stream(stream)
    places = significant + 5
    while True:
        res = evaluate(cf, places)
        try:
            text = res.value.scientific(significant)
            break
        except DomainError:
            if res.certified_digits < places:
                raise
            places += 10
    exponent = int(text.rpartition("e")[2])
    return ReportDocument(f"u_{d}", text, exponent - (significant - 1), res.terms_used, family.describe(), family.bound_text())


def _cmd_table1(args):
    ds = [args.d] if args.d is not None else list(range(4, args.d_max + 1, 2))
    if any(d < 2 or d % 2 for d in ds):
        raise DomainError("gaps must be even and >= 2")
    rows = [table1_row(d, args.limit, args.digits, args) for d in ds]
    return rows[0] if args.d is not None else rows


def _cmd_profile(args):
    family = _family(args)
    stream = _stream(family, args)
    cf = ContinuedFraction.from_stream(stream)
    size = len(stream)
    if args.kind == "khinchin":
        n = args.n or size
        series = analysis.khinchin_profile(stream.quotients, n)
    elif args.kind == "levy":
        n = args.n or size
        series = analysis.levy_profile(denominators(cf, n), n)
    elif args.kind == "delta":
        n = args.n or max(1, size // 3)
        series = analysis.delta_for(cf, n)
    elif args.kind == "mu":
        n = args.n or size - 1
        series = analysis.sondow_mu(stream.quotients, denominators(cf, n + 1), n)
    else:
        n = args.n or size
        series = analysis.transcendence_statistics("davenport_roth", denominators(cf, n), n)
    return ReportDocument(
        f"{series.label}:{_label(family)}",
        family=family.describe(),
        bound=family.bound_text(),
        terms_used=n,
        series=[[k, v] for k, v in series.points],
    )


def _cmd_predict(args):
    if args.kind == "hl":
        xs = args.x or [10**3, 10**4, 10**5, 10**6]
        rows = []
        for x in xs:
            c = analysis.hl_predictor(args.family, x)
            rows.append([x, c.predicted, c.actual])
        return ReportDocument(f"hl:{args.family}", family=args.family, series=rows)
    if args.kind == "gaps":
        rows = []
        for d in range(2, args.d_max + 1, 2):
            g = analysis.gap_predictors(d, args.limit)
            rows.append([d, g.shanks, g.wolf, g.ud_approx, g.first_occurrence, g.ud_actual])
        return ReportDocument("gaps", bound=str(args.limit), series=rows)
    exps = None
    if args.exponents is not None:
        exps = [int(t) for t in args.exponents.read_text().split("\n") if t.strip() and not t.startswith("#")]
    exps = exps or analysis.load_mersenne_exponents()
    fit = analysis.wagstaff_fit(exps)
    series = [[n, math.log(p), fit.slope * n + fit.intercept] for n, p in enumerate(exps, start=1)]
    return [
        ReportDocument("wagstaff:slope", f"{fit.slope:.6f}", -6, fit.count),
        ReportDocument("wagstaff:intercept", f"{fit.intercept:.6f}", -6, fit.count),
        ReportDocument("wagstaff:points", terms_used=fit.count, series=series),
    ]


def _cmd_expand(args):
    value = read_digit_file(args.digitfile)
    res = expand_real(value, args.max_terms)
    terms = res.certified_terms
    return ReportDocument(
        f"expand:{args.digitfile.name}",
        value.digits if len(value.digits) <= 80 else None,
        None if value.exact else int(value.certified_exponent),
        len(terms),
        bound=res.terminated_reason,
        series=[[k, a] for k, a in enumerate(terms)],
    )


def _cmd_constants(args):
    value = analysis.math_constants(args.name, args.digits)
    return ReportDocument(args.name, value.digits, None if value.exact else int(value.certified_exponent))


COMMANDS = {
    "eval": _cmd_eval,
    "table1": _cmd_table1,
    "profile": _cmd_profile,
    "predict": _cmd_predict,
    "expand": _cmd_expand,
    "constants": _cmd_constants,
}


def run(argv=None):
    """Parse ``argv`` and return the report(s) without printing."""
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args), args.format


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv=None) -> int:
    try:
        reports, fmt = run(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), 2)
    except (DomainError, ResourceLimitError, CorruptCacheError, OSError, ValueError) as exc:
        return _fail(type(exc).__name__, str(exc), 1)
    sys.stdout.buffer.write(emit(reports, fmt))
    sys.stdout.flush()
    return 0
