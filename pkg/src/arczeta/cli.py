"""Batch command-line front end.

Subcommands cover classification, closed-form tables, and the verification
suites; machine-readable reports are emitted as JSON (validating against the
shipped schema) or CSV for tables.  Exit codes: 0 pass, 1 numerical failure,
2 invalid input, 3 inadmissible parameter.

The default seed comes from ``ARCZETA_SEED`` when set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction

from .errors import (
    ConvergenceError,
    InadmissibleParameterError,
    InvalidParameterError,
    PoleError,
)
from .verify import (
    VerifyReport,
    verify_at_lemma,
    verify_formal_degree,
    verify_prop61,
    verify_S,
    verify_schur_orthogonality,
    verify_T,
    verify_zeta,
)
from .weights import (
    ClosedValue,
    HCParameter,
    ThetaDatum,
    admissible_sweep,
    c_squared,
    classify_theta,
    formal_degree_product,
    weyl_dim,
    zeta_closed,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_INADMISSIBLE = 3

MIN_STATISTICAL_SAMPLES = 10_000

TABLE_FIELDS = [
    "lambda", "case", "p", "q", "c2", "zeta_rational", "zeta_pi_exp",
    "zeta_float", "dim", "formal_degree_product",
]


def _default_seed() -> int:
    return int(os.environ.get("ARCZETA_SEED", "0"))


def _fmt_fraction(x: Fraction) -> str:
    return str(Fraction(x))


def _pair_dict(pair) -> dict:
    return {
        "first": [_fmt_fraction(v) for v in pair.first],
        "second": [_fmt_fraction(v) for v in pair.second],
    }


def _closed_dict(cv: ClosedValue) -> dict:
    return {"rational": str(cv.rational), "pi_exp": cv.pi_exp, "float": float(cv)}


def build_report(command: str, *, lam: HCParameter | None = None,
                 theta: ThetaDatum | None = None, closed: ClosedValue | None = None,
                 report: VerifyReport | None = None, verdict: str | None = None,
                 extra: dict | None = None, wall_time: float = 0.0) -> dict:
    out = {
        "command": command,
        "lambda": [str(e) for e in lam.entries] if lam is not None else None,
        "case": theta.case.value if theta is not None else None,
        "p": theta.p if theta is not None else None,
        "q": theta.q if theta is not None else None,
        "weights": None,
        "closed": _closed_dict(closed) if closed is not None else None,
        "estimate": None,
        "extra": extra or {},
        "verdict": verdict,
        "wall_time": wall_time,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if theta is not None:
        out["weights"] = {
            "Lambda": _pair_dict(theta.Lambda),
            "LambdaDual": _pair_dict(theta.LambdaDual),
            "LambdaPrime": _pair_dict(theta.LambdaPrime),
        }
    if report is not None:
        est = report.estimate
        out["estimate"] = {
            "value": [est.value.real, est.value.imag] if est.value is not None else None,
            "stderr": est.stderr,
            "samples": est.samples,
            "seed": est.seed,
        }
        out["verdict"] = report.verdict
        if report.closed is not None and closed is None:
            out["closed"] = _closed_dict(report.closed)
        out["extra"].update({"rel_err": report.rel_err})
        out["wall_time"] = est.wall_time
    return out


def validate_report(doc: dict) -> None:
    """Validate a report against the shipped schema (needs jsonschema)."""
    import importlib.resources as res

    import jsonschema

    schema = json.loads(res.files("arczeta").joinpath("report_schema.json").read_text())
    jsonschema.validate(doc, schema)


def _emit(doc: dict, out_path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
        print(f"{doc['command']}: {doc.get('verdict')} -> {out_path}")
    else:
        print(text)


def table_rows(n: int, max_entry: Fraction) -> list[dict]:
    rows = []
    for lam in admissible_sweep(n, max_entry):
        theta = classify_theta(lam)
        zc = zeta_closed(theta)
        rows.append({
            "lambda": str(lam),
            "case": theta.case.value,
            "p": theta.p,
            "q": theta.q,
            "c2": str(c_squared(theta)),
            "zeta_rational": str(zc.rational),
            "zeta_pi_exp": zc.pi_exp,
            "zeta_float": float(zc),
            "dim": weyl_dim(lam),
            "formal_degree_product": str(formal_degree_product(lam)),
        })
    return rows


def table_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TABLE_FIELDS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def parse_table_csv(text: str) -> list[dict]:
    """Round-trip parser for the table CSV format."""
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for row in reader:
        parsed = dict(row)
        parsed["p"] = int(row["p"])
        parsed["q"] = int(row["q"])
        parsed["zeta_pi_exp"] = int(row["zeta_pi_exp"])
        parsed["zeta_float"] = float(row["zeta_float"])
        parsed["dim"] = int(row["dim"])
        out.append(parsed)
    return out


def _add_common(sub, *, statistical: bool):
    sub.add_argument("--out", default=None, help="write the JSON report here")
    if statistical:
        sub.add_argument("--samples", type=int, default=1_000_000)
        sub.add_argument("--seed", type=int, default=None)
        sub.add_argument("--workers", type=int, default=1)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arczeta",
        description="closed forms and cross-verified integrals for rank-one unitary groups",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sc = subs.add_parser("classify", help="classify a parameter and print its data")
    sc.add_argument("--lambda", dest="lam", required=True,
                    help="comma list of half-integers, e.g. 3/2,1/2")
    sc.add_argument("--out", default=None)

    st = subs.add_parser("table", help="closed-form table over an admissible sweep")
    st.add_argument("--n", type=int, required=True)
    st.add_argument("--max-entry", default="15/2")
    st.add_argument("--format", choices=["json", "csv"], default="json")
    st.add_argument("--out", default=None)

    ss = subs.add_parser("verify-s", help="scalar domain integral vs closed form")
    ss.add_argument("--p", type=int, required=True)
    ss.add_argument("--q", type=int, required=True)
    ss.add_argument("--kappa", required=True, help="comma list (length p)")
    ss.add_argument("--iota", required=True, help="comma list (length q)")
    ss.add_argument("--s", required=True)
    ss.add_argument("--method", choices=["auto", "quad", "mc"], default="auto")
    _add_common(ss, statistical=True)

    stt = subs.add_parser("verify-t", help="endomorphism scalar vs closed form")
    stt.add_argument("--lambda", dest="lam", required=True)
    stt.add_argument("--s", required=True)
    stt.add_argument("--method", choices=["quad", "mc"], default="quad")
    _add_common(stt, statistical=True)

    sz = subs.add_parser("verify-zeta", help="end-to-end group integral vs closed form")
    sz.add_argument("--lambda", dest="lam", required=True)
    sz.add_argument("--method", choices=["mc", "radial"], default="mc")
    _add_common(sz, statistical=True)

    sp = subs.add_parser("verify-prop61", help="two evaluation routes of the compact matrix coefficient")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--out", default=None)

    sa = subs.add_parser("verify-at", help="hyperbolic transform vs brute-force kernel (exact)")
    sa.add_argument("--max-degree", type=int, default=4)
    sa.add_argument("--out", default=None)

    so = subs.add_parser("verify-schur", help="character orthogonality by Haar sampling")
    so.add_argument("--weights", default="1,0;2,1;2,2;1,0,0;2,1,0",
                    help="semicolon-separated weight lists")
    _add_common(so, statistical=True)

    sf = subs.add_parser("verify-fd", help="formal-degree proportionality (exact)")
    sf.add_argument("--n", type=int, required=True)
    sf.add_argument("--max-entry", default="9/2")
    sf.add_argument("--count", type=int, default=5)
    sf.add_argument("--out", default=None)

    # let values like -1/2,-5/2 pass as option arguments without the = form
    import re

    negative_values = re.compile(r"^-\d[\d/,.\-]*$")
    parser._negative_number_matcher = negative_values
    for action in parser._subparsers._group_actions:
        for sub in action.choices.values():
            sub._negative_number_matcher = negative_values

    return parser


def _parse_fraction_list(text: str) -> list[Fraction]:
    return [Fraction(part.strip()) for part in text.split(",")]


def _run(args) -> int:
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = _default_seed()
    samples = getattr(args, "samples", None)
    if samples is not None and samples < MIN_STATISTICAL_SAMPLES:
        raise InvalidParameterError(
            f"statistical commands need samples >= {MIN_STATISTICAL_SAMPLES}"
        )

    if args.command == "classify":
        t0 = time.perf_counter()
        lam = HCParameter.parse(args.lam)
        theta = classify_theta(lam)
        zc = zeta_closed(theta)
        doc = build_report(
            "classify", lam=lam, theta=theta, closed=zc, verdict="PASS",
            extra={
                "gamma": str(theta.gamma),
                "alphas": [str(a) for a in theta.alphas],
                "betas": [str(b) for b in theta.betas],
                "c2": str(c_squared(theta)),
                "dim": weyl_dim(lam),
                "nonstandard_congruence": theta.nonstandard_congruence,
            },
            wall_time=time.perf_counter() - t0,
        )
        _emit(doc, args.out)
        return EXIT_PASS

    if args.command == "table":
        rows = table_rows(args.n, Fraction(args.max_entry))
        if args.format == "csv":
            text = table_to_csv(rows)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
                print(f"table: {len(rows)} rows -> {args.out}")
            else:
                print(text, end="")
            return EXIT_PASS
        doc = build_report("table", verdict="PASS", extra={"rows": rows})
        _emit(doc, args.out)
        return EXIT_PASS

    if args.command == "verify-s":
        rep = verify_S(args.p, args.q, _parse_fraction_list(args.kappa),
                       _parse_fraction_list(args.iota), Fraction(args.s),
                       samples=samples, seed=seed, workers=args.workers,
                       method=args.method)
        doc = build_report("verify-s", report=rep)
        _emit(doc, args.out)
        return EXIT_PASS if rep.passed else EXIT_FAIL

    if args.command == "verify-t":
        lam = HCParameter.parse(args.lam)
        theta = classify_theta(lam)
        rep = verify_T(theta, Fraction(args.s), samples=samples, seed=seed,
                       workers=args.workers, method=args.method)
        doc = build_report("verify-t", lam=lam, theta=theta, report=rep)
        _emit(doc, args.out)
        return EXIT_PASS if rep.passed else EXIT_FAIL

    if args.command == "verify-zeta":
        lam = HCParameter.parse(args.lam)
        theta = classify_theta(lam)
        rep = verify_zeta(theta, samples=samples, seed=seed,
                          workers=args.workers, method=args.method)
        doc = build_report("verify-zeta", lam=lam, theta=theta, report=rep,
                           extra={"phi_norm2": rep.details.get("phi_norm2")})
        _emit(doc, args.out)
        return EXIT_PASS if rep.passed else EXIT_FAIL

    if args.command == "verify-prop61":
        rep = verify_prop61(trials=args.trials, seed=seed, tol=args.tol)
        doc = build_report("verify-prop61", report=rep, extra={"cases": rep.details["cases"]})
        _emit(doc, args.out)
        return EXIT_PASS if rep.passed else EXIT_FAIL

    if args.command == "verify-at":
        rep = verify_at_lemma(max_degree=args.max_degree)
        doc = build_report("verify-at", report=rep, extra={"monomials": rep.details["monomials"]})
        _emit(doc, args.out)
        return EXIT_PASS if rep.passed else EXIT_FAIL

    if args.command == "verify-schur":
        weights = [[int(x) for x in w.split(",")] for w in args.weights.split(";")]
        rep = verify_schur_orthogonality(weights, samples=samples, seed=seed,
                                         workers=args.workers)
        doc = build_report("verify-schur", report=rep,
                           extra={"rows": rep.details["rows"]})
        _emit(doc, args.out)
        return EXIT_PASS if rep.passed else EXIT_FAIL

    if args.command == "verify-fd":
        lams = admissible_sweep(args.n, Fraction(args.max_entry))
        if len(lams) < args.count:
            raise InvalidParameterError(
                f"sweep produced {len(lams)} parameters; need {args.count} "
                "(increase --max-entry)"
            )
        rep = verify_formal_degree(lams[: args.count])
        doc = build_report("verify-fd", report=rep, extra={"rows": rep.details["rows"]})
        _emit(doc, args.out)
        return EXIT_PASS if rep.passed else EXIT_FAIL

    raise InvalidParameterError(f"unknown command {args.command}")


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except InadmissibleParameterError as exc:
        print(f"inadmissible parameter: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except (InvalidParameterError, PoleError, ConvergenceError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
