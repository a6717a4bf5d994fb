"""Command line entry point.

Exit codes: 0 certificate (or audit) pass, 1 structured failure, 2 invalid
input.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from .arith import INF, ParamTuple, SearchExhausted, is_prime, validate_params
from .exact import format_rational

OK, FAIL, BAD_INPUT = 0, 1, 2

# options whose values may start with "-" (a negative b_1 or u)
_VALUE_OPTS = ("--b", "--u", "--p", "--places")


class InputError(ValueError):
    pass


def _join_values(argv: list[str]) -> list[str]:
    out, k = [], 0
    while k < len(argv):
        a = argv[k]
        if a in _VALUE_OPTS and k + 1 < len(argv):
            out.append(f"{a}={argv[k + 1]}")
            k += 2
        else:
            out.append(a)
            k += 1
    return out


def parse_b(text: str) -> tuple[int, ...]:
    try:
        b = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--b expects comma-separated integers, got {text!r}") from None
    if len(b) != 5:
        raise InputError(f"--b expects five integers, got {len(b)}")
    return b


def parse_u(text: str | None, b) -> Fraction:
    if text is None or text == "auto":
        return ParamTuple.default_u(b)
    try:
        u = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--u expects a rational number or 'auto', got {text!r}") from None
    if u == 0:
        raise InputError("--u must be nonzero")
    return u


def parse_place(text: str):
    if text.lower() in (INF, "infinity", "oo"):
        return INF
    try:
        p = int(text)
    except ValueError:
        raise InputError(f"not a place: {text!r}") from None
    if p < 2 or not is_prime(p):
        raise InputError(f"{p} is not a prime")
    return p


def _params(args) -> ParamTuple:
    b = parse_b(args.b)
    return ParamTuple(b, parse_u(getattr(args, "u", None), b))


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        print(text)


# --- subcommands --------------------------------------------------------------------------

def cmd_group_audit(args) -> int:
    from .audit import group_audit

    rep = group_audit(include_classes=not args.quick)
    f = rep["found"]
    lines = [
        f"|Sp6(F2)| = {f['sp6_order']}",
        f"even forms {f['even_forms']}, odd forms {f['odd_forms']}",
        "stabilizer orders " + ", ".join(f"{k} {v}" for k, v in f["stabilizer_orders"].items()),
        f"orbit-stabilizer {rep['orbit_stabilizer']}, transitive {all(rep['transitive'].values())}",
    ]
    if "ea32_classes" in f:
        lines.append("F2^5 classes " + ", ".join(f"{k} {v}" for k, v in f["ea32_classes"].items()))
        lines.append(f"all sp6 classes satisfy (*)+ and (*)-: {rep['sp6_classes_satisfy_both']}")
    lines.append("PASS" if rep["pass"] else "FAIL")
    _emit(args, rep, "\n".join(lines))
    return OK if rep["pass"] else FAIL


def cmd_classify(args) -> int:
    from .audit import _class_report

    rep = _class_report(args.ambient)
    text = str(rep["count"])
    if args.verbose:
        for k, r in enumerate(rep["classes"], 1):
            text += (
                f"\n  class {k}: orbit {r['orbit_size']}, normalizer {r['normalizer_order']},"
                f" (*)+ {r['star_plus']}, (*)- {r['star_minus']}"
            )
    _emit(args, {"ambient": args.ambient, **rep}, text)
    return OK


def cmd_search(args) -> int:
    from .arith import search_params

    try:
        p = search_params(args.bound, args.seed)
    except SearchExhausted as exc:
        _emit(args, {"status": "fail", "code": "search-exhausted", "detail": str(exc)}, f"FAIL: {exc}")
        return FAIL
    doc = p.to_json()
    _emit(args, doc, f"b = {','.join(map(str, p.b))}\nu = {format_rational(p.u)}")
    return OK


def cmd_construct(args) -> int:
    from .conic import ConstructionError, construct

    p = _params(args)
    try:
        bundle = construct(p.a, p.u)
    except ConstructionError as exc:
        _emit(args, {"status": "fail", "code": exc.code, "detail": str(exc)}, f"FAIL {exc.code}: {exc}")
        return FAIL
    doc = {
        "params": p.to_json(),
        "a6": format_rational(bundle.a6),
        "F": bundle.F.to_text(),
        "g": bundle.g.to_text(),
        "h": bundle.h.to_text(),
        "M": {name: bundle.M.entry(i, j).to_text() for name, (i, j) in _M_ENTRIES.items()},
        "quartic": bundle.quartic.to_text(),
    }
    text = "\n".join(f"{k} = {v}" for k, v in doc.items() if k not in ("params", "M"))
    _emit(args, doc, text)
    return OK


_M_ENTRIES = {"m11": (0, 0), "m12": (0, 1), "m13": (0, 2), "m22": (1, 1), "m23": (1, 2), "m33": (2, 2)}


def _certificate_text(cert) -> str:
    d = cert.to_json()
    g, ar, geo = d["group"], d["arithmetic"], d["geometry"]
    lines = [
        d["quartic"],
        f"b = {','.join(map(str, cert.params.b))}, u = {format_rational(cert.params.u)}",
        f"smooth: {geo['smooth']}",
        "fiber deltas: " + ", ".join(str(f["delta"]) for f in geo["fibers"]),
        f"[0:1:0] on curve: {geo['rational_point']['on_curve']}",
        f"E order {g['order']}: (*)- {g['star_minus']['pass']}, (*)+ {g['star_plus']['pass']}",
        f"places checked: {len(ar['places'])}, all cyclic:"
        f" {all(p['cyclic'] for p in ar['places'])}",
        f"splitting field check: {ar['splitting_field_check']}",
    ]
    for k, v in d["verdicts"].items():
        lines.append(f"{k}: {v}")
    for a in d.get("attempts", []):
        lines.append(f"attempt u = {a['u']}: {a['result']}")
    return "\n".join(lines)


def cmd_certify(args) -> int:
    from .certify import CertificationFailure, CertifyConfig, certify

    p = _params(args)
    places = tuple(parse_place(x) for x in args.places.split(",")) if args.places else ()
    try:
        config = CertifyConfig(args.bound, places, args.retries)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    try:
        cert = certify(p, config)
    except CertificationFailure as exc:
        if "validation" in exc.data:
            text = _validation_text(exc.data["validation"])
        else:
            text = f"FAIL {exc.code}: {exc.detail}"
            for a in exc.data.get("attempts", []):
                text += f"\nattempt u = {a['u']}: {a['result']}"
            if "suggested_u" in exc.data:
                text += "\nsuggested u: " + ", ".join(exc.data["suggested_u"])
        _emit(args, exc.to_json(), text)
        return FAIL
    doc = cert.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    _emit(args, doc, _certificate_text(cert))
    return OK if cert.passed else FAIL


def cmd_check_place(args) -> int:
    from .certify import check_place

    b = parse_b(args.b)
    rep = validate_params(b)
    if not rep.passed:
        _emit(args, {"status": "fail", "validation": rep.to_json()}, _validation_text(rep))
        return FAIL
    place = parse_place(args.p)
    row = check_place(ParamTuple(b, ParamTuple.default_u(b)), place)
    gen = row["generator"]
    text = [
        f"place {place}",
        f"decomposition group order {len(row['decomposition'])}, cyclic {row['cyclic']}",
        f"generator {tuple(gen) if gen is not None else None}",
    ]
    if row["cyclic"]:
        text.append(f"fixed odd forms {len(row['fixed_odd_forms'])}: {row['fixed_odd_forms']}")
    _emit(args, row, "\n".join(text))
    return OK if row["cyclic"] and row.get("fixed_odd_forms") else FAIL


def _validation_text(rep) -> str:
    failures = rep["failures"] if isinstance(rep, dict) else rep.failures
    lines = ["FAIL invalid parameters"]
    for f in failures:
        where = f" at place {f['place']}" if "place" in f else ""
        lines.append(f"  {f['check']}{where}: {f['detail']}")
    return "\n".join(lines)


def cmd_validate(args) -> int:
    rep = validate_params(parse_b(args.b))
    _emit(args, rep.to_json(), "PASS" if rep.passed else _validation_text(rep))
    return OK if rep.passed else FAIL


def cmd_recheck(args) -> int:
    from .certify import recheck

    try:
        with open(args.file) as fh:
            doc = json.load(fh)
        res = recheck(doc)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read certificate {args.file}: {exc}") from None
    text = "\n".join(f"{k}: {v}" for k, v in {**res["verdicts"], **res["consistency"]}.items())
    text += f"\nagrees with stored verdicts: {res['agrees']}"
    _emit(args, res, text)
    ok = res["agrees"] and all(res["verdicts"].values()) and all(res["consistency"].values())
    return OK if ok else FAIL


# --- parser -------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(BAD_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = _Parser(prog="quartic-hasse", description=__doc__.splitlines()[0], parents=[common])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("group-audit", parents=[common], help="recompute the group facts")
    s.add_argument("--quick", action="store_true", help="skip the F2^5 classification")
    s.set_defaults(func=cmd_group_audit)

    s = sub.add_parser("classify-ea32", parents=[common], help="count F2^5 classes")
    s.add_argument("--ambient", choices=("sp6", "u63", "u36"), required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("search-params", parents=[common], help="find a valid tuple b")
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("validate", parents=[common], help="check a tuple b")
    s.add_argument("--b", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("construct", parents=[common], help="build F, g, h, M and the quartic")
    s.add_argument("--b", required=True)
    s.add_argument("--u", default="auto")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("certify", parents=[common], help="build and certify the quartic")
    s.add_argument("--b", required=True)
    s.add_argument("--u", default="auto")
    s.add_argument("--places", default="", help="extra places to check, comma-separated")
    s.add_argument("--bound", type=int, default=100, help="check every prime up to this bound")
    s.add_argument("--retries", type=int, default=1, help="attempts with re-sampled u on a singular quartic")
    s.add_argument("--out", help="write the JSON certificate here")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("check-place", parents=[common], help="decomposition group at one place")
    s.add_argument("--b", required=True)
    s.add_argument("--p", required=True)
    s.set_defaults(func=cmd_check_place)

    s = sub.add_parser("recheck", parents=[common], help="recompute verdicts from a certificate file")
    s.add_argument("file")
    s.set_defaults(func=cmd_recheck)
    return ap


def cli_main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
