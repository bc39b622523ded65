"""Command-line front end: ``twistq <subcommand> ...``.

Exit status: 0 success, 1 a verdict came out false, 2 input error,
3 an internal consistency check failed.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import jsonio
from .cartan import MINIMAL_TOKENS, CartanData, InadmissibleType, cartan_data
from .classify import (A22FactorError, OutOfScope, check_leftover_condition, factor_a22,
                       in_Lambda, in_r_mu, is_dominant_coweight, is_dominant_lweight,
                       leq_weight, mu_report)
from .expr import ParseError, parse_coweight, parse_lweight, parse_param
from .lweight import (NotFactorable, coproduct_hw, lw_degree, lw_eval, lw_value0,
                      lw_value_inf, shift_lweight, specialize_u1)
from .qchar import (UnsupportedQCharacter, borel_qchar, placeholder_chi, qc_mul,
                    qc_simple)
from .relcheck import CHECKS, UnknownCheck, run_suite

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

Result = Tuple[int, str, Dict[str, Any]]


class InputError(ValueError):
    pass


def _cd(args: argparse.Namespace) -> CartanData:
    if not args.type:
        raise InputError("--type is required for this command")
    return cartan_data(args.type)


def _lweight(args: argparse.Namespace, src: str):
    cd = _cd(args)
    return lw_eval(parse_lweight(src, cd))


def _weight(src: str, cd: CartanData):
    parts = [p for p in src.split(",")]
    if len(parts) != len(cd.I0):
        raise InputError(f"weight needs {len(cd.I0)} comma-separated entries")
    return tuple(parse_param(p, cd) for p in parts)


# handlers

def cmd_cartan(args: argparse.Namespace) -> Result:
    token = args.token or args.type
    if not token:
        raise InputError("cartan needs a type token")
    return EXIT_OK, "cartan", jsonio.cartan_doc(cartan_data(token))


def cmd_eval(args: argparse.Namespace) -> Result:
    cd = _cd(args)
    m = parse_lweight(args.expr, cd)
    x = lw_eval(m)
    return EXIT_OK, "eval", {"monomial": jsonio.monomial_doc(m), "lweight": jsonio.lweight_doc(x),
                             "text": str(x)}


def cmd_degree(args: argparse.Namespace) -> Result:
    x = _lweight(args, args.expr)
    rep = mu_report(x)
    return EXIT_OK, "degree", {
        "type": x.ctype,
        "degree": list(lw_degree(x)),
        "value0": jsonio.weight_doc(lw_value0(x)),
        "value_inf": jsonio.weight_doc(lw_value_inf(x)),
        "in_lambda": rep.verdict,
        "mu": list(rep.certificate) if rep.verdict else None,
        "notes": rep.notes,
    }


def _report(rep, name: str) -> Result:
    return (EXIT_OK if rep.verdict else EXIT_FALSE), "report", jsonio.report_doc(rep, name)


def cmd_classify(args: argparse.Namespace) -> Result:
    cd = _cd(args)
    what = args.what
    if what == "lambda":
        if args.mu is None:
            raise InputError("classify lambda needs --mu")
        mu = parse_coweight(args.mu, cd)
        lam = in_Lambda(cd, mu)
        dom = is_dominant_coweight(cd, mu)
        lam.extra["dominant"] = dom.verdict
        return _report(lam, "classify lambda")
    if what == "order":
        if len(args.exprs) != 2:
            raise InputError("classify order needs two weights w1 w2")
        w1, w2 = (_weight(s, cd) for s in args.exprs)
        return _report(leq_weight(cd, w1, w2), "classify order")
    if len(args.exprs) != 1:
        raise InputError(f"classify {what} needs one expression")
    x = lw_eval(parse_lweight(args.exprs[0], cd))
    if what == "dominant":
        return _report(is_dominant_lweight(x), "classify dominant")
    if what == "rmu":
        if args.mu is None:
            raise InputError("classify rmu needs --mu")
        return _report(in_r_mu(x, parse_coweight(args.mu, cd)), "classify rmu")
    fac = factor_a22(x)
    bad = check_leftover_condition(fac)
    same = fac.product() == x
    from .classify import ClassifyReport
    rep = ClassifyReport(x, bad is None and same, fac,
                         "certificate satisfies the leftover-zero condition" if bad is None
                         else f"zero {bad[0]} violates the condition for pair {bad[1]}",
                         {"reproduces_input": same})
    return _report(rep, "classify a22")


def _qchar_depth(args: argparse.Namespace) -> int:
    if args.depth < 0:
        raise InputError("--depth must be nonnegative")
    return args.depth


def cmd_qchar(args: argparse.Namespace) -> Result:
    depth = _qchar_depth(args)
    mode = args.mode
    if mode == "simple":
        if len(args.exprs) != 1:
            raise InputError("qchar simple needs one expression")
        c = qc_simple(_lweight(args, args.exprs[0]), depth)
    elif mode == "fuse":
        if len(args.exprs) != 2:
            raise InputError("qchar fuse needs two expressions")
        c = qc_mul(qc_simple(_lweight(args, args.exprs[0]), depth),
                   qc_simple(_lweight(args, args.exprs[1]), depth)).truncate(depth)
    else:
        return cmd_borel(args)
    return EXIT_OK, "qchar", jsonio.qchar_doc(c)


def cmd_borel(args: argparse.Namespace) -> Result:
    depth = _qchar_depth(args)
    cd = _cd(args)
    exprs = getattr(args, "exprs", None) or [args.expr]
    if len(exprs) != 1:
        raise InputError("borel needs one expression")
    if args.mu is None:
        raise InputError("borel needs --mu")
    mu = parse_coweight(args.mu, cd)
    simple = qc_simple(lw_eval(parse_lweight(exprs[0], cd)), depth)
    chi = {i: placeholder_chi(cd, i, depth) for i in cd.I0}
    c = borel_qchar(simple, mu, chi, depth)
    doc = jsonio.qchar_doc(c)
    doc["chi"] = "placeholder sum_{r<=D} [alpha_bar_i^-r]; not an authoritative character"
    return EXIT_OK, "qchar", doc


def cmd_fuse(args: argparse.Namespace) -> Result:
    x = _lweight(args, args.expr1)
    y = _lweight(args, args.expr2)
    deformed = coproduct_hw(x, y)
    fused = specialize_u1(deformed)
    return EXIT_OK, "fuse", {"deformed": jsonio.lweight_doc(deformed),
                             "fused": jsonio.lweight_doc(fused), "text": str(fused)}


def cmd_shift(args: argparse.Namespace) -> Result:
    cd = _cd(args)
    x = lw_eval(parse_lweight(args.expr, cd))
    if args.mu is None or args.param is None:
        raise InputError("shift needs --mu and --param")
    mu = parse_coweight(args.mu, cd)
    a = parse_param(args.param, cd)
    y = shift_lweight(x, mu, a)
    return EXIT_OK, "shift", {"input": jsonio.lweight_doc(x), "output": jsonio.lweight_doc(y),
                              "degree_in": list(lw_degree(x)), "degree_out": list(lw_degree(y)),
                              "text": str(y)}


def cmd_check(args: argparse.Namespace) -> Result:
    scope = [s for s in args.suite.split(",") if s] if args.suite else []
    if args.type in (None, "all"):
        types: Sequence[str] = MINIMAL_TOKENS
    else:
        types = [t for t in args.type.split(",")]
    if args.window < 1:
        raise InputError("--window must be positive")
    rep = run_suite(scope, types, window=args.window)
    return (EXIT_OK if rep.passed else EXIT_FALSE), "suite", jsonio.suite_doc(rep)


def cmd_run(args: argparse.Namespace) -> Result:
    try:
        import tomllib
    except ImportError:  # Python < 3.11
        import tomli as tomllib
    with open(args.file, "rb") as fh:
        cfg = tomllib.load(fh)
    shared = cfg.get("type")
    docs = []
    worst = EXIT_OK
    for k, entry in enumerate(cfg.get("command", [])):
        argv = entry.get("args") if isinstance(entry, dict) else None
        if argv is None and isinstance(entry, dict) and "line" in entry:
            argv = shlex.split(entry["line"])
        if not isinstance(argv, list) or not argv:
            raise InputError(f"command #{k} needs an 'args' list or a 'line' string")
        argv = [str(a) for a in argv]
        if shared and "--type" not in argv and argv[0] != "cartan":
            argv += ["--type", shared]
        if "depth" in cfg and "--depth" not in argv and argv[0] in ("qchar", "borel"):
            argv += ["--depth", str(cfg["depth"])]
        code, kind, doc = execute(argv)
        worst = max(worst, code)
        docs.append({"args": argv, "exit": code, "kind": kind, "result": doc})
    return worst, "batch", {"type": shared, "commands": docs}


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", help="twisted type token, e.g. A2-2, A4-2, D4-3")
    common.add_argument("--json", action="store_true", help="emit a JSON document")
    common.add_argument("--depth", type=int, default=6, help="series truncation depth")
    common.add_argument("--window", type=int, default=12, help="delta coefficient window")

    p = argparse.ArgumentParser(prog="twistq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cartan", parents=[common], help="Cartan data of a twisted type")
    s.add_argument("token", nargs="?")
    s.set_defaults(func=cmd_cartan)

    for name, func, help_ in (("eval", cmd_eval, "evaluate a generator monomial"),
                              ("degree", cmd_degree, "degree, values at 0 and infinity")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("expr")
        s.set_defaults(func=func)

    s = sub.add_parser("classify", parents=[common], help="classification predicates")
    s.add_argument("what", choices=["lambda", "dominant", "rmu", "order", "a22"])
    s.add_argument("exprs", nargs="*")
    s.add_argument("--mu", help="coweight m1,m2,... in I0 order")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("qchar", parents=[common], help="q-characters")
    s.add_argument("mode", choices=["simple", "fuse", "borel"])
    s.add_argument("exprs", nargs="+")
    s.add_argument("--mu", help="coweight for borel")
    s.set_defaults(func=cmd_qchar)

    s = sub.add_parser("fuse", parents=[common], help="highest l-weight of a fusion product")
    s.add_argument("expr1")
    s.add_argument("expr2")
    s.set_defaults(func=cmd_fuse)

    s = sub.add_parser("shift", parents=[common], help="shift map by a coweight")
    s.add_argument("expr")
    s.add_argument("--mu")
    s.add_argument("--param", help="spectral parameter a")
    s.set_defaults(func=cmd_shift)

    s = sub.add_parser("borel", parents=[common], help="restriction q-character identity")
    s.add_argument("expr")
    s.add_argument("--mu")
    s.set_defaults(func=cmd_borel)

    s = sub.add_parser("check", parents=[common], help="run relation check suites")
    s.add_argument("--suite", default=",".join(sorted(CHECKS)))
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("run", parents=[common], help="run a batch of commands from TOML")
    s.add_argument("file")
    s.set_defaults(func=cmd_run)
    return p


INPUT_ERRORS = (InputError, ParseError, InadmissibleType, NotFactorable, OutOfScope,
                A22FactorError, UnsupportedQCharacter, UnknownCheck, ValueError, IndexError,
                TypeError, OSError)


def execute(argv: Sequence[str]) -> Result:
    """Parse and dispatch one command without printing."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_INPUT
        return (EXIT_OK if code == 0 else EXIT_INPUT), "error", {
            "code": "cli.usage", "message": "invalid command line"}
    return _dispatch(args)


def _error_doc(exc: BaseException) -> Dict[str, Any]:
    mod = type(exc).__module__
    if not mod.startswith("twistq"):
        # builtin exception class: qualify by the innermost twistq frame that raised it
        tb, where = exc.__traceback__, "cli"
        while tb is not None:
            name = tb.tb_frame.f_globals.get("__name__", "")
            if name.startswith("twistq."):
                where = name
            tb = tb.tb_next
        mod = where
    mod = mod.rsplit(".", 1)[-1]
    doc: Dict[str, Any] = {"code": f"{mod}.{type(exc).__name__}", "message": str(exc)}
    if isinstance(exc, ParseError):
        doc["offset"] = exc.offset
    return doc


def _dispatch(args: argparse.Namespace) -> Result:
    try:
        return args.func(args)
    except AssertionError as exc:
        return EXIT_INTERNAL, "error", _error_doc(exc)
    except INPUT_ERRORS as exc:
        return EXIT_INPUT, "error", _error_doc(exc)


def render_pretty(doc: Any, indent: int = 0) -> str:
    """Human-readable rendering of a JSON document (same content, indented)."""
    pad = "  " * indent
    lines: List[str] = []
    if isinstance(doc, dict):
        for k in sorted(doc):
            v = doc[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
    elif isinstance(doc, list):
        for v in doc:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
    else:
        lines.append(pad + _scalar_text(doc))
    return "\n".join(lines)


def _scalar_text(v: Any) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) and exc.code == 0 else EXIT_INPUT
    code, kind, doc = _dispatch(args)
    envelope = {"schema_version": jsonio.SCHEMA_VERSION, "kind": kind, "exit": code,
                "result": doc}
    if kind == "error":
        print(f"error[{doc['code']}]: {doc['message']}", file=sys.stderr)
        if args.json:
            print(jsonio.dumps(envelope))
        return code
    if args.json:
        print(jsonio.dumps(envelope))
    else:
        print(render_pretty(doc))
    return code


if __name__ == "__main__":
    sys.exit(main())
