"""Command-line interface: ``varform <command> ...``.

Exit codes: 0 success/pass, 1 mathematical fail, 2 usage or parse error,
3 insufficient window or indeterminate result.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Optional

from . import sampling
from .diffpoly import substitute_solution, variational_derivative
from .errors import (
    EmptyExactRangeError,
    InconsistencyError,
    InsufficientPrecisionError,
    ParseError,
    VarformError,
    WindowError,
)
from .laurent import LaurentSeries, compare, format_rational, residue
from .linops import (
    DISC,
    PUNCTURED,
    LinOp,
    adjoint,
    is_self_adjoint,
    linearize_at,
    tangent_cohomology_dims,
)
from .loopspace import (
    Window,
    euler_lagrange_identity_check,
    expand_on_loops,
    symplectic_closedness_check,
)
from .parser import parse_equation, parse_operator_coeffs, parse_series
from .varcalc import helmholtz_check, is_total_derivative, vainberg_tonti

PASS, FAIL, ERROR, INDETERMINATE = "pass", "fail", "error", "indeterminate"
EXIT_CODES = {PASS: 0, FAIL: 1, ERROR: 2, INDETERMINATE: 3}
_SEVERITY = [PASS, FAIL, INDETERMINATE, ERROR]


@dataclass
class Report:
    command: str
    status: str
    payload: dict = field(default_factory=dict)
    exit_code: Optional[int] = None

    def code(self) -> int:
        if self.exit_code is not None:
            return self.exit_code
        return EXIT_CODES[self.status]

    def to_json(self) -> dict:
        return {"command": self.command, "status": self.status, "payload": self.payload}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2)
        lines = [f"{self.command}: {self.status}"]
        lines += _text_lines(self.payload, "  ")
        return "\n".join(lines)


def _text_lines(obj, indent: str) -> List[str]:
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                out.append(f"{indent}{k}:")
                out += _text_lines(v, indent + "  ")
            else:
                out.append(f"{indent}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                out.append(f"{indent}-")
                out += _text_lines(v, indent + "  ")
            else:
                out.append(f"{indent}- {_scalar(v)}")
    return out


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


# --- command bodies -------------------------------------------------------
# each takes (item_text, args) and returns (status, payload)


def _eq(text):
    return parse_equation(text).poly


def _op(text) -> LinOp:
    return LinOp(parse_operator_coeffs(text))


def _op_json(L: LinOp) -> dict:
    return {"coeffs": [str(c) for c in L.coeffs]}


def cmd_delta(text, args):
    D = _eq(text)
    return PASS, {"input": str(D), "delta": str(variational_derivative(D))}


def cmd_helmholtz(text, args):
    rep = helmholtz_check(_eq(text))
    return (PASS if rep.passed else FAIL), rep.to_json()


def cmd_lagrangian(text, args):
    D = _eq(text)
    helm = helmholtz_check(D)
    vt = vainberg_tonti(D)
    if helm.passed != vt.verified:
        raise InconsistencyError(
            f"Helmholtz {'passes' if helm.passed else 'fails'} but the Vainberg-Tonti "
            f"Lagrangian is {'verified' if vt.verified else 'not verified'}"
        )
    if vt.verified:
        return PASS, vt.to_json()
    payload = {"lagrangian": None, "verified": False,
               "diagnostic": "Helmholtz conditions fail; not variational",
               "failing_levels": helm.failing_levels()}
    if args.force:
        payload["lagrangian"] = str(vt.lagrangian)
    return FAIL, payload


def cmd_total_derivative(text, args):
    D = _eq(text)
    ok = is_total_derivative(D)
    return (PASS if ok else FAIL), {
        "total_derivative": ok,
        "delta": str(variational_derivative(D)),
        "x_free_residue": format_rational(residue(D.x_free_part())),
    }


def cmd_linearize(text, args):
    D = _eq(text)
    gamma = parse_series(args.at)
    resid = substitute_solution(D, gamma)
    verdict = compare(resid, LaurentSeries())
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        L = linearize_at(D, gamma, check=False)
    if verdict is False:
        print(f"warning: {args.at} does not solve the equation; D(gamma) = {resid}", file=sys.stderr)
    return PASS, {"operator": _op_json(L), "residual": str(resid), "is_solution": verdict}


def cmd_adjoint(text, args):
    L = _op(text)
    return PASS, {"operator": _op_json(L), "adjoint": _op_json(adjoint(L))}


def cmd_self_adjoint(text, args):
    L = _op(text)
    ok = is_self_adjoint(L)
    return (PASS if ok else FAIL), {"self_adjoint": ok, "operator": _op_json(L),
                                    "adjoint": _op_json(adjoint(L))}


def cmd_action(text, args):
    from .varcalc import quadratic_action

    L = _op(text)
    return PASS, {"action": str(quadratic_action(L)), "self_adjoint": is_self_adjoint(L)}


def cmd_tangent(text, args):
    if args.op:
        L = _op(args.op)
    else:
        if args.at is None:
            raise _Usage("tangent needs an equation with --at, or --op")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            L = linearize_at(_eq(text), parse_series(args.at))
    space = DISC if args.space == "disc" else PUNCTURED
    dims = tangent_cohomology_dims(L, space, args.window)
    payload = {
        "operator": _op_json(L),
        "space": args.space,
        "h0": dims.h0,
        "h1": dims.h1,
        "window": [dims.window_used.low, dims.window_used.high],
        "stabilized": dims.stabilized,
    }
    return (PASS if dims.stabilized else INDETERMINATE), payload


def _window(args) -> Window:
    if ":" not in args.window:
        raise ValueError(f"window must look like LOW:HIGH, got {args.window!r}")
    try:
        lo, hi = (int(v) for v in args.window.split(":"))
    except ValueError:
        raise ValueError(f"window must look like LOW:HIGH, got {args.window!r}") from None
    return Window(lo, hi)


def cmd_expand(text, args):
    D = _eq(text)
    exp = expand_on_loops(D, _window(args))
    w = exp.window
    payload = {"window": {"low": w.low, "high": w.high,
                          "exact_low": w.exact_low, "exact_high": w.exact_high}}
    if args.coeff is not None:
        payload["coeff"] = {"n": args.coeff, "poly": str(exp.coeff(args.coeff))}
    else:
        payload["coeffs"] = [{"n": n, "poly": str(p)} for n, p in exp.coeffs.items()]
    return PASS, payload


def cmd_symplectic(text, args):
    rep = symplectic_closedness_check(_eq(text), _window(args), all_pairs=args.all_pairs)
    if rep.checked_pairs == 0:
        return INDETERMINATE, rep.to_json()
    return (PASS if rep.passed else FAIL), rep.to_json()


def cmd_el_check(text, args):
    rep = euler_lagrange_identity_check(_eq(text), _window(args))
    if not rep.checked:
        return INDETERMINATE, rep.to_json()
    return (PASS if rep.passed else FAIL), rep.to_json()


def cmd_residue(text, args):
    return PASS, {"series": str(parse_series(text)),
                  "residue": format_rational(residue(parse_series(text)))}


def cmd_battery(text, args):
    """Helmholtz vs closedness agreement on a seeded random battery."""
    rng = sampling.rng_from(args.seed)
    win = _window(args)
    rows = []
    disagreements = 0
    for kind, D in sampling.theorem_battery(rng, args.count):
        h = helmholtz_check(D).passed
        c = symplectic_closedness_check(D, win).passed
        disagreements += h != c
        rows.append({"kind": kind, "equation": str(D), "helmholtz": h, "closed": c})
    return (PASS if not disagreements else FAIL), {"seed": args.seed, "disagreements": disagreements,
                                                   "equations": rows}


class _Usage(Exception):
    pass


# --- argument parsing -----------------------------------------------------


def _global_opts(parser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--format", choices=["text", "json"],
                        default=default if suppress else "text")
    parser.add_argument("--seed", type=int, default=default if suppress else sampling.DEFAULT_SEED)
    parser.add_argument("--file", default=default,
                        help="read one input per line (# starts a comment)")


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="varform", description="Variational calculus on the formal punctured disc.")
    _global_opts(p, suppress=False)
    sub = p.add_subparsers(dest="command", parser_class=_ArgParser)
    sub.required = True

    def add(name, func, positional="equation", help=None):
        sp = sub.add_parser(name, help=help)
        _global_opts(sp, suppress=True)
        if positional:
            sp.add_argument(positional, nargs="?")
        sp.set_defaults(func=func, positional=positional)
        return sp

    add("delta", cmd_delta, help="variational derivative")
    add("helmholtz", cmd_helmholtz, help="Helmholtz integrability conditions")
    sp = add("lagrangian", cmd_lagrangian, help="Vainberg-Tonti Lagrangian")
    sp.add_argument("--force", action="store_true", help="print the Lagrangian even if unverified")
    add("total-derivative", cmd_total_derivative)
    sp = add("linearize", cmd_linearize)
    sp.add_argument("--at", required=True, help="solution as a Laurent series")
    for name, func in (("adjoint", cmd_adjoint), ("self-adjoint", cmd_self_adjoint),
                       ("action", cmd_action)):
        sp = add(name, func, positional=None)
        sp.add_argument("--op", help="operator coefficients a0; a1; ...")
    sp = add("tangent", cmd_tangent)
    sp.add_argument("--at")
    sp.add_argument("--op")
    sp.add_argument("--space", choices=["disc", "punctured"], default="disc")
    sp.add_argument("--window", type=int, default=16)
    sp = add("expand", cmd_expand)
    sp.add_argument("--window", required=True, help="LOW:HIGH")
    sp.add_argument("--coeff", type=int)
    sp = add("symplectic", cmd_symplectic)
    sp.add_argument("--window", required=True)
    sp.add_argument("--all-pairs", action="store_true",
                    help="also compare pairs outside the exact range")
    sp = add("el-check", cmd_el_check)
    sp.add_argument("--window", required=True)
    add("residue", cmd_residue, positional="series")
    sp = add("battery", cmd_battery, positional=None)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--window", default="-3:12")
    return p


def _read_items(path: str) -> List[str]:
    with open(path) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    return [ln for ln in lines if ln]


def _run_one(func: Callable, text, args):
    try:
        return func(text, args)
    except (EmptyExactRangeError, InsufficientPrecisionError, WindowError) as exc:
        return INDETERMINATE, {"error": str(exc)}
    except ParseError as exc:
        return ERROR, {"error": str(exc)}
    except InconsistencyError as exc:
        return FAIL, {"error": str(exc), "internal_inconsistency": True}
    except VarformError as exc:
        return ERROR, {"error": str(exc)}
    except ValueError as exc:
        return ERROR, {"error": str(exc)}


_VALUE_OPTS = {"--window", "--op", "--at", "--coeff", "--file", "--format", "--seed",
               "--space", "--count"}


def _glue_values(argv: List[str]) -> List[str]:
    # argparse would read "--window -2:10" or "--op '-1; z'" as two flags
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run_command(argv: Optional[List[str]] = None) -> Report:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_glue_values(list(argv)))
    except _Usage as exc:
        return Report("usage", ERROR, {"error": str(exc)})
    name = args.command
    key = args.positional
    if key is None and getattr(args, "op", None) is not None:
        key, single = "op", args.op
    else:
        single = getattr(args, key) if key else None
    needs_input = name not in ("battery",) and not (name == "tangent" and args.op)
    try:
        if args.file:
            items = _read_items(args.file)
        elif single is not None or not needs_input:
            items = [single]
        else:
            raise _Usage(f"{name} needs an input ({key or '--op'}) or --file")
    except (OSError, _Usage) as exc:
        return Report(name, ERROR, {"error": str(exc)})

    results = [_run_one(args.func, text, args) for text in items]
    if len(results) == 1 and not args.file:
        status, payload = results[0]
        return Report(name, status, payload)
    status = max((s for s, _ in results), key=_SEVERITY.index)
    return Report(name, status, {"results": [
        {"input": text, "status": s, **p} for text, (s, p) in zip(items, results)
    ]})


def main(argv: Optional[List[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    report = run_command(argv)
    fmt = "json" if _wants_json(argv) else "text"
    out = report.render(fmt)
    stream = sys.stderr if report.status == ERROR and fmt == "text" else sys.stdout
    print(out, file=stream)
    return report.code()


def _wants_json(argv) -> bool:
    for i, a in enumerate(argv):
        if a == "--format" and i + 1 < len(argv):
            return argv[i + 1] == "json"
        if a == "--format=json":
            return True
    return False


if __name__ == "__main__":
    sys.exit(main())
