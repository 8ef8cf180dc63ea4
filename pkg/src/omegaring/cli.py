"""Command line front end: ``omegaring {norm,chain,gcd,series,matreduce}``.

Every command is a thin wrapper over library calls.  With ``--json`` the
output is a single JSON document ``{"status": "ok", "command": ..., "result":
...}`` or ``{"status": "error", "code": ..., "message": ...}``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable

from .division import DEFAULT_MAX_STAGES, division_chain, gcd_via_chain, ideal_generator
from .errors import AlgebraError, DivisionByZeroError, ParseError
from .laurent import (
    SkewLaurentRing,
    SkewLaurentSeries,
    lift_chain,
    phi_x,
    series_divide_left,
    series_divide_right,
    series_invert_unit,
)
from .matrices import parse_matrix, reduce_matrix, verify_certificate
from .rings import Domain, RingElement
from .ringspec import parse_ring_spec, ring_spec

EXIT_OK = 0
EXIT_ALGEBRA = 1
EXIT_PARSE = 2
EXIT_DIV_ZERO = 3
EXIT_IO = 4
EXIT_VERIFY = 5


class CommandError(Exception):
    def __init__(self, code: str, exit_status: int, message: str) -> None:
        super().__init__(message)
        self.code = code
        self.exit_status = exit_status


class Output:
    """A command's JSON result plus the lines shown in text mode."""

    def __init__(self, result: dict[str, Any], lines: list[str]) -> None:
        self.result = result
        self.lines = lines


def _series_json(f: SkewLaurentSeries) -> dict[str, Any]:
    return {"text": str(f), **f.ring.to_json(f)}


def _element(ring: Domain, text: str) -> RingElement:
    return ring(text)


def _need_domain(ring) -> Domain:
    if isinstance(ring, SkewLaurentRing):
        raise ParseError("this command needs a base ring (int, gauss or polyfp:P)")
    return ring


def _need_series(ring) -> SkewLaurentRing:
    if not isinstance(ring, SkewLaurentRing):
        raise ParseError("series commands need a laurent:<base>:<sigma>:<prec> ring")
    return ring


# -- commands ------------------------------------------------------------------


def cmd_norm(ring, args: argparse.Namespace) -> Output:
    if isinstance(ring, SkewLaurentRing):
        f = ring.parse(args.element)
        value = phi_x(f)
        shown = str(f)
    else:
        a = _element(ring, args.element)
        value = a.norm()
        shown = str(a)
    return Output({"element": shown, "norm": value}, [f"norm({shown}) = {value}"])


def cmd_chain(ring, args: argparse.Namespace) -> Output:
    d = _need_domain(ring)
    a, b = _element(d, args.a), _element(d, args.b)
    ch = division_chain(a, b, args.policy, args.max_stages, stop=args.stop)
    final = ch.final_remainder.norm()
    bound = b.norm()
    result = {
        **ch.to_json(),
        "policy": ch.policy,
        "stages": ch.stages,
        "final_norm": final,
        "divisor_norm": bound,
        "accepted": final < bound,
    }
    lines = []
    rs = ch.remainders()
    for i, step in enumerate(ch.steps):
        lines.append(f"{i + 1}: {rs[i]} = ({rs[i + 1]})*({step.quotient}) + {step.remainder}")
    lines.append(f"norm(r_{ch.stages}) = {final} < norm(b) = {bound}")
    return Output(result, lines)


def cmd_gcd(ring, args: argparse.Namespace) -> Output:
    d = _need_domain(ring)
    elems = [_element(d, t) for t in args.elements]
    if len(elems) == 2:
        g, ch = gcd_via_chain(*elems)
        stages = ch.stages
    else:
        g = ideal_generator(elems)
        stages = None
    result = {"elements": [str(e) for e in elems], "gcd": str(g), "stages": stages}
    return Output(result, [f"gcd = {g}"])


def _division_output(div) -> Output:
    result = {
        "side": div.side,
        "quotient": _series_json(div.quotient),
        "remainder": _series_json(div.remainder),
        "exact": div.exact,
        "certified_nondivisible": div.certified_nondivisible,
    }
    flag = "exact" if div.exact else "certified nondivisible" if div.certified_nondivisible else "inexact"
    lines = [f"u = {div.quotient}", f"v = {div.remainder}", flag]
    return Output(result, lines)


def cmd_series(ring, args: argparse.Namespace) -> Output:
    R = _need_series(ring)
    arity = {"mul": 2, "divr": 2, "divl": 2, "inv": 1, "lift": 2}[args.op]
    if len(args.operands) != arity:
        raise ParseError(f"series {args.op} takes {arity} operand(s), got {len(args.operands)}")
    ops = [R.parse(t) for t in args.operands]
    if args.op == "mul":
        p = ops[0] * ops[1]
        return Output({"product": _series_json(p)}, [str(p)])
    if args.op == "divr":
        return _division_output(series_divide_right(ops[0], ops[1], args.policy))
    if args.op == "divl":
        return _division_output(series_divide_left(ops[0], ops[1], args.policy))
    if args.op == "inv":
        u = series_invert_unit(ops[0])
        return Output({"inverse": _series_json(u)}, [str(u)])
    side = "left" if args.left else "right"
    ch = lift_chain(ops[0], ops[1], args.policy, args.max_stages, side=side)
    problems = ch.verify()
    steps = [{"quotient": _series_json(s.quotient), "remainder": _series_json(s.remainder)} for s in ch.steps]
    result = {
        "side": side,
        "steps": steps,
        "stages": ch.stages,
        "accepted": ch.accepted(),
        "verified": not problems,
    }
    lines = [f"{i}: u = {s.quotient}, v = {s.remainder}" for i, s in enumerate(ch.steps, 1)]
    lines.append(f"{ch.stages} stage(s), " + ("verified" if not problems else "; ".join(problems)))
    if problems:
        raise CommandError("verification", EXIT_VERIFY, "; ".join(problems))
    return Output(result, lines)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def cmd_matreduce(ring, args: argparse.Namespace) -> Output:
    A = parse_matrix(ring, _read_input(args.input))
    cert = reduce_matrix(A, args.max_stages)
    report = verify_certificate(cert)
    if not report:
        raise CommandError("verification", EXIT_VERIFY, f"certificate rejected: {report.message}")
    data = cert.to_json()
    if args.output:
        Path(args.output).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    diag = data["diagonal"]
    rank = sum(1 for e in cert.diagonal_entries() if not e.is_zero())
    result = {
        "diagonal": diag,
        "rank": rank,
        "precision": cert.precision,
        "verification": {"ok": report.ok, "checks": list(report.checks)},
        "output": args.output,
        "certificate": data,
    }
    lines = ["D = diag(" + ", ".join(diag) + ")"]
    lines.append(f"{len(cert.left_ops)} row op(s), {len(cert.right_ops)} column op(s)")
    if cert.precision is not None:
        lines.append(f"precision {cert.precision}")
    lines.append("verified: " + ", ".join(report.checks))
    if args.output:
        lines.append(f"certificate written to {args.output}")
    return Output(result, lines)


COMMANDS: dict[str, Callable[[Any, argparse.Namespace], Output]] = {
    "norm": cmd_norm,
    "chain": cmd_chain,
    "gcd": cmd_gcd,
    "series": cmd_series,
    "matreduce": cmd_matreduce,
}


# -- argument parsing ----------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--ring", default=argparse.SUPPRESS, help="int, gauss, polyfp:P or laurent:<base>:<sigma>:<prec>")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    p.add_argument("--prec", type=int, default=argparse.SUPPRESS, help="override the laurent precision")
    p.add_argument("--max-stages", type=int, default=argparse.SUPPRESS, help="bound on chain length")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="omegaring",
        parents=[common],
        description="Division chains, skew Laurent series and matrix reduction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="norm of an element (phi_x for series)")
    p.add_argument("element")

    p = sub.add_parser("chain", parents=[common], help="division chain of a by b")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--policy", default=None)
    p.add_argument("--stop", choices=("zero", "accept"), default="zero")

    p = sub.add_parser("gcd", parents=[common], help="gcd of two elements, or ideal generator of several")
    p.add_argument("elements", nargs="+")

    p = sub.add_parser("series", parents=[common], help="skew Laurent series operations")
    p.add_argument("op", choices=("mul", "divr", "divl", "inv", "lift"))
    p.add_argument("operands", nargs="+")
    p.add_argument("--policy", default=None)
    p.add_argument("--left", action="store_true", help="lift: build a left chain")

    p = sub.add_parser("matreduce", parents=[common], help="reduce a matrix to diagonal form")
    p.add_argument("input", help="CSV or JSON matrix file, '-' for stdin")
    p.add_argument("-o", "--output", default=None, help="write the certificate JSON here")
    return parser


def _status_for(exc: BaseException) -> tuple[str, int]:
    if isinstance(exc, CommandError):
        return exc.code, exc.exit_status
    if isinstance(exc, DivisionByZeroError):
        return "division-by-zero", EXIT_DIV_ZERO
    if isinstance(exc, ParseError):
        return "parse", EXIT_PARSE
    if isinstance(exc, AlgebraError):
        return "algebra", EXIT_ALGEBRA
    if isinstance(exc, OSError):
        return "io", EXIT_IO
    return "parse", EXIT_PARSE


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Execute one command; returns (exit status, text to print on stdout)."""
    args = build_parser().parse_args(argv)
    as_json = getattr(args, "json", False)
    args.max_stages = getattr(args, "max_stages", DEFAULT_MAX_STAGES)
    try:
        if args.max_stages < 1:
            raise ParseError("--max-stages must be positive")
        ring = parse_ring_spec(getattr(args, "ring", "int"), getattr(args, "prec", None))
        out = COMMANDS[args.command](ring, args)
    except (AlgebraError, CommandError, OSError, ValueError) as exc:
        code, status = _status_for(exc)
        message = str(exc) or type(exc).__name__
        if isinstance(exc, OSError) and exc.filename:
            message = f"{exc.strerror}: {exc.filename}"
        if as_json:
            return status, json.dumps({"status": "error", "code": code, "message": message}, indent=2)
        return status, f"error ({code}): {message}"
    if as_json:
        doc = {"status": "ok", "command": args.command, "ring": ring_spec(ring), "result": out.result}
        return EXIT_OK, json.dumps(doc, indent=2)
    return EXIT_OK, "\n".join(out.lines)


def main(argv: list[str] | None = None) -> int:
    status, text = run(argv)
    stream = sys.stdout if status == EXIT_OK or text.lstrip().startswith("{") else sys.stderr
    print(text, file=stream)
    return status


if __name__ == "__main__":
    sys.exit(main())
