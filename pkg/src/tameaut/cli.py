"""Command-line front end: ``tameaut <verb> ...``.

Exit codes: 0 success, 1 a check failed or the operation is impossible for
this input, 2 usage or parse error, 3 only inconclusive outcomes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import approx, suites, textio
from .coeffs import QQ, FieldSpec
from .endo import Endo, compose, conjugate, exact_inverse, filtration, jet_invert
from .errors import (ContextMismatch, FlavorError, InvalidField, NotElementary, ParseError,
                     ShapeError, SpanDeficiency, TameAutError)
from .polyalg import PolyContext, format_poly
from .tameword import (GenWord, expand, height, synth_edge, synth_elementary, synth_nc_elementary,
                       synth_power)
from .torus import singularity_valuation, t_conjugate

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

_USAGE_ERRORS = (ParseError, InvalidField, FlavorError, ContextMismatch, ShapeError,
                 NotElementary)


class UsageError(Exception):
    pass


class Output:
    """Plain text or line-delimited JSON records."""

    def __init__(self, as_json: bool, stream=None):
        self.json = as_json
        self.stream = stream or sys.stdout

    def text(self, s: str):
        if not self.json:
            self.stream.write(s if s.endswith("\n") else s + "\n")

    def record(self, rec: dict, fallback: Optional[str] = None):
        if self.json:
            self.stream.write(json.dumps(rec, sort_keys=True) + "\n")
        elif fallback is not None:
            self.text(fallback)


# input helpers ------------------------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _is_word_text(text: str) -> bool:
    for line in text.splitlines()[1:]:
        s = line.split("#", 1)[0].strip()
        if s:
            return s.startswith(("LIN", "ELEM"))
    return False


def _field(args) -> FieldSpec:
    return FieldSpec.parse(args.field) if args.field else QQ


def _check_globals(args, ctx: PolyContext):
    if args.field and FieldSpec.parse(args.field) != ctx.ring:
        raise UsageError(f"--field {args.field} disagrees with the input header ({ctx.field})")
    if args.nc and ctx.commutative:
        raise UsageError("--nc given but the input is commutative")


def load_endo(args, path: str) -> Endo:
    text = _read(path)
    if _is_word_text(text):
        f = expand(textio.parse_word(text))
    else:
        f = textio.parse_endo(text)
    _check_globals(args, f.ctx)
    return f


def _emit_endo(out: Output, verb: str, f: Endo, aliases: bool, **extra):
    body = textio.format_endo(f, aliases)
    rec = {"verb": verb, "endo": body}
    rec.update(extra)
    out.record(rec, body.rstrip("\n"))


def _emit_word(out: Output, verb: str, w: GenWord, **extra):
    body = textio.format_word(w)
    rec = {"verb": verb, "word": body, "length": len(w.gens)}
    rec.update(extra)
    out.record(rec, body.rstrip("\n"))


# verbs ----------------------------------------------------------------------------------


def cmd_parse(args, out: Output) -> int:
    text = _read(args.input)
    if _is_word_text(text):
        w = textio.parse_word(text)
        _check_globals(args, w.ctx)
        if args.expand:
            _emit_endo(out, "parse", expand(w), args.aliases, length=len(w.gens))
        else:
            _emit_word(out, "parse", w)
        return EXIT_OK
    f = textio.parse_endo(text)
    _check_globals(args, f.ctx)
    _emit_endo(out, "parse", f, args.aliases)
    return EXIT_OK


def cmd_compose(args, out: Output) -> int:
    f, g = load_endo(args, args.f), load_endo(args, args.g)
    _emit_endo(out, "compose", compose(f, g, args.to), args.aliases)
    return EXIT_OK


def cmd_invert(args, out: Output) -> int:
    f = load_endo(args, args.input)
    inv = jet_invert(f, args.to) if args.to else exact_inverse(f)
    _emit_endo(out, "invert", inv, args.aliases, exact=args.to is None)
    return EXIT_OK


def cmd_conjugate(args, out: Output) -> int:
    a, m = load_endo(args, args.a), load_endo(args, args.m)
    _emit_endo(out, "conjugate", conjugate(a, m, args.to), args.aliases)
    return EXIT_OK


def cmd_filtration(args, out: Output) -> int:
    f = load_endo(args, args.input)
    rep = filtration(f, args.cap)
    wit = None
    if rep.witness is not None:
        wit = [str(w) for w in rep.witness]
    rec = {"verb": "filtration", "level": rep.level, "cap": rep.cap,
           "scalar_linear_part": rep.scalar_flag, "scalar_level": rep.scalar_level,
           "witness": wit}
    line = f"level {rep.level} (cap {rep.cap})"
    if rep.scalar_flag:
        line += f"; scalar linear part, G-level {rep.scalar_level}"
    if wit:
        line += f"; witness {' '.join(wit)}"
    out.record(rec, line)
    return EXIT_OK


def cmd_truncate(args, out: Output) -> int:
    f = load_endo(args, args.input)
    _emit_endo(out, "truncate", f.truncate(args.to), args.aliases)
    return EXIT_OK


def _parse_nc_monomial(ctx: PolyContext, text: str) -> tuple:
    p = textio.parse_poly(ctx, text)
    if len(p.terms) != 1:
        raise UsageError("--monomial must be a single monomial in x and y")
    (m, c), = p.terms.items()
    if any(v > 1 for v in m):
        raise UsageError("--monomial may only involve x and y")
    return m, c


def cmd_synthesize(args, out: Output) -> int:
    fs = _field(args)
    kind = args.kind
    if kind == "nc":
        ctx = PolyContext(4, fs, False)
        if not args.monomial:
            raise UsageError("synthesize nc needs --monomial")
        M, c = _parse_nc_monomial(ctx, args.monomial)
        w = synth_nc_elementary(M, coeff=c, ctx=ctx)
        target = Endo.elementary(ctx, 3, ctx.monomial(M, c))
        extra = {"height": height(M)}
    else:
        if args.nc:
            raise UsageError(f"synthesize {kind} works in the commutative flavor")
        ctx = PolyContext(3, fs, True)
        x, y, _ = ctx.gens()
        if kind == "poly":
            if not args.expr:
                raise UsageError("synthesize poly needs --expr")
            P = textio.parse_poly(ctx, args.expr)
            w = synth_elementary(P)
        else:
            if args.degree is None:
                raise UsageError(f"synthesize {kind} needs --degree")
            b = fs.parse_value(args.coeff)
            if kind == "power":
                w = synth_power(b, args.degree, ctx)
                P = x.pow(args.degree).scale(b)
            else:
                w = synth_edge(b, args.degree, ctx)
                P = y.mul(x.pow(args.degree)).scale(b)
        target = Endo.elementary(ctx, 2, P)
        extra = {}
    ok = True
    if args.check:
        ok = expand(w) == target
        extra["verified"] = ok
    _emit_word(out, "synthesize", w, **extra)
    if args.check:
        out.text(f"# expansion {'matches' if ok else 'DIFFERS FROM'} the target")
    return EXIT_OK if ok else EXIT_FAIL


def _weights(text: str, n: int) -> list:
    s = text.strip()
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    try:
        w = [int(v) for v in s.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError("--weights must be integers like [1,0,2]") from exc
    if len(w) != n:
        raise UsageError(f"--weights needs {n} entries")
    return w


def cmd_torus(args, out: Output) -> int:
    f = load_endo(args, args.input)
    w = _weights(args.weights, f.ctx.n)
    if args.action == "conjugate":
        g = t_conjugate(w, f)
        lines = [f"{f.ctx.var_name(i)} = {format_poly(im)};" for i, im in enumerate(g.images)]
        body = "\n".join(lines)
        out.record({"verb": "torus conjugate", "weights": w, "images": lines}, body)
        return EXIT_OK
    v = singularity_valuation(w, f)
    out.record({"verb": "torus valuation", "weights": w, "valuation": v, "singular": v < 0},
               f"valuation {v}" + (" (singular at t=0)" if v < 0 else ""))
    return EXIT_OK


def cmd_approximate(args, out: Output) -> int:
    f = load_endo(args, args.input)
    try:
        trace = approx.tame_approximate(f, args.to, seed=args.seed, basis_budget=args.budget)
    except SpanDeficiency as exc:
        out.record({"verb": "approximate", "status": "inconclusive", "reason": str(exc)},
                   f"inconclusive: {exc}")
        return EXIT_INCONCLUSIVE
    for s in trace.steps:
        out.record({"verb": "approximate", "degree": s.degree, "length": len(s.word.gens),
                    "level": s.level},
                   f"degree {s.degree}: peeled {len(s.word.gens)} generators, "
                   f"residual level {s.level}")
    ok = trace.verify()
    out.record({"verb": "approximate", "m": args.to, "seed": args.seed, "reached": ok},
               f"residual in H_{args.to}: {'yes' if ok else 'no'}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for i, s in enumerate(trace.steps, 1):
            with open(os.path.join(args.out, f"step{i:02d}_deg{s.degree}.word"), "w") as fh:
                fh.write(textio.format_word(s.word))
        with open(os.path.join(args.out, "residual.endo"), "w") as fh:
            fh.write(textio.format_endo(trace.residual))
    return EXIT_OK if ok else EXIT_FAIL


def _targets(text: Optional[str]) -> list:
    if not text:
        return []
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError("--targets must be integers like 1,2") from exc


def cmd_hike(args, out: Output) -> int:
    f = load_endo(args, args.input)
    N, R = approx.hiking_slices(f)
    targets = _targets(args.targets)
    if not targets:
        targets = sorted(j for j in R if j > 0)
    plan = approx.hiking_solve(targets, f.ctx.ring)
    fmt = f.ctx.ring.format_value
    out.record({"verb": "hike", "k": list(plan.k), "lambdas": [fmt(v) for v in plan.lambdas],
                "targets": list(plan.targets), "verified": plan.verify()},
               f"plan k={list(plan.k)} lambda={[fmt(v) for v in plan.lambdas]}")
    h = approx.hiking_product(f, plan, cap=args.cap)
    N2, R2 = approx.hiking_slices(h)
    left = sorted(j for j in R2 if j in plan.targets)
    _emit_endo(out, "hike", h, args.aliases, slice_degree=N, remaining_targets=left)
    return EXIT_OK if plan.verify() and not left else EXIT_FAIL


def cmd_verify(args, out: Output) -> int:
    res = suites.run_suite(args.suite, args.seed, _field(args), quick=args.quick)
    for rec in res.records():
        line = f"{rec['status']:<12} {rec['name']}"
        if rec["witness"] and rec["status"] != suites.PASS:
            line += f"\n    {rec['witness']}"
        out.record(rec, line)
    counts = {s: sum(1 for c in res.checks if c.status == s)
              for s in (suites.PASS, suites.FAIL, suites.INCONCLUSIVE)}
    out.record({"suite": res.suite, "seed": res.seed, "field": res.field, "status": res.status,
                "counts": counts, "wall_time": round(res.wall_time, 3)},
               f"{res.suite}: {res.status} ({counts[suites.PASS]} pass, "
               f"{counts[suites.FAIL]} fail, {counts[suites.INCONCLUSIVE]} inconclusive; "
               f"seed {res.seed}, {res.wall_time:.2f}s)")
    return res.exit_code


# argument parsing ---------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # the subcommand copy must not overwrite values given before the verb
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    common = _Parser(add_help=False)
    common.add_argument("--field", default=d(None), help="q or fp:<p> (default q)")
    common.add_argument("--nc", action="store_true", default=d(False),
                        help="noncommutative flavor")
    common.add_argument("--vars", type=int, default=d(3), help="number of variables")
    common.add_argument("--seed", type=int, default=d(0))
    common.add_argument("--json", action="store_true", default=d(False),
                        help="line-delimited JSON output")
    common.add_argument("--aliases", action="store_true", default=d(False),
                        help="print x, y, z, t names")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(True)
    p = _Parser(prog="tameaut", description="Tame automorphisms of polynomial algebras.",
                parents=[_global_flags(False)])
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)
    sub.required = True

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    s = add("parse", "parse an endo or word file and print it canonically")
    s.add_argument("input")
    s.add_argument("--expand", action="store_true", help="print the expansion of a word")

    s = add("compose", "F then G: G's images with F's images substituted")
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--to", type=int, help="truncate modulo I^m")

    s = add("invert", "exact inverse, or the inverse jet with --to")
    s.add_argument("input")
    s.add_argument("--to", type=int)

    s = add("conjugate", "A^-1 M A")
    s.add_argument("a")
    s.add_argument("m")
    s.add_argument("--to", type=int)

    s = add("filtration", "largest n with F in H_n, up to the cap")
    s.add_argument("input")
    s.add_argument("--cap", type=int, default=approx.DEFAULT_CAP)

    s = add("truncate", "drop terms of degree >= m")
    s.add_argument("input")
    s.add_argument("--to", type=int, required=True)

    s = add("synthesize", "tame word for an elementary map")
    s.add_argument("kind", choices=("power", "edge", "poly", "nc"))
    s.add_argument("--coeff", default="1")
    s.add_argument("--degree", type=int)
    s.add_argument("--expr", help="P(x, y) for 'poly'")
    s.add_argument("--monomial", help="monomial in x, y for 'nc', e.g. x^2*y*x")
    s.add_argument("--check", action="store_true", help="expand and compare with the target")

    s = add("torus", "diagonal torus conjugation and the t=0 valuation")
    s.add_argument("action", choices=("conjugate", "valuation"))
    s.add_argument("input")
    s.add_argument("--weights", required=True, help="integer exponents, e.g. [1,0,2]")

    s = add("approximate", "peel tame factors until the residual lies in H_m")
    s.add_argument("input")
    s.add_argument("--to", type=int, default=approx.DEFAULT_CAP)
    s.add_argument("--budget", type=int, default=8)
    s.add_argument("--out", help="directory for step words and the residual")

    s = add("hike", "cancel z-graded slices by torus-conjugate products")
    s.add_argument("input")
    s.add_argument("--targets", help="z-degrees to cancel, e.g. 1,2 (default: all present)")
    s.add_argument("--cap", type=int, default=6)

    s = add("verify", "run a named verification suite")
    s.add_argument("suite", choices=sorted(suites.SUITES))
    s.add_argument("--quick", action="store_true")
    return p


COMMANDS = {
    "parse": cmd_parse, "compose": cmd_compose, "invert": cmd_invert,
    "conjugate": cmd_conjugate, "filtration": cmd_filtration, "truncate": cmd_truncate,
    "synthesize": cmd_synthesize, "torus": cmd_torus, "approximate": cmd_approximate,
    "hike": cmd_hike, "verify": cmd_verify,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    as_json = "--json" in (argv if argv is not None else sys.argv[1:])
    out = Output(as_json, stdout)

    def fail(kind, msg, code):
        if as_json:
            out.record({"error": kind, "message": msg})
        else:
            stderr.write(f"tameaut: {msg}\n")
        return code

    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:  # argparse reports usage errors (and --help) this way
            return exc.code if isinstance(exc.code, int) else EXIT_USAGE
        if args.field:
            FieldSpec.parse(args.field)
        return COMMANDS[args.verb](args, out)
    except UsageError as exc:
        return fail("usage", str(exc), EXIT_USAGE)
    except ParseError as exc:
        return fail("parse", str(exc), EXIT_USAGE)
    except _USAGE_ERRORS as exc:
        return fail(type(exc).__name__, str(exc), EXIT_USAGE)
    except SpanDeficiency as exc:
        return fail(type(exc).__name__, str(exc), EXIT_INCONCLUSIVE)
    except TameAutError as exc:
        return fail(type(exc).__name__, str(exc), EXIT_FAIL)


if __name__ == "__main__":
    sys.exit(main())


__all__ = ["main", "build_parser", "COMMANDS"]
