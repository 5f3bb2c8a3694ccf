"""Text formats: polynomial expressions, endomorphism files and generator-word files.

Endo file::

    [comm] n=3 field=q
    x1 = x1;
    x2 = x2;
    x3 = x3 + x1*x2;

Word file (same header, then one generator per line)::

    [nc] n=4 field=fp:5
    LIN [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]
    ELEM x3 x1*x2 ^-1
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import linalg
from .coeffs import FieldSpec
from .endo import Endo
from .errors import InvalidField, NotElementary, ParseError
from .polyalg import ALIASES, Poly, PolyContext, format_poly
from .tameword import Generator, GenWord

_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str  # num | name | op | end
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col0: int = 1) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(Token("num", m.group(1), line, col0 + start))
        elif m.group(2):
            out.append(Token("name", m.group(2), line, col0 + start))
        else:
            out.append(Token("op", m.group(3), line, col0 + start))
        pos = m.end()
    out.append(Token("end", "", line, col0 + len(text)))
    return out


def variable_index(ctx: PolyContext, name: str) -> Optional[int]:
    if re.fullmatch(r"x[1-9][0-9]*", name):
        i = int(name[1:]) - 1
        return i if i < ctx.n else None
    if name in ALIASES and ctx.n <= len(ALIASES):
        i = ALIASES.index(name)
        return i if i < ctx.n else None
    return None


class _Parser:
    def __init__(self, ctx: PolyContext, tokens: list):
        self.ctx = ctx
        self.toks = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.kind != "op" or t.text != text:
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.take()

    def expr(self) -> Poly:
        acc = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.unary()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.take()
            acc = acc * self.unary()
        return acc

    def unary(self) -> Poly:
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.take()
            v = self.unary()
            return -v if t.text == "-" else v
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            e = self.peek()
            if e.kind != "num" or "/" in e.text:
                self.error("exponent must be a nonnegative integer")
            self.take()
            base = base.pow(int(e.text))
        return base

    def atom(self) -> Poly:
        t = self.peek()
        if t.kind == "num":
            self.take()
            try:
                return self.ctx.const(self.ctx.ring.parse_value(t.text))
            except Exception as exc:
                raise ParseError(str(exc), t.line, t.col) from exc
        if t.kind == "name":
            idx = variable_index(self.ctx, t.text)
            if idx is None:
                self.error(f"undeclared variable {t.text!r}")
            self.take()
            return self.ctx.var(idx)
        if t.kind == "op" and t.text == "(":
            self.take()
            v = self.expr()
            self.expect(")")
            return v
        self.error(f"unexpected {t.text or 'end of input'!r}")

    def done(self):
        t = self.peek()
        if t.kind in ("name", "num") or t.text == "(":
            self.error(f"unexpected {t.text!r}; write '*' for multiplication")
        if t.kind != "end":
            self.error(f"unexpected {t.text!r}")


def parse_poly(ctx: PolyContext, text: str, line: int = 1, col0: int = 1) -> Poly:
    p = _Parser(ctx, tokenize(text, line, col0))
    out = p.expr()
    p.done()
    return out


# headers --------------------------------------------------------------------------

_HEADER_RE = re.compile(r"^\s*\[(comm|nc)\]\s+n=(\d+)\s+field=(\S+)(\s+affine)?\s*$")


def parse_header(line: str, lineno: int = 1) -> tuple:
    m = _HEADER_RE.match(line)
    if not m:
        raise ParseError("header must read '[comm|nc] n=<k> field=<q|fp:p>'", lineno, 1)
    n = int(m.group(2))
    if n < 1:
        raise ParseError("n must be positive", lineno, 1)
    try:
        fs = FieldSpec.parse(m.group(3))
    except (InvalidField, ValueError) as exc:
        raise ParseError(str(exc), lineno, m.start(3) + 1) from exc
    return PolyContext(n, fs, m.group(1) == "comm"), bool(m.group(4))


def format_header(ctx: PolyContext, affine: bool = False) -> str:
    flavor = "comm" if ctx.commutative else "nc"
    return f"[{flavor}] n={ctx.n} field={ctx.field}" + (" affine" if affine else "")


def _content_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield no, line


# endos ----------------------------------------------------------------------------


def parse_endo(text: str) -> Endo:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    ctx, affine = parse_header(lines[0][1], lines[0][0])
    # statements may span lines; split on ';' while keeping positions
    images: list = [None] * ctx.n
    buf = []
    for no, line in lines[1:]:
        col = 1
        for piece in re.split(r"(;)", line):
            if piece == ";":
                if not buf or not "".join(t for _, _, t in buf).strip():
                    raise ParseError("empty statement", no, col)
                _assign(ctx, buf, images)
                buf = []
            elif piece:
                buf.append((no, col, piece))
            col += len(piece)
    if buf and "".join(t for _, _, t in buf).strip():
        no, col, _ = buf[-1]
        raise ParseError("missing ';' at end of statement", no, col)
    for i, im in enumerate(images):
        if im is None:
            raise ParseError(f"no assignment for x{i + 1}", lines[-1][0], 1)
    try:
        return Endo(ctx, images, affine=affine)
    except ValueError as exc:
        raise ParseError(str(exc), lines[-1][0], 1) from exc


def _assign(ctx: PolyContext, pieces: list, images: list):
    no, col, first = pieces[0]
    if len(pieces) > 1:
        # multi-line statement: join, report positions from the first line
        text = " ".join(p for _, _, p in pieces)
    else:
        text = first
    m = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=", text)
    if not m:
        raise ParseError("expected '<variable> = <expression>'", no, col)
    idx = variable_index(ctx, m.group(1))
    if idx is None:
        raise ParseError(f"undeclared variable {m.group(1)!r}", no, col + m.start(1))
    if images[idx] is not None:
        raise ParseError(f"x{idx + 1} assigned twice", no, col + m.start(1))
    images[idx] = parse_poly(ctx, text[m.end():], no, col + m.end())


def format_endo(f: Endo, aliases: bool = False) -> str:
    ctx = f.ctx
    lines = [format_header(ctx, f.affine)]
    for i, im in enumerate(f.images):
        lines.append(f"{ctx.var_name(i, aliases)} = {format_poly(im, aliases)};")
    return "\n".join(lines) + "\n"


# words ------------------------------------------------------------------------------

_INV_RE = re.compile(r"\s*\^\s*-1\s*$")


def _format_matrix(ctx: PolyContext, mat) -> str:
    fmt = ctx.ring.format_value
    return "[" + ",".join("[" + ",".join(fmt(a) for a in row) + "]" for row in mat) + "]"


def format_generator(ctx: PolyContext, g: Generator) -> str:
    suffix = " ^-1" if g.inverted else ""
    if g.kind == "linear":
        return f"LIN {_format_matrix(ctx, g.matrix)}{suffix}"
    return f"ELEM {ctx.var_name(g.target)} {format_poly(g.addend)}{suffix}"


def format_word(w: GenWord) -> str:
    lines = [format_header(w.ctx)]
    lines.extend(format_generator(w.ctx, g) for g in w.gens)
    return "\n".join(lines) + "\n"


def _parse_matrix(ctx: PolyContext, text: str, no: int, col: int):
    s = text.strip()
    if not (s.startswith("[[") and s.endswith("]]")):
        raise ParseError("matrix must look like [[a,b],[c,d]]", no, col)
    rows = []
    for r in re.findall(r"\[([^\[\]]*)\]", s[1:-1]):
        try:
            rows.append([ctx.ring.parse_value(v.strip()) for v in r.split(",")])
        except ParseError as exc:
            raise ParseError(str(exc), no, col) from exc
    if len(rows) != ctx.n or any(len(r) != ctx.n for r in rows):
        raise ParseError(f"matrix must be {ctx.n}x{ctx.n}", no, col)
    return rows


def parse_generator(ctx: PolyContext, line: str, no: int = 1) -> Generator:
    inverted = False
    m = _INV_RE.search(line)
    if m:
        inverted = True
        line = line[:m.start()]
    stripped = line.lstrip()
    col = len(line) - len(stripped) + 1
    if stripped.startswith("LIN"):
        mat = _parse_matrix(ctx, stripped[3:], no, col + 3)
        if not linalg.det(ctx.ring, mat):
            raise ParseError("linear generator must be invertible", no, col)
        g = Generator.linear(mat)
    elif stripped.startswith("ELEM"):
        rest = stripped[4:]
        mv = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)", rest)
        if not mv:
            raise ParseError("ELEM needs a target variable", no, col + 4)
        idx = variable_index(ctx, mv.group(1))
        if idx is None:
            raise ParseError(f"undeclared variable {mv.group(1)!r}", no, col + 4 + mv.start(1))
        addend = parse_poly(ctx, rest[mv.end():], no, col + 4 + mv.end())
        try:
            g = Generator.elementary(idx, addend)
        except NotElementary as exc:
            raise ParseError(str(exc), no, col) from exc
    else:
        raise ParseError("generator lines start with LIN or ELEM", no, col)
    return g.inverse() if inverted else g


def parse_word(text: str) -> GenWord:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    ctx, _ = parse_header(lines[0][1], lines[0][0])
    gens = tuple(parse_generator(ctx, line, no) for no, line in lines[1:])
    return GenWord(ctx, gens)


__all__ = [
    "tokenize", "parse_poly", "parse_endo", "format_endo", "parse_word", "format_word",
    "parse_header", "format_header", "parse_generator", "format_generator", "variable_index",
]
