"""Text grammar for generator monomials.

    lwexpr := factor { '*' factor }
    factor := atom [ '^' sint ]
    atom   := GEN '[' nat ',' param ']' | 'c' '[' param { ',' param } ']'
            | '(' lwexpr ')' | '1'
    GEN    := 'Y' | 'Yt' | 'P' | 'A'
    param  := [ '-' ] ptok { '*' ptok }
    ptok   := rational | 'z' nat [ '^' sint ] | 'u' [ '^' sint ] | 'q' [ '^' qexp ]
    qexp   := sint | '(' sint [ '/' nat ] ')'

The printer emits exactly this grammar, so ``parse(format(m)) == m``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Tuple

from .cartan import CartanData
from .lweight import GenMonomial, Letter
from .scalar import ONE, SpectralParam, format_param


class ParseError(ValueError):
    def __init__(self, message: str, src: str, pos: int):
        self.offset = len(src[:pos].encode("utf-8"))
        super().__init__(f"{message} at byte {self.offset}")
        self.src = src


class NodeIndexError(ParseError, IndexError):
    pass


class _Parser:
    def __init__(self, src: str, cd: CartanData):
        self.src = src
        self.pos = 0
        self.cd = cd

    def error(self, msg: str, pos: Optional[int] = None) -> ParseError:
        return ParseError(msg, self.src, self.pos if pos is None else pos)

    def ws(self) -> None:
        while self.pos < len(self.src) and self.src[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.ws()
        return self.src[self.pos] if self.pos < len(self.src) else ""

    def eat(self, s: str) -> bool:
        self.ws()
        if self.src.startswith(s, self.pos):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str) -> None:
        if not self.eat(s):
            found = self.src[self.pos] if self.pos < len(self.src) else "end of input"
            raise self.error(f"expected {s!r}, found {found!r}")

    def nat(self) -> int:
        self.ws()
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected a nonnegative integer")
        return int(self.src[start:self.pos])

    def sint(self) -> int:
        neg = self.eat("-")
        if not neg:
            self.eat("+")
        n = self.nat()
        return -n if neg else n

    # grammar
    def lwexpr(self) -> GenMonomial:
        out = self.factor()
        while self.eat("*"):
            out = out * self.factor()
        return out

    def factor(self) -> GenMonomial:
        base = self.atom()
        if self.eat("^"):
            base = base ** self.sint()
        return base

    def atom(self) -> GenMonomial:
        self.ws()
        start = self.pos
        if self.eat("("):
            inner = self.lwexpr()
            self.expect(")")
            return inner
        if self.eat("Yt"):
            kind = "Yt"
        elif self.eat("Y"):
            kind = "Y"
        elif self.eat("P"):
            kind = "P"
        elif self.eat("A"):
            kind = "A"
        elif self.eat("c"):
            return self.constant()
        elif self.eat("1"):
            return GenMonomial(self.cd.token)
        else:
            raise self.error("expected a generator Y, Yt, P, A, a constant c[...] or '('")
        self.expect("[")
        ipos = self.pos
        i = self.nat()
        if i not in self.cd.I0:
            raise NodeIndexError(f"node {i} is not in I0 = {list(self.cd.I0)} for {self.cd.token}",
                                 self.src, ipos)
        self.expect(",")
        a = self.param()
        self.expect("]")
        del start
        return GenMonomial(self.cd.token, [((kind, i, a), 1)])

    def constant(self) -> GenMonomial:
        self.expect("[")
        vals = [self.param()]
        while self.eat(","):
            vals.append(self.param())
        cpos = self.pos
        self.expect("]")
        if len(vals) != len(self.cd.I0):
            raise self.error(f"constant needs {len(self.cd.I0)} entries, got {len(vals)}", cpos)
        if any(v.uexp for v in vals):
            raise self.error("constants may not involve u", cpos)
        return GenMonomial(self.cd.token, [], vals)

    def param(self) -> SpectralParam:
        start = self.pos
        out = ONE
        if self.eat("-"):
            out = out.neg()
        out = out * self.ptok()
        while self.eat("*"):
            out = out * self.ptok()
        L = self.cd.L
        if (out.turn * L).denominator != 1:
            raise self.error(f"root of unity not of order dividing L={L}", start)
        return out

    def ptok(self) -> SpectralParam:
        c = self.peek()
        if c.isdigit():
            num = self.nat()
            den = 1
            if self.eat("/"):
                den = self.nat()
                if den == 0:
                    raise self.error("zero denominator")
            return SpectralParam.make(0, 0, 0, Fraction(num, den))
        if self.eat("z"):
            order = self.nat()
            if order == 0:
                raise self.error("z0 is not a root of unity")
            k = self.sint() if self.eat("^") else 1
            return SpectralParam.make(Fraction(k, order), 0)
        if self.eat("u"):
            e = self.sint() if self.eat("^") else 1
            return SpectralParam.make(0, 0, e)
        if self.eat("q"):
            if not self.eat("^"):
                return SpectralParam.make(0, 2)
            if self.eat("("):
                p = self.sint()
                den = self.nat() if self.eat("/") else 1
                self.expect(")")
                r = Fraction(p, den) if den else None
                if r is None or (2 * r).denominator != 1:
                    raise self.error("q-exponent must lie in (1/2)Z")
                return SpectralParam.make(0, int(2 * r))
            return SpectralParam.make(0, 2 * self.sint())
        raise self.error("malformed parameter")


def parse_lweight(src: str, cd: CartanData) -> GenMonomial:
    """Parse a monomial expression; syntax errors carry a byte offset."""
    p = _Parser(src, cd)
    if not p.peek():
        raise p.error("empty expression")
    out = p.lwexpr()
    if p.peek():
        raise p.error("unexpected trailing input")
    return out


def _format_letter(letter: Letter, e: int) -> str:
    kind, i, a = letter
    s = f"{kind}[{i},{format_param(a)}]"
    return s if e == 1 else f"{s}^{e}"


def format_monomial(m: GenMonomial) -> str:
    parts: List[str] = [_format_letter(k, e) for k, e in m.letters]
    if any(not g.is_one() for g in m.gamma):
        parts.append("c[" + ",".join(format_param(g) for g in m.gamma) + "]")
    return " * ".join(parts) if parts else "1"


def parse_coweight(src: str, cd: CartanData) -> Tuple[int, ...]:
    """Comma-separated integers in I0 order."""
    try:
        vals = tuple(int(s) for s in src.split(",")) if src.strip() else ()
    except ValueError:
        raise ParseError("coweight must be comma-separated integers", src, 0) from None
    if len(vals) != len(cd.I0):
        raise ParseError(f"coweight needs {len(cd.I0)} entries for {cd.token}", src, 0)
    return vals


def parse_param(src: str, cd: CartanData) -> SpectralParam:
    p = _Parser(src, cd)
    out = p.param()
    if p.peek():
        raise p.error("unexpected trailing input")
    return out
