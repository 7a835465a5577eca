"""Expression parser for algebra elements.

Grammar (whitespace insensitive):

    expr  := ['+'|'-'] term (('+'|'-') term)*
    term  := coeff | [coeff '*'] var ('*' var)*
    coeff := INT | INT '/' INT
    var   := identifier declared in the context

'*' is mandatory between factors so multi-character identifiers such as
x10 tokenize unambiguously.  Products associate left-to-right as wedges.
Constant terms and a leading sign are accepted so that rendered elements
always parse back to themselves.  A unicode minus is treated as '-'.
"""

from __future__ import annotations

from .exterior import AlgebraContext, Element


class ExpressionError(ValueError):
    """Malformed expression; the message names the offending token."""


_OPS = set("+-*/")


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "−":
            ch = "-"
        if ch in _OPS:
            tokens.append(("op", ch, pos))
            pos += 1
            continue
        if ch.isdigit():
            start = pos
            while pos < n and text[pos].isdigit():
                pos += 1
            tokens.append(("int", text[start:pos], start))
            continue
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < n and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            tokens.append(("name", text[start:pos], start))
            continue
        raise ExpressionError(f"unexpected character {ch!r} at position {pos}")
    return tokens


class _Parser:
    def __init__(self, tokens, ctx: AlgebraContext):
        self.tokens = tokens
        self.ctx = ctx
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is not None:
            self.i += 1
        return tok

    def parse(self) -> Element:
        if not self.tokens:
            raise ExpressionError("empty expression")
        total = Element.zero(self.ctx)
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            sign = 1 if tok[1] == "+" else -1
            self.take()
        while True:
            term = self.term()
            total = total + (term if sign > 0 else -term)
            tok = self.take()
            if tok is None:
                return total
            if tok[0] == "op" and tok[1] in "+-":
                sign = 1 if tok[1] == "+" else -1
                continue
            raise ExpressionError(
                f"expected '+' or '-' before {tok[1]!r} at position {tok[2]}")

    def term(self) -> Element:
        tok = self.peek()
        if tok is None:
            raise ExpressionError("expected a term at end of input")
        scalar = None
        if tok[0] == "int":
            scalar = self.coefficient()
            nxt = self.peek()
            if nxt is None or (nxt[0] == "op" and nxt[1] in "+-"):
                return Element.monomial(self.ctx, 0, scalar)
            if not (nxt[0] == "op" and nxt[1] == "*"):
                raise ExpressionError(
                    f"expected '*' between coefficient and {nxt[1]!r} "
                    f"at position {nxt[2]}")
            self.take()
        elem = self.variable()
        while True:
            nxt = self.peek()
            if nxt is None or not (nxt[0] == "op" and nxt[1] == "*"):
                break
            self.take()
            elem = elem.wedge(self.variable())
        if scalar is not None:
            elem = elem.scale(scalar)
        return elem

    def coefficient(self):
        num_tok = self.take()
        num = int(num_tok[1])
        nxt = self.peek()
        if nxt is not None and nxt[0] == "op" and nxt[1] == "/":
            self.take()
            den_tok = self.take()
            if den_tok is None or den_tok[0] != "int":
                where = den_tok[2] if den_tok else "end of input"
                raise ExpressionError(f"malformed coefficient denominator at {where}")
            den = int(den_tok[1])
            if den == 0:
                raise ExpressionError("denominator 0 in coefficient")
            try:
                return self.ctx.field.from_fraction(num, den)
            except ZeroDivisionError:
                raise ExpressionError(
                    f"denominator {den} is zero in {self.ctx.field.name}") from None
        return self.ctx.field.from_int(num)

    def variable(self) -> Element:
        tok = self.take()
        if tok is None:
            raise ExpressionError("expected a variable at end of input")
        if tok[0] != "name":
            raise ExpressionError(
                f"expected a variable, got {tok[1]!r} at position {tok[2]}")
        try:
            return Element.variable(self.ctx, tok[1])
        except KeyError:
            raise ExpressionError(f'unknown variable "{tok[1]}"') from None


def parse_element(text: str, ctx: AlgebraContext) -> Element:
    """Parse text to an Element of ctx; raises ExpressionError on bad input."""
    return _Parser(tokenize(text), ctx).parse()
