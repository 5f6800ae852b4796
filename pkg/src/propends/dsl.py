"""Group-expression language for the command line.

Grammar::

    expr := atom | expr "*" expr          (free product, left associative)
    atom := "Zp" | "free(" INT ")" | "cyclic(" INT ")"
          | "direct(" expr "," expr ")"
          | "finite{" gens ";" relators "}"
          | "(" expr ")"

Words use generator letters, "^" integer powers (including "^-1"), and
"[x, y]" commutators.  parse followed by print is a fixed point after
one normalization pass (products are flattened).
"""

from __future__ import annotations

import re

from .descriptors import (
    CyclicP,
    DirectProduct,
    FinitePres,
    FreeProduct,
    FreeProP,
    ProPDescriptor,
    Zp,
)
from .errors import DSLSyntaxError
from .words import Presentation, commutator, wmul, wpow

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z]\w*)|(?P<sym>->|[*(){},;^\[\]]))"
)


class Token:
    __slots__ = ("kind", "value", "span")

    def __init__(self, kind, value, span):
        self.kind = kind
        self.value = value
        self.span = span


def tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            tail = text[pos:].lstrip()
            if not tail:
                break
            at = len(text) - len(tail)
            raise DSLSyntaxError(
                f"unexpected character {tail[0]!r}", span=(at, at + 1)
            )
        if m.lastgroup == "int":
            out.append(Token("int", int(m.group("int")), m.span("int")))
        elif m.lastgroup == "name":
            out.append(Token("name", m.group("name"), m.span("name")))
        else:
            out.append(Token("sym", m.group("sym"), m.span("sym")))
        pos = m.end()
    return out


class GroupExpr:
    """Syntax node: kind is one of Zp, free, cyclic, direct, finite,
    product; payload depends on the kind."""

    __slots__ = ("kind", "children", "value", "gens", "relator_words", "span")

    def __init__(self, kind, span, children=(), value=None, gens=None,
                 relator_words=None):
        self.kind = kind
        self.children = list(children)
        self.value = value
        self.gens = gens
        self.relator_words = relator_words
        self.span = span

    def print(self) -> str:
        if self.kind == "Zp":
            return "Zp"
        if self.kind == "free":
            return f"free({self.value})"
        if self.kind == "cyclic":
            return f"cyclic({self.value})"
        if self.kind == "direct":
            return (
                f"direct({self.children[0].print()}, "
                f"{self.children[1].print()})"
            )
        if self.kind == "finite":
            return (
                "finite{" + ", ".join(self.gens) + "; "
                + ", ".join(self.relator_words) + "}"
            )
        parts = []
        for ch in self.children:
            txt = ch.print()
            parts.append(f"({txt})" if ch.kind == "product" else txt)
        return " * ".join(parts)

    def to_descriptor(self, p: int) -> ProPDescriptor:
        if self.kind == "Zp":
            return Zp(p)
        if self.kind == "free":
            return FreeProP(p, self.value)
        if self.kind == "cyclic":
            return CyclicP(p, self.value)
        if self.kind == "direct":
            return DirectProduct(
                p,
                self.children[0].to_descriptor(p),
                self.children[1].to_descriptor(p),
            )
        if self.kind == "finite":
            names = tuple(self.gens)
            rels = tuple(
                parse_word(w, names) for w in self.relator_words
            )
            return FinitePres(
                p, Presentation(len(names), rels, gen_names=names)
            )
        return FreeProduct(p, [ch.to_descriptor(p) for ch in self.children])


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            n = len(self.text)
            raise DSLSyntaxError("unexpected end of input", span=(n, n))
        self.i += 1
        return t

    def expect(self, kind, value=None):
        t = self.next()
        if t.kind != kind or (value is not None and t.value != value):
            want = value if value is not None else kind
            raise DSLSyntaxError(
                f"expected {want!r}, got {t.value!r}", span=t.span
            )
        return t

    def parse_expr(self) -> GroupExpr:
        node = self.parse_atom()
        factors = [node]
        while True:
            t = self.peek()
            if t is None or t.value != "*":
                break
            self.next()
            factors.append(self.parse_atom())
        if len(factors) == 1:
            return node
        span = (factors[0].span[0], factors[-1].span[1])
        flat = []
        for f in factors:
            flat.extend(f.children if f.kind == "product" else [f])
        return GroupExpr("product", span, children=flat)

    def parse_atom(self) -> GroupExpr:
        t = self.next()
        if t.value == "(":
            node = self.parse_expr()
            self.expect("sym", ")")
            return node
        if t.kind != "name":
            raise DSLSyntaxError(
                f"expected a constructor, got {t.value!r}", span=t.span
            )
        if t.value == "Zp":
            return GroupExpr("Zp", t.span)
        if t.value in ("free", "cyclic"):
            self.expect("sym", "(")
            arg = self.expect("int")
            close = self.expect("sym", ")")
            if arg.value < 1:
                raise DSLSyntaxError(
                    f"{t.value} argument must be positive", span=arg.span
                )
            return GroupExpr(
                t.value, (t.span[0], close.span[1]), value=arg.value
            )
        if t.value == "direct":
            self.expect("sym", "(")
            left = self.parse_expr()
            self.expect("sym", ",")
            right = self.parse_expr()
            close = self.expect("sym", ")")
            return GroupExpr(
                "direct", (t.span[0], close.span[1]), children=[left, right]
            )
        if t.value == "finite":
            self.expect("sym", "{")
            gens = [self.expect("name").value]
            while self.peek() is not None and self.peek().value == ",":
                self.next()
                gens.append(self.expect("name").value)
            if len(set(gens)) != len(gens):
                raise DSLSyntaxError("duplicate generator name", span=t.span)
            self.expect("sym", ";")
            rel_texts = []
            depth = 0
            start = None
            while True:
                tok = self.peek()
                if tok is None:
                    n = len(self.text)
                    raise DSLSyntaxError("unterminated finite{}", span=(n, n))
                if depth == 0 and tok.value in (",", "}"):
                    if start is not None:
                        rel_texts.append(self.text[start : tok.span[0]].strip())
                        start = None
                    self.next()
                    if tok.value == "}":
                        close = tok
                        break
                    continue
                if tok.value == "[":
                    depth += 1
                elif tok.value == "]":
                    depth -= 1
                if start is None:
                    start = tok.span[0]
                self.next()
            node = GroupExpr(
                "finite",
                (t.span[0], close.span[1]),
                gens=tuple(gens),
                relator_words=tuple(r for r in rel_texts if r),
            )
            for w in node.relator_words:
                parse_word(w, node.gens)  # validate now, with spans
            return node
        raise DSLSyntaxError(
            f"unknown constructor {t.value!r}", span=t.span
        )


def parse_group_expr(text: str) -> GroupExpr:
    p = _Parser(text)
    node = p.parse_expr()
    t = p.peek()
    if t is not None:
        raise DSLSyntaxError(f"trailing input {t.value!r}", span=t.span)
    return node


class _WordParser:
    def __init__(self, text: str, names):
        self.text = text
        self.toks = tokenize(text)
        self.names = list(names)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        t = self.peek()
        if t is None:
            n = len(self.text)
            raise DSLSyntaxError("unexpected end of word", span=(n, n))
        self.i += 1
        return t

    def parse(self, stop=()):
        out = ()
        while True:
            t = self.peek()
            if t is None or t.value in stop:
                return out
            out = wmul(out, self.parse_term())

    def parse_term(self):
        t = self.next()
        if t.kind == "name":
            if t.value not in self.names:
                raise DSLSyntaxError(
                    f"unknown generator {t.value!r}", span=t.span
                )
            base = (self.names.index(t.value) + 1,)
        elif t.value == "[":
            left = self.parse(stop=(",",))
            self.next()
            right = self.parse(stop=("]",))
            self.next()
            base = commutator(left, right)
        elif t.value == "(":
            base = self.parse(stop=(")",))
            self.next()
        else:
            raise DSLSyntaxError(
                f"unexpected {t.value!r} in word", span=t.span
            )
        nxt = self.peek()
        if nxt is not None and nxt.value == "^":
            self.next()
            e = self.next()
            if e.kind != "int":
                raise DSLSyntaxError("exponent must be an integer", span=e.span)
            return wpow(base, e.value)
        return base


def parse_word(text: str, names):
    """Parse a word over the named generators into signed-letter form."""
    wp = _WordParser(text, names)
    w = wp.parse()
    t = wp.peek()
    if t is not None:
        raise DSLSyntaxError(f"trailing input {t.value!r}", span=t.span)
    return w
