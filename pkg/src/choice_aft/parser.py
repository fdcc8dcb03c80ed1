"""Recursive-descent parser for the program text format.

::

    rule    := head ":-" body "." | head "."
    body    := catom ("," catom)*
    head    := catom | atom ("|" atom)+
    catom   := atom | "not" atom | card | count | explicit
    card    := [nat] "{" atoms "}" [nat]
    count   := "{" atoms "}" ("=" | "!=") nat
    explicit:= "choice" "(" "[" atoms "]" "," "[" subset ("," subset)* "]" ")"
    subset  := "[" [atoms] "]"
    atoms   := atom (";" atom)*

``%`` starts a comment. Files with ``|`` heads are disjunctive programs and
may only use literals in bodies.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DialectError, InvalidChoiceAtom, ParseError
from .lattice import Signature
from .syntax import (
    Cardinality, ChoiceAtom, ChoiceProgram, ChoiceRule, CountEq, CountNeq,
    DisjunctiveProgram, DisjunctiveRule, Extensional, NegLiteral, PosLiteral,
)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<implies>:-)
  | (?P<neq>!=)
  | (?P<nat>[0-9]+)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<punct>[{}()\[\];,.|=])
""", re.VERBOSE)

_KEYWORDS = {"not", "choice"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SourceText:
    text: str
    origin: str = "<string>"


def tokenize(text: str) -> list[Token]:
    out = []
    line = 1
    pos = 0
    line_start = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError("unexpected character", line, pos - line_start + 1, text[pos])
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            if kind == "ident" and tok in _KEYWORDS:
                kind = tok
            elif kind == "punct":
                kind = tok
            out.append(Token(kind, tok, line, pos - line_start + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    # errors at end of input point at the last real token
    last = out[-1] if out else Token("eof", "", 1, 1)
    out.append(Token("eof", "", last.line, last.col))
    return out


# Raw atoms before the signature is known: (kind, names, payload)
@dataclass
class _Raw:
    kind: str            # pos neg card eq neq ext disj
    names: tuple
    a: object = None
    b: object = None
    token: Token | None = None


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def fail(self, msg, tok=None):
        tok = tok or self.cur
        raise ParseError(msg, tok.line, tok.col, tok.text)

    def eat(self, kind) -> Token:
        tok = self.cur
        if tok.kind != kind:
            self.fail(f"expected {kind!r}")
        self.i += 1
        return tok

    def accept(self, kind):
        if self.cur.kind == kind:
            self.i += 1
            return True
        return False

    def program(self):
        rules = []
        while self.cur.kind != "eof":
            rules.append(self.rule())
        return rules

    def rule(self):
        start = self.cur
        head = self.head()
        body = []
        if self.accept("implies"):
            body.append(self.catom())
            while self.accept(","):
                body.append(self.catom())
        self.eat(".")
        return head, body, start

    def head(self):
        if self.cur.kind == "ident" and self.peek().kind == "|":
            tok = self.cur
            names = [self.eat("ident").text]
            while self.accept("|"):
                names.append(self.eat("ident").text)
            return _Raw("disj", tuple(names), token=tok)
        return self.catom()

    def atoms(self):
        names = [self.eat("ident").text]
        while self.accept(";"):
            names.append(self.eat("ident").text)
        return tuple(names)

    def catom(self):
        tok = self.cur
        if tok.kind == "ident":
            self.i += 1
            return _Raw("pos", (tok.text,), token=tok)
        if tok.kind == "not":
            self.i += 1
            return _Raw("neg", (self.eat("ident").text,), token=tok)
        if tok.kind == "choice":
            return self.explicit()
        lo = None
        if tok.kind == "nat":
            lo = int(self.eat("nat").text)
        if self.cur.kind != "{":
            self.fail("expected a choice atom")
        self.eat("{")
        names = self.atoms()
        self.eat("}")
        if self.cur.kind in ("=", "neq"):
            if lo is not None:
                self.fail("a count atom takes no lower bound", tok)
            op = self.cur.kind
            self.i += 1
            k = int(self.eat("nat").text)
            return _Raw("eq" if op == "=" else "neq", names, k, token=tok)
        hi = int(self.eat("nat").text) if self.cur.kind == "nat" else None
        return _Raw("card", names, lo or 0, hi, token=tok)

    def explicit(self):
        tok = self.eat("choice")
        self.eat("(")
        self.eat("[")
        names = self.atoms()
        self.eat("]")
        self.eat(",")
        self.eat("[")
        subsets = [self.subset()]
        while self.accept(","):
            subsets.append(self.subset())
        self.eat("]")
        self.eat(")")
        return _Raw("ext", names, tuple(subsets), token=tok)

    def subset(self):
        self.eat("[")
        if self.accept("]"):
            return ()
        names = self.atoms()
        self.eat("]")
        return names


_CHOICE_KINDS = {"card", "eq", "neq", "ext"}


def _build_atom(sig, raw: _Raw) -> ChoiceAtom:
    dom = sig.set(raw.names)
    try:
        if raw.kind == "pos":
            return ChoiceAtom(dom, PosLiteral())
        if raw.kind == "neg":
            return ChoiceAtom(dom, NegLiteral())
        if raw.kind == "card":
            return ChoiceAtom(dom, Cardinality(raw.a, raw.b))
        if raw.kind == "eq":
            return ChoiceAtom(dom, CountEq(raw.a))
        if raw.kind == "neq":
            return ChoiceAtom(dom, CountNeq(raw.a))
        if any(n not in raw.names for s in raw.a for n in s):
            raise InvalidChoiceAtom("satisfier outside the domain")
        return ChoiceAtom(dom, Extensional(tuple(sig.mask_of(s) for s in raw.a)))
    except InvalidChoiceAtom as exc:
        t = raw.token
        raise ParseError(str(exc), t.line, t.col, t.text) from None


def parse_program(text, signature: Signature | None = None, extra_atoms=()):
    """Parse text into a ChoiceProgram or, when ``|`` heads occur, a DisjunctiveProgram.

    The signature defaults to the atoms in the text plus ``extra_atoms``.
    """
    if isinstance(text, SourceText):
        text = text.text
    raw_rules = _Parser(tokenize(text)).program()
    names = set(extra_atoms)
    for head, body, _ in raw_rules:
        for r in [head, *body]:
            names.update(r.names)
            if r.kind == "ext":
                for s in r.a:
                    names.update(s)
    if signature is None:
        signature = Signature.of(names)
    else:
        missing = names - set(signature.atoms)
        if missing:
            raise ParseError(f"atoms outside the signature: {sorted(missing)}", 1, 1)
    disjunctive = any(h.kind == "disj" for h, _, _ in raw_rules)
    if disjunctive:
        return _disjunctive(signature, raw_rules)
    rules = [ChoiceRule(_build_atom(signature, h), tuple(_build_atom(signature, b) for b in body))
             for h, body, _ in raw_rules]
    return ChoiceProgram(signature, tuple(rules))


def _disjunctive(sig, raw_rules):
    rules = []
    for head, body, start in raw_rules:
        for r in [head, *body]:
            if r.kind in _CHOICE_KINDS:
                t = r.token
                raise DialectError(
                    f"{t.line}:{t.col}: disjunctive heads cannot be mixed with choice atoms")
        if head.kind == "neg":
            t = head.token
            raise DialectError(f"{t.line}:{t.col}: negated head in a disjunctive program")
        pos = [b.names[0] for b in body if b.kind == "pos"]
        neg = [b.names[0] for b in body if b.kind == "neg"]
        rules.append(DisjunctiveRule(sig.set(head.names), sig.set(pos), sig.set(neg)))
    return DisjunctiveProgram(sig, tuple(rules))


def parse_atom_list(text: str, sig: Signature):
    """``"p,q"`` to an AtomSet; empty string is the empty set."""
    names = [n.strip() for n in text.split(",") if n.strip()]
    return sig.set(names)
