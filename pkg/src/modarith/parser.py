"""Recursive-descent parsers for terms, propositions, proof terms and the
three file formats (``.prf`` proof scripts, ``.thy`` theories, ``.t``
System T definitions).

ASCII and Unicode spellings are both accepted: ``forall``/``∀``,
``exists``/``∃``, ``=>``/``⇒``, ``/\\``/``∧``, ``\\/``/``∨``, ``~``/``¬``,
``<=>``/``⇔``, ``true``/``⊤``, ``false``/``⊥``, ``in``/``∈``, ``*``/``×``,
``->``/``→``, ``\\``/``λ``, ``eps``/``ε``.  Free variables get the sort
required by the position where they first occur.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .comprehension import ComprehensionKey
from .kernel import AxiomUse
from .proofs import (
    App,
    Case,
    ExElim,
    ExFalso,
    ExIntro,
    Fst,
    InL,
    InR,
    Lam,
    Pair,
    PVar,
    Snd,
    TApp,
    TLam,
    TruthIntro,
)
from .rewrite import PropRule, RuleSet, TermRule
from .syntax import (
    BOT,
    EQ,
    MEM,
    SUCC,
    TOP,
    ZERO,
    And,
    Atom,
    Exists,
    Fn,
    Forall,
    Imp,
    Or,
    Signature,
    SortError,
    Var,
    iff,
    numeral,
)
from .theories import SchemeInstanceRequest, Theory, load_theory
from .translations import (
    NAT_TYPE,
    ArrowT,
    TAbs,
    TApply,
    TRec,
    TSucc,
    TTypeError,
    TVar,
    TZero,
    t_numeral,
    type_of,
)


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)
        self.message = message
        self.line = line
        self.col = col


# --------------------------------------------------------------------------
# Tokens

_UNICODE = {
    "⇒": "=>", "→": "->", "∧": "/\\", "∨": "\\/", "¬": "~", "λ": "\\",
    "⊤": "true", "⊥": "false", "∈": "in", "×": "*", "⟨": "<", "⟩": ">",
    "⇔": "<=>", "↔": "<=>", "∀": "forall", "∃": "exists", "ε": "eps",
}
_SYMBOLS = [
    "-->", "<=>", ":=", "=>", "->", "\\/", "/\\", "~", "\\", ".", ",", ":",
    "(", ")", "[", "]", "{", "}", "|", "<", ">", "=", "+", "*",
]
_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*|%[^\n]*)
  | (?P<num>\d+)
  | (?P<str>"[^"\n]*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*)
  | (?P<uni>[⇒→∧∨¬λ⊤⊥∈×⟨⟩⇔↔∀∃ε])
  | (?P<sym>"""
    + "|".join(re.escape(s) for s in _SYMBOLS)
    + r""")
    """,
    re.VERBOSE,
)
_WORDS = {"true", "false", "forall", "exists", "in", "eps"}


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "str", "sym", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    pos, line, lstart = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - lstart + 1)
        kind = m.lastgroup
        s = m.group()
        col = pos - lstart + 1
        if kind == "uni":
            s = _UNICODE[s]
            kind = "ident" if s in _WORDS else "sym"
        if kind != "ws":
            out.append(Token(kind, s, line, col))
        nl = s.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            lstart = pos + s.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - lstart + 1))
    return out


# --------------------------------------------------------------------------
# Core parser


class _Cell:
    """A bound variable whose sort may be fixed by its first use."""

    __slots__ = ("name", "sort")

    def __init__(self, name, sort):
        self.name = name
        self.sort = sort


class Parser:
    def __init__(self, text: str, theory: Theory | None = None, signature: Signature | None = None):
        self.toks = tokenize(text)
        self.pos = 0
        self.theory = theory
        self._sig = signature
        self.scope: list[_Cell] = []
        self.free: dict[str, str] = {}
        # names whose sort was defaulted rather than dictated by a position
        self._unsorted: set = set()

    # ---- plumbing

    @property
    def sig(self) -> Signature:
        if self.theory is not None:
            return self.theory.signature
        if self._sig is None:
            raise ParseError("no signature to parse against")
        return self._sig

    @property
    def default_sort(self) -> str:
        return self.theory.default_sort if self.theory is not None else "iota"

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, *texts) -> bool:
        t = self.peek()
        return t.kind in ("sym", "ident") and t.text in texts

    def next(self) -> Token:
        t = self.peek()
        self.pos = min(self.pos + 1, len(self.toks) - 1)
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        found = tok.text or "end of input"
        return ParseError(f"{msg} (found {found!r})", tok.line, tok.col)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.next()

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def ident(self, what: str = "identifier") -> str:
        t = self.peek()
        if t.kind != "ident":
            raise self.error(f"expected {what}")
        return self.next().text

    def end(self):
        if self.peek().kind != "eof":
            raise self.error("unexpected trailing input")

    def sort_name(self) -> str:
        s = self.ident("sort")
        if s not in self.sig.sorts:
            raise self.error(f"unknown sort {s!r}", self.toks[self.pos - 1])
        return s

    # ---- variables

    def lookup(self, name: str) -> Optional[_Cell]:
        for c in reversed(self.scope):
            if c.name == name:
                return c
        return None

    def var_use(self, name: str, expected: Optional[str], tok: Token) -> Var:
        cell = self.lookup(name)
        current = cell.sort if cell is not None else self.free.get(name)
        if current is None:
            current = expected or self.default_sort
            if expected is None:
                self._unsorted.add(name)
        elif expected is not None and current != expected:
            if name not in self._unsorted:
                raise ParseError(
                    f"variable {name} has sort {current} but {expected} is expected", tok.line, tok.col
                )
            current = expected
        if expected is not None:
            self._unsorted.discard(name)
        if cell is not None:
            cell.sort = current
        else:
            self.free[name] = current
        return Var(name, current)

    def binder(self) -> _Cell:
        name = self.ident("variable")
        sort = self.sort_name() if self.accept(":") else None
        return _Cell(name, sort)

    def close(self, cell: _Cell) -> Var:
        return Var(cell.name, cell.sort or self.default_sort)

    # ---- terms

    def term(self, expected: Optional[str] = None):
        left = self.add_term(expected)
        if self.at("->"):
            tok = self.next()
            right = self.term(expected)
            return self.apply_fn("->", [left, right], tok)
        return left

    def add_term(self, expected):
        left = self.mul_term(expected)
        while self.at("+"):
            tok = self.next()
            left = self.apply_fn("+", [left, self.mul_term(None)], tok)
        return left

    def mul_term(self, expected):
        left = self.atom_term(expected)
        while self.at("*"):
            tok = self.next()
            left = self.apply_fn("*", [left, self.atom_term(None)], tok)
        return left

    def apply_fn(self, name, args, tok):
        rank = self.sig.functions.get(name)
        if rank is None:
            raise ParseError(f"unknown function symbol {name!r}", tok.line, tok.col)
        if len(rank[0]) != len(args):
            raise ParseError(f"{name} expects {len(rank[0])} arguments", tok.line, tok.col)
        fixed = [self.fix_sort(a, s, tok) for a, s in zip(args, rank[0])]
        return Fn(name, tuple(fixed))

    def fix_sort(self, t, sort, tok):
        """Re-sort a variable whose sort was only defaulted."""
        if isinstance(t, Var) and t.sort != sort:
            return self.var_use(t.name, sort, tok)
        if isinstance(t, Var):
            self._unsorted.discard(t.name)
        return t

    def _provisional(self, name) -> bool:
        return name in self._unsorted

    def atom_term(self, expected):
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            funcs = self.sig.functions
            if ZERO not in funcs or (int(tok.text) > 0 and SUCC not in funcs):
                raise ParseError("numerals need the symbols 0 and S", tok.line, tok.col)
            return numeral(int(tok.text))
        if self.accept("("):
            t = self.term(expected)
            self.expect(")")
            return t
        if self.at("{"):
            return self.class_term()
        if tok.kind == "ident" and tok.text not in ("forall", "exists", "true", "false", "in"):
            self.next()
            name = tok.text
            if self.at("("):
                self.next()
                rank = self.sig.functions.get(name)
                if rank is None:
                    raise ParseError(f"unknown function symbol {name!r}", tok.line, tok.col)
                args = []
                if not self.at(")"):
                    for i, s in enumerate(rank[0]):
                        if i:
                            self.expect(",")
                        args.append(self.term(s))
                self.expect(")")
                if len(args) != len(rank[0]):
                    raise ParseError(f"{name} expects {len(rank[0])} arguments", tok.line, tok.col)
                return Fn(name, tuple(args))
            if self.lookup(name) is None and name in self.sig.functions:
                rank = self.sig.functions[name]
                if rank[0]:
                    raise ParseError(f"{name} expects {len(rank[0])} arguments", tok.line, tok.col)
                return Fn(name)
            return self.var_use(name, expected, tok)
        raise self.error("expected a term")

    def class_term(self):
        tok = self.expect("{")
        cell = self.binder()
        if cell.sort is None:
            cell.sort = "iota"
        self.expect("|")
        self.scope.append(cell)
        body = self.prop()
        self.scope.pop()
        self.expect("}")
        if self.theory is None or self.theory.registry is None:
            raise ParseError("class terms need a theory with comprehension symbols", tok.line, tok.col)
        x = self.close(cell)
        from .syntax import free_vars

        params = sorted(free_vars(body) - {x}, key=lambda v: v.name)
        try:
            return self.theory.registry.class_term(ComprehensionKey(x, tuple(params), body))
        except SortError as e:
            raise ParseError(str(e), tok.line, tok.col) from None

    # ---- propositions

    def prop(self):
        left = self.imp_prop()
        if self.at("<=>"):
            self.next()
            return iff(left, self.imp_prop())
        return left

    def imp_prop(self):
        left = self.or_prop()
        if self.accept("=>"):
            return Imp(left, self.imp_prop())
        return left

    def or_prop(self):
        left = self.and_prop()
        if self.accept("\\/"):
            return Or(left, self.or_prop())
        return left

    def and_prop(self):
        left = self.unary_prop()
        if self.accept("/\\"):
            return And(left, self.and_prop())
        return left

    def unary_prop(self):
        if self.accept("~"):
            return Imp(self.unary_prop(), BOT)
        if self.at("forall", "exists"):
            return self.quantified()
        return self.primary_prop()

    def quantified(self):
        kw = self.next().text
        cells = [self.binder()]
        while self.accept(","):
            cells.append(self.binder())
        while self.peek().kind == "ident" and not self.at("forall", "exists"):
            cells.append(self.binder())
        self.expect(".")
        self.scope.extend(cells)
        body = self.prop()
        del self.scope[len(self.scope) - len(cells):]
        q = Forall if kw == "forall" else Exists
        for c in reversed(cells):
            body = q(self.close(c), body)
        return body

    def primary_prop(self):
        tok = self.peek()
        if self.accept("true"):
            return TOP
        if self.accept("false"):
            return BOT
        if tok.kind == "ident" and tok.text in self.sig.predicates and self.lookup(tok.text) is None:
            return self.predicate_atom()
        if self.at("("):
            save, free, unsorted = self.pos, dict(self.free), set(self._unsorted)
            first = None
            try:
                self.next()
                a = self.prop()
                self.expect(")")
                if not self.at("=", "in", "+", "*", "->"):
                    return a
            except ParseError as e:
                first = e
            self.pos, self.free, self._unsorted = save, free, unsorted
            try:
                return self.infix_atom()
            except ParseError as e:
                # report whichever reading got further
                if first is not None and (first.line, first.col) > (e.line, e.col):
                    raise first from None
                raise
        return self.infix_atom()

    def predicate_atom(self):
        tok = self.next()
        name = tok.text
        rank = self.sig.predicates[name]
        if not rank:
            if self.accept("("):
                self.expect(")")
            return Atom(name)
        self.expect("(")
        args = []
        for i, s in enumerate(rank):
            if i:
                self.expect(",")
            args.append(self.term(s))
        self.expect(")")
        return Atom(name, tuple(args))

    def infix_atom(self):
        tok = self.peek()
        save = self.pos
        left = self.term(None)
        if not self.at("=", "in"):
            raise self.error("expected a proposition")
        op = self.next().text
        rank = self.sig.predicates.get(op)
        if rank is None or len(rank) != 2:
            raise ParseError(f"unknown infix predicate {op!r}", tok.line, tok.col)
        if isinstance(left, Var) and left.sort != rank[0]:
            left = self.fix_sort(left, rank[0], tok)
        elif not isinstance(left, Var):
            from .syntax import sort_of

            try:
                if sort_of(left, self.sig) != rank[0]:
                    raise ParseError(f"left side of {op} must have sort {rank[0]}", tok.line, tok.col)
            except SortError as e:
                raise ParseError(str(e), tok.line, tok.col) from None
        right = self.term(rank[1])
        _ = save
        return Atom(op, (left, right))

    # ---- proofs

    PROOF_WORDS = {"I", "fst", "snd", "inl", "inr", "case", "absurd", "pack", "unpack"}

    def proof(self):
        if self.accept("\\"):
            return self.lambda_proof()
        return self.app_proof()

    def lambda_proof(self):
        name = self.ident("bound variable")
        if self.accept(":"):
            t = self.peek()
            if t.kind == "ident" and t.text in self.sig.sorts and self.peek(1).text == ".":
                self.next()
                self.expect(".")
                cell = _Cell(name, t.text)
                self.scope.append(cell)
                body = self.proof()
                self.scope.pop()
                return TLam(Var(name, t.text), body)
            dom = self.prop()
            self.expect(".")
            return Lam(name, dom, self.proof())
        self.expect(".")
        return Lam(name, None, self.proof())

    def app_proof(self):
        head = self.atom_proof()
        while True:
            if self.accept("["):
                head = TApp(head, self.term(None))
                self.expect("]")
            elif self.starts_atom_proof():
                head = App(head, self.atom_proof())
            else:
                return head

    def starts_atom_proof(self) -> bool:
        t = self.peek()
        return t.kind == "ident" or self.at("(", "<", "\\")

    def opt_prop(self):
        if self.accept(","):
            return self.prop()
        return None

    def atom_proof(self):
        tok = self.peek()
        if self.accept("\\"):
            return self.lambda_proof()
        if self.accept("("):
            p = self.proof()
            self.expect(")")
            return p
        if self.accept("<"):
            a = self.proof()
            self.expect(",")
            b = self.proof()
            self.expect(">")
            return Pair(a, b)
        if tok.kind != "ident":
            raise self.error("expected a proof term")
        word = self.next().text
        if word == "I":
            return TruthIntro()
        if word not in self.PROOF_WORDS or not self.at("("):
            return PVar(word)
        self.expect("(")
        if word in ("fst", "snd"):
            p = self.proof()
            out = Fst(p) if word == "fst" else Snd(p)
        elif word in ("inl", "inr"):
            p = self.proof()
            ann = self.opt_prop()
            out = InL(p, ann) if word == "inl" else InR(p, ann)
        elif word == "absurd":
            p = self.proof()
            out = ExFalso(p, self.opt_prop())
        elif word == "case":
            s = self.proof()
            self.expect(",")
            a = self.ident("proof variable")
            self.expect(".")
            l = self.proof()
            self.expect(",")
            b = self.ident("proof variable")
            self.expect(".")
            r = self.proof()
            out = Case(s, a, l, b, r)
        elif word == "pack":
            w = self.term(None)
            self.expect(",")
            p = self.proof()
            var = body = None
            if self.accept(","):
                cell = self.binder()
                if cell.sort is None:
                    cell.sort = self.default_sort
                self.expect(".")
                self.scope.append(cell)
                body = self.prop()
                self.scope.pop()
                var = self.close(cell)
                if isinstance(w, Var) and w.sort != var.sort:
                    w = self.fix_sort(w, var.sort, tok)
            out = ExIntro(w, p, var, body)
        else:  # unpack
            s = self.proof()
            self.expect(",")
            cell = self.binder()
            if cell.sort is None:
                cell.sort = self.default_sort
            h = self.ident("proof variable")
            self.expect(".")
            self.scope.append(cell)
            body = self.proof()
            self.scope.pop()
            out = ExElim(s, self.close(cell), h, body, self.opt_prop())
        self.expect(")")
        return out

    # ---- System T

    def ttype(self):
        if self.accept("("):
            a = self.ttype()
            self.expect(")")
        else:
            tok = self.next()
            if tok.text != "nat":
                raise self.error("expected a T type", tok)
            a = NAT_TYPE
        if self.accept("->"):
            return ArrowT(a, self.ttype())
        return a

    def tterm(self, env, defs):
        if self.accept("\\"):
            name = self.ident("variable")
            self.expect(":")
            ty = self.ttype()
            self.expect(".")
            return TAbs(name, ty, self.tterm({**env, name: ty}, defs))
        head = self.tatom(env, defs)
        while self.peek().kind in ("ident", "num") or self.at("(", "\\"):
            if self.at("\\"):
                head = TApply(head, self.tterm(env, defs))
            else:
                head = TApply(head, self.tatom(env, defs))
        return head

    def tatom(self, env, defs):
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            return t_numeral(int(tok.text))
        if self.accept("("):
            t = self.tterm(env, defs)
            self.expect(")")
            return t
        name = self.ident("T term")
        if name == "S" and self.at("("):
            self.next()
            t = self.tterm(env, defs)
            self.expect(")")
            return TSucc(t)
        if name == "Rec" and self.at("["):
            self.next()
            ty = self.ttype()
            self.expect("]")
            self.expect("(")
            a = self.tterm(env, defs)
            self.expect(",")
            f = self.tterm(env, defs)
            self.expect(",")
            n = self.tterm(env, defs)
            self.expect(")")
            return TRec(a, f, n, ty)
        if name in env:
            return TVar(name, env[name])
        if name in defs:
            return defs[name].term
        raise ParseError(f"unbound T variable {name!r}", tok.line, tok.col)


# --------------------------------------------------------------------------
# Entry points


def _theory_of(theory) -> Theory:
    if isinstance(theory, str):
        return load_theory(theory)
    return theory


def parse_term(text: str, theory, expected: str | None = None):
    p = Parser(text, _theory_of(theory) if not isinstance(theory, Signature) else None,
               theory if isinstance(theory, Signature) else None)
    t = p.term(expected)
    p.end()
    return t


def parse_prop(text: str, theory):
    p = Parser(text, _theory_of(theory) if not isinstance(theory, Signature) else None,
               theory if isinstance(theory, Signature) else None)
    a = p.prop()
    p.end()
    return a


def parse_proof(text: str, theory):
    p = Parser(text, _theory_of(theory))
    pi = p.proof()
    p.end()
    return pi


def parse_ttype(text: str):
    p = Parser(text, signature=Signature(frozenset()))
    a = p.ttype()
    p.end()
    return a


def parse_tterm(text: str, env: dict | None = None, defs: dict | None = None):
    p = Parser(text, signature=Signature(frozenset()))
    t = p.tterm(dict(env or {}), dict(defs or {}))
    p.end()
    return t


# ---- .prf


@dataclass
class TheoremDecl:
    name: str
    prop: object
    proof: object
    uses: tuple
    line: int = 0


@dataclass
class Script:
    theory: Theory
    theorems: list = field(default_factory=list)
    uses: list = field(default_factory=list)


def _resolve_theory(spec: str, base_dir: Path | None) -> Theory:
    if spec.endswith(".thy"):
        path = Path(spec)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return parse_theory_file(path.read_text(encoding="utf-8"), base_dir=path.parent)
    return load_theory(spec)


def parse_script(text: str, theory: Theory | str | None = None, base_dir: Path | None = None) -> Script:
    """Parse a ``.prf`` script.

    A ``theory <name>.`` line selects the theory unless one is passed in.
    ``use axiom <name> [as <label>] [with P := <prop>, x := <var>].``
    adds a hypothesis for every later theorem.
    """
    th = _theory_of(theory) if theory is not None else None
    p = Parser(text, th)
    script = None
    uses: list = []

    def need_theory(tok):
        nonlocal th, script
        if th is None:
            th = load_theory("ha-mod")
            p.theory = th
        if script is None:
            script = Script(th)
        return script

    while p.peek().kind != "eof":
        tok = p.peek()
        if p.accept("theory"):
            t2 = p.next()
            if t2.kind not in ("ident", "str"):
                raise p.error("expected a theory name", t2)
            spec = t2.text.strip('"')
            p.expect(".")
            if theory is None:
                if script is not None:
                    raise ParseError("theory must be selected before any other declaration", tok.line, tok.col)
                try:
                    th = _resolve_theory(spec, base_dir)
                except (KeyError, OSError) as e:
                    raise ParseError(str(e), t2.line, t2.col) from None
                p.theory = th
            continue
        if p.accept("use"):
            need_theory(tok)
            if not p.accept("axiom"):
                raise p.error("expected 'axiom'")
            name = p.ident("axiom name")
            label = p.ident("label") if p.accept("as") else None
            request = None
            if p.accept("with"):
                request = _instance_request(p, name)
            p.expect(".")
            try:
                th.axiom(name, request)
            except (KeyError, SortError) as e:
                raise ParseError(str(e.args[0] if e.args else e), tok.line, tok.col) from None
            uses.append(AxiomUse(name, label, request))
            continue
        if p.accept("theorem") or p.accept("lemma"):
            sc = need_theory(tok)
            name = p.ident("theorem name")
            p.expect(":")
            p.free = {}
            a = p.prop()
            p.expect(":=")
            pi = p.proof()
            p.expect(".")
            sc.theorems.append(TheoremDecl(name, a, pi, tuple(uses), tok.line))
            continue
        raise p.error("expected 'theory', 'use' or 'theorem'")
    sc = need_theory(None)
    sc.uses = uses
    return sc


def _instance_request(p: Parser, scheme: str) -> SchemeInstanceRequest:
    fields = {}
    while True:
        key = p.ident("field name")
        p.expect(":=")
        if key == "P":
            p.free = {}
            fields["P"] = p.prop()
        elif key == "x":
            fields["x"] = p.ident("variable")
        elif key == "params":
            names = [p.ident("variable")]
            while p.peek().kind == "ident" and not p.at("with"):
                names.append(p.ident())
            fields["params"] = names
        else:
            raise p.error(f"unknown instance field {key!r}")
        if not p.accept(","):
            break
    if "P" not in fields or "x" not in fields:
        raise p.error("an instance needs P := <prop> and x := <var>")
    P = fields["P"]
    from .syntax import free_vars

    fv = {v.name: v for v in free_vars(P)}
    x = fv.get(fields["x"], Var(fields["x"], "iota"))
    params = tuple(fv.get(n, Var(n, "iota")) for n in fields.get("params", ()))
    return SchemeInstanceRequest(scheme, P, x, params)


# ---- .thy


def parse_theory_file(text: str, base_dir: Path | None = None) -> Theory:
    """Parse a ``.thy`` file.

    Declarations: ``theory name.``, ``extends name.``, ``sort s.``,
    ``function f : s1 s2 -> s.``, ``function c : s.``, ``predicate P : s1 s2.``,
    ``predicate A.``, ``rule [name:] l --> r.``, ``prop-rule [name:] A --> B.``,
    ``axiom name : A.``.
    """
    toks = Parser(text, signature=Signature(frozenset({"iota"})))
    name = "user"
    base: Theory | None = None
    sorts: set = set()
    funcs: dict = {}
    preds: dict = {}
    raw_rules: list = []
    raw_axioms: list = []
    p = toks
    while p.peek().kind != "eof":
        tok = p.peek()
        if p.accept("theory"):
            name = p.ident("theory name")
            p.expect(".")
        elif p.accept("extends"):
            b = p.ident("theory name")
            try:
                base = load_theory(b)
            except KeyError as e:
                raise ParseError(str(e.args[0]), tok.line, tok.col) from None
            p.expect(".")
        elif p.accept("sort"):
            sorts.add(p.ident("sort"))
            while p.accept(","):
                sorts.add(p.ident("sort"))
            p.expect(".")
        elif p.accept("function"):
            f = _symbol_name(p)
            args: list = []
            res = None
            if p.accept(":"):
                while p.peek().kind == "ident":
                    args.append(p.next().text)
                if p.accept("->"):
                    res = p.ident("sort")
                elif len(args) == 1:
                    res, args = args[0], []
            if res is None:
                raise p.error("function declarations need a result sort")
            funcs[f] = (tuple(args), res)
            p.expect(".")
        elif p.accept("predicate"):
            q = _symbol_name(p)
            args = []
            if p.accept(":"):
                while p.peek().kind == "ident":
                    args.append(p.next().text)
            preds[q] = tuple(args)
            p.expect(".")
        elif p.at("rule", "prop-rule"):
            kind = p.next().text
            start = p.pos
            label = None
            if p.peek().kind == "ident" and p.peek(1).text == ":" and p.peek(2).text != "=":
                label = p.next().text
                p.next()
                start = p.pos
            depth = 0
            while not (depth == 0 and p.at(".") and _ends_decl(p)):
                if p.peek().kind == "eof":
                    raise p.error("unterminated rule")
                if p.at("(", "{", "["):
                    depth += 1
                elif p.at(")", "}", "]"):
                    depth -= 1
                p.next()
            raw_rules.append((kind, label, start, p.pos, tok))
            p.expect(".")
        elif p.accept("axiom"):
            ax = p.ident("axiom name")
            p.expect(":")
            start = p.pos
            while not (p.at(".") and _ends_decl(p)):
                if p.peek().kind == "eof":
                    raise p.error("unterminated axiom")
                p.next()
            raw_axioms.append((ax, start, p.pos, tok))
            p.expect(".")
        else:
            raise p.error("expected a declaration")

    if base is not None:
        sig = base.base_signature
        sorts |= set(sig.sorts)
        funcs = {**sig.functions, **funcs}
        preds = {**sig.predicates, **preds}
    try:
        sig = Signature(frozenset(sorts or {"iota"}), funcs, preds)
    except SortError as e:
        raise ParseError(str(e)) from None
    default = "iota" if "iota" in sig.sorts else sorted(sig.sorts)[0]
    registry = base.registry if base is not None else None
    if registry is not None:
        registry.signature = Signature(sig.sorts, {**registry.signature.functions, **funcs}, preds)
    th = Theory(name, sig, RuleSet(), {}, registry, default)
    term_rules = list(base.rules.term_rules) if base else []
    prop_rules = list(base.rules.prop_rules) if base else []
    schemes = list(base.rules.schemes) if base else []
    axioms = dict(base.axioms) if base else {}
    counts = {"rule": 0, "prop-rule": 0}
    for kind, label, start, stop, tok in raw_rules:
        counts[kind] += 1
        k = counts[kind] - 1
        sub = Parser("", th)
        sub.toks = p.toks[start:stop] + [Token("eof", "", tok.line, tok.col)]
        try:
            if kind == "rule":
                lhs = sub.term(None)
                sub.expect("-->")
                rhs = sub.term(None)
                sub.end()
                term_rules.append(TermRule(lhs, rhs, label or f"rule-{k + 1}"))
            else:
                lhs = sub.prop()
                sub.expect("-->")
                rhs = sub.prop()
                sub.end()
                prop_rules.append(PropRule(lhs, rhs, label or f"prop-rule-{k + 1}"))
        except (ValueError, SortError) as e:
            raise ParseError(str(e), tok.line, tok.col) from None
    for ax, start, stop, tok in raw_axioms:
        sub = Parser("", th)
        sub.toks = p.toks[start:stop] + [Token("eof", "", tok.line, tok.col)]
        axioms[ax] = sub.prop()
        sub.end()
    th.rules = RuleSet(term_rules, prop_rules, schemes)
    th.axioms = axioms
    try:
        th.validate()
    except SortError as e:
        raise ParseError(str(e)) from None
    return th


def _symbol_name(p: Parser) -> str:
    t = p.next()
    if t.kind in ("ident", "num") or t.text in ("+", "*", "=", "->"):
        return t.text
    if t.text == "in":
        return MEM
    raise p.error("expected a symbol name", t)


def _ends_decl(p: Parser) -> bool:
    nxt = p.peek(1)
    return nxt.kind == "eof" or nxt.text in (
        "rule", "prop-rule", "axiom", "sort", "function", "predicate", "theory", "extends",
    )


# ---- .t


@dataclass
class TDef:
    name: str
    type: object
    term: object
    line: int = 0


def parse_t_file(text: str) -> list:
    """Parse ``tdef <name> : <type> := <term>.`` declarations in order.

    Earlier definitions may be used by name in later ones.
    """
    p = Parser(text, signature=Signature(frozenset()))
    defs: dict = {}
    out = []
    while p.peek().kind != "eof":
        tok = p.peek()
        if not p.accept("tdef"):
            raise p.error("expected 'tdef'")
        name = p.ident("definition name")
        p.expect(":")
        ty = p.ttype()
        p.expect(":=")
        t = p.tterm({}, defs)
        p.expect(".")
        try:
            got = type_of(t)
        except TTypeError as e:
            raise ParseError(str(e), tok.line, tok.col) from None
        if got != ty:
            raise ParseError(f"{name} has type {got}, declared {ty}", tok.line, tok.col)
        d = TDef(name, ty, t, tok.line)
        defs[name] = d
        out.append(d)
    return out


_ = (EQ, TZero)
