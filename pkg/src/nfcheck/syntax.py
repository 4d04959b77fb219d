"""Formula syntax: AST, parser, desugaring, rectification and printing.

Formulas are built from variables only, related by membership (``in``) and
equality (``=``).  The parser accepts a small amount of sugar (chained atoms,
``!=``/``notin``, bounded quantifiers, ``exists!``) which :func:`desugar`
removes.  Every analysis in the package expects formulas that have been
desugared and rectified; :func:`normalize` does both.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

__all__ = [
    "Rel", "Atom", "Not", "And", "Or", "Implies", "Iff", "Forall", "Exists",
    "ExistsUnique", "Bounded", "Chain", "Formula", "ComprehensionInstance",
    "FormulaSyntaxError", "InstanceError", "parse", "desugar", "rectify",
    "normalize", "free_vars", "variables", "atoms", "pretty", "check_instance",
    "split_occurrences", "fresh_name", "NfFile", "parse_nf",
]

Pos = Optional[tuple]


class Rel(enum.Enum):
    MEMBER = "in"
    EQUAL = "="


@dataclass(frozen=True)
class Atom:
    lhs: str
    rel: Rel
    rhs: str
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"
    pos: Pos = field(default=None, compare=False, repr=False)


# -- sugar, removed by desugar() --

@dataclass(frozen=True)
class ExistsUnique:
    var: str
    body: "Formula"
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Bounded:
    """``forall v in b . body`` or ``exists v in b . body``."""
    quantifier: str
    var: str
    bound: str
    body: "Formula"
    pos: Pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Chain:
    """``t0 r1 t1 r2 t2 ...`` with relations among in, notin, =, !=."""
    terms: tuple
    rels: tuple
    pos: Pos = field(default=None, compare=False, repr=False)


Formula = Union[Atom, Not, And, Or, Implies, Iff, Forall, Exists,
                ExistsUnique, Bounded, Chain]

BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists, ExistsUnique, Bounded)
_BINARY_OPS = {And: "and", Or: "or", Implies: "->", Iff: "<->"}


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


# ---------------------------------------------------------------- lexing

KEYWORDS = {"in", "notin", "and", "or", "not", "forall", "exists", "iff", "implies"}
IDENT = re.compile(r"[A-Za-z0-9_']+")

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|!=|=|\(|\)|,|\.)
  | (?P<eu>exists!)
  | (?P<word>[A-Za-z0-9_']+)
""", re.VERBOSE)

_ALIASES = {"iff": "<->", "implies": "->"}


@dataclass(frozen=True)
class _Tok:
    kind: str  # "kw", "ident", "op", "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        col = i - line_start + 1
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "ws":
            nl = s.count("\n")
            if nl:
                line += nl
                line_start = i + s.rindex("\n") + 1
        elif kind == "eu":
            toks.append(_Tok("kw", "exists!", line, col))
        elif kind == "op":
            toks.append(_Tok("op", s, line, col))
        elif s in KEYWORDS:
            toks.append(_Tok("kw", _ALIASES.get(s, s), line, col))
        else:
            toks.append(_Tok("ident", s, line, col))
        i = m.end()
    toks.append(_Tok("eof", "", line, len(text) - line_start + 1))
    return toks


# ---------------------------------------------------------------- parsing

_RELS = {"in", "notin", "=", "!="}


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def at(self, *texts: str) -> bool:
        t = self.tok
        return t.kind in ("kw", "op") and t.text in texts

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def fail(self, what: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise FormulaSyntaxError(f"expected {what}, found {found}", t.line, t.col)

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def var(self) -> str:
        if self.tok.kind != "ident":
            self.fail("variable")
        return self.advance().text

    def formula(self) -> Formula:
        f = self.imp()
        while self.at("<->"):
            self.advance()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.at("->"):
            self.advance()
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.at("or"):
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.at("and"):
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.tok
        if self.at("not"):
            self.advance()
            return Not(self.unary())
        if self.at("forall", "exists", "exists!"):
            return self.quant()
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "ident":
            return self.atomchain()
        self.fail("formula")

    def quant(self) -> Formula:
        q = self.advance()
        names = [(self.tok.line, self.tok.col, self.var())]
        while self.tok.kind == "ident" or self.at(","):
            if self.at(","):
                self.advance()
            names.append((self.tok.line, self.tok.col, self.var()))
        bound = None
        if self.at("in"):
            self.advance()
            bound = self.var()
        if self.at("."):
            self.advance()
        body = self.formula()
        for line, col, name in reversed(names):
            pos = (line, col)
            if bound is not None:
                body = Bounded(q.text, name, bound, body, pos=pos)
            elif q.text == "forall":
                body = Forall(name, body, pos=pos)
            elif q.text == "exists":
                body = Exists(name, body, pos=pos)
            else:
                body = ExistsUnique(name, body, pos=pos)
        return body

    def atomchain(self) -> Formula:
        pos = (self.tok.line, self.tok.col)
        terms = [self.var()]
        rels = []
        while self.at(*_RELS):
            rels.append(self.advance().text)
            terms.append(self.var())
        if not rels:
            self.fail("relation (in, notin, =, !=)")
        if len(rels) == 1 and rels[0] in ("in", "="):
            return Atom(terms[0], Rel(rels[0]), terms[1], pos=pos)
        return Chain(tuple(terms), tuple(rels), pos=pos)


def parse(text: str) -> Formula:
    """Parse concrete syntax into a (possibly sugared) formula."""
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return f


# ---------------------------------------------------------------- traversal

def _children(f: Formula) -> tuple:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, (Not, Forall, Exists, ExistsUnique, Bounded)):
        return (f.body,)
    return ()


def _walk(f: Formula) -> Iterator[Formula]:
    """Pre-order, left to right, without recursion."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(_children(g)))


def atoms(f: Formula) -> list:
    """Atom occurrences in pre-order; list index is the occurrence id."""
    return [g for g in _walk(f) if isinstance(g, Atom)]


def variables(f: Formula) -> set:
    """Every variable name occurring in ``f``, bound or free."""
    out = set()
    for g in _walk(f):
        if isinstance(g, Atom):
            out.update((g.lhs, g.rhs))
        elif isinstance(g, Chain):
            out.update(g.terms)
        elif isinstance(g, Bounded):
            out.update((g.var, g.bound))
        elif isinstance(g, QUANTIFIERS):
            out.add(g.var)
    return out


def free_vars(f: Formula) -> set:
    if isinstance(f, Atom):
        return {f.lhs, f.rhs}
    if isinstance(f, Chain):
        return set(f.terms)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Bounded):
        return (free_vars(f.body) - {f.var}) | {f.bound}
    return free_vars(f.body) - {f.var}


def fresh_name(base: str, taken) -> str:
    """``base`` + the smallest numeric suffix not in ``taken``."""
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


# ---------------------------------------------------------------- desugar

def _conj(parts: list) -> Formula:
    f = parts[0]
    for p in parts[1:]:
        f = And(f, p)
    return f


def desugar(f: Formula) -> Formula:
    """Remove chains, negated relations, bounded quantifiers and ``exists!``.

    ``exists! x . phi`` becomes ``exists z forall x (phi <-> x = z)`` with
    ``z`` fresh for the whole formula.
    """
    taken = variables(f)

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return g
        if isinstance(g, Chain):
            parts = []
            for a, r, b in zip(g.terms, g.rels, g.terms[1:]):
                atom = Atom(a, Rel.MEMBER if r in ("in", "notin") else Rel.EQUAL, b, pos=g.pos)
                parts.append(Not(atom) if r in ("notin", "!=") else atom)
            return _conj(parts)
        if isinstance(g, Not):
            return Not(go(g.body))
        if isinstance(g, BINARY):
            return type(g)(go(g.left), go(g.right))
        if isinstance(g, Bounded):
            guard = Atom(g.var, Rel.MEMBER, g.bound, pos=g.pos)
            if g.quantifier == "forall":
                return Forall(g.var, Implies(guard, go(g.body)), pos=g.pos)
            if g.quantifier == "exists":
                return Exists(g.var, And(guard, go(g.body)), pos=g.pos)
            return go(ExistsUnique(g.var, And(guard, g.body), pos=g.pos))
        if isinstance(g, ExistsUnique):
            z = "z" if "z" not in taken else fresh_name("z", taken)
            taken.add(z)
            body = go(g.body)
            return Exists(z, Forall(g.var, Iff(body, Atom(g.var, Rel.EQUAL, z, pos=g.pos)),
                                    pos=g.pos), pos=g.pos)
        return type(g)(g.var, go(g.body), pos=g.pos)

    return go(f)


# ---------------------------------------------------------------- rectify

def rectify(f: Formula) -> Formula:
    """Alpha-rename binders so they are pairwise distinct and not free.

    A binder keeps its name the first time that name is bound, unless the
    name is also free in ``f``; otherwise it gets the name plus the smallest
    unused numeric suffix.
    """
    free = free_vars(f)
    taken = variables(f)
    bound_once = set()

    def go(g: Formula, env: dict) -> Formula:
        if isinstance(g, Atom):
            return Atom(env.get(g.lhs, g.lhs), g.rel, env.get(g.rhs, g.rhs), pos=g.pos)
        if isinstance(g, Not):
            return Not(go(g.body, env))
        if isinstance(g, BINARY):
            return type(g)(go(g.left, env), go(g.right, env))
        if isinstance(g, (Forall, Exists)):
            v = g.var
            if v in free or v in bound_once:
                new = fresh_name(v, taken)
                taken.add(new)
            else:
                new = v
            bound_once.add(new)
            return type(g)(new, go(g.body, {**env, v: new}), pos=g.pos)
        raise TypeError(f"rectify expects a desugared formula, got {type(g).__name__}")

    return go(f, {})


def normalize(f: Union[str, Formula]) -> Formula:
    """Parse (if given text), desugar and rectify."""
    if isinstance(f, str):
        f = parse(f)
    return rectify(desugar(f))


def split_occurrences(f: Formula, names) -> Formula:
    """Give every occurrence of each free name in ``names`` its own name.

    Occurrences are numbered in pre-order: ``0`` occurring three times
    becomes ``0_1``, ``0_2``, ``0_3``.  A name occurring once is left alone.
    Sound for comprehension parameters: the scheme quantifies parameters
    universally, so distinct parameters may later be instantiated equally.
    """
    free = free_vars(f)
    names = [n for n in names if n in free]
    counts = {n: 0 for n in names}
    for a in atoms(f):
        for side in (a.lhs, a.rhs):
            if side in counts:
                counts[side] += 1
    targets = {n for n, c in counts.items() if c > 1}
    if not targets:
        return f
    taken = variables(f)
    seen = {n: 0 for n in targets}

    def rename(n: str, env: set) -> str:
        if n not in targets or n in env:
            return n
        seen[n] += 1
        new = f"{n}_{seen[n]}"
        while new in taken:
            new += "'"
        taken.add(new)
        return new

    def go(g: Formula, bound: frozenset) -> Formula:
        if isinstance(g, Atom):
            lhs = rename(g.lhs, bound)
            return Atom(lhs, g.rel, rename(g.rhs, bound), pos=g.pos)
        if isinstance(g, Not):
            return Not(go(g.body, bound))
        if isinstance(g, BINARY):
            left = go(g.left, bound)
            return type(g)(left, go(g.right, bound))
        if isinstance(g, (Forall, Exists)):
            return type(g)(g.var, go(g.body, bound | {g.var}), pos=g.pos)
        raise TypeError(f"split_occurrences expects a desugared formula, got {type(g).__name__}")

    return go(f, frozenset())


# ---------------------------------------------------------------- printing

def _is_quantified(f: Formula) -> bool:
    while isinstance(f, Not):
        f = f.body
    return isinstance(f, QUANTIFIERS)


def _operand(f: Formula) -> str:
    s = pretty(f)
    return f"({s})" if _is_quantified(f) else s


def _scope(f: Formula) -> str:
    s = pretty(f)
    return s if isinstance(f, BINARY + QUANTIFIERS) else f"({s})"


def pretty(f: Formula) -> str:
    """Render ``f`` so that ``parse(pretty(f)) == f``."""
    if isinstance(f, Atom):
        return f"{f.lhs} {f.rel.value} {f.rhs}"
    if isinstance(f, Chain):
        out = [f.terms[0]]
        for r, t in zip(f.rels, f.terms[1:]):
            out += [r, t]
        return " ".join(out)
    if isinstance(f, Not):
        inner = pretty(f.body)
        return f"not {inner}" if isinstance(f.body, (Atom, Chain, Not) + QUANTIFIERS + BINARY) else f"not ({inner})"
    if isinstance(f, BINARY):
        return f"({_operand(f.left)} {_BINARY_OPS[type(f)]} {_operand(f.right)})"
    if isinstance(f, Bounded):
        return f"{f.quantifier} {f.var} in {f.bound} {_scope(f.body)}"
    kw = {Forall: "forall", Exists: "exists", ExistsUnique: "exists!"}[type(f)]
    return f"{kw} {f.var} {_scope(f.body)}"


# ---------------------------------------------------------------- comprehension

class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class ComprehensionInstance:
    """``forall params exists x forall target (target in x <-> body)``."""
    target: str
    body: Formula
    parameters: tuple = ()

    def set_variable(self) -> str:
        """Name for the comprehension set, chosen so it does not occur in the body."""
        taken = variables(self.body) | {self.target} | set(self.parameters)
        return "x" if "x" not in taken else fresh_name("x", taken)

    def axiom(self) -> Formula:
        x = self.set_variable()
        f: Formula = Exists(x, Forall(self.target, Iff(Atom(self.target, Rel.MEMBER, x), self.body)))
        for w in reversed(self.parameters):
            f = Forall(w, f)
        return f


@dataclass(frozen=True)
class InstanceVerdict:
    admissible: bool
    set_variable: str
    free: frozenset


def check_instance(ci: ComprehensionInstance) -> InstanceVerdict:
    """Check the shape of a comprehension instance.

    Raises :class:`InstanceError` when the target is not free in the body or
    the body has a free variable that is neither target nor parameter.
    Acyclicity is not checked here.
    """
    fv = free_vars(ci.body)
    if ci.target not in fv:
        raise InstanceError(f"target {ci.target!r} is not free in the body")
    extra = sorted(fv - {ci.target} - set(ci.parameters))
    if extra:
        raise InstanceError(f"undeclared free variable(s): {', '.join(extra)}")
    return InstanceVerdict(True, ci.set_variable(), frozenset(fv))


# ---------------------------------------------------------------- .nf files

@dataclass(frozen=True)
class NfFile:
    formula: Formula
    target: Optional[str] = None
    params: tuple = ()
    split: tuple = ()
    comments: tuple = ()


_DIRECTIVE = re.compile(r"^\s*(params|target|split)\s*:(.*)$")


def parse_nf(text: str) -> NfFile:
    """Parse the ``.nf`` file format: ``#`` comments, header directives, one formula."""
    headers: dict = {}
    comments = []
    body_lines = []
    first_body_line = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if first_body_line is None:
            if stripped.startswith("#"):
                comments.append(stripped[1:].strip())
                body_lines.append("")
                continue
            m = _DIRECTIVE.match(line)
            if m:
                key, value = m.group(1), m.group(2)
                if key in headers:
                    raise FormulaSyntaxError(f"duplicate {key!r} directive", lineno, 1)
                headers[key] = [v for v in re.split(r"[\s,]+", value.strip()) if v]
                body_lines.append("")
                continue
            if stripped:
                first_body_line = lineno
        body_lines.append("" if stripped.startswith("#") else line)
    if first_body_line is None:
        raise FormulaSyntaxError("no formula", len(body_lines) + 1, 1)
    formula = parse("\n".join(body_lines))
    target = headers.get("target")
    if target is not None and len(target) != 1:
        raise FormulaSyntaxError("target directive takes exactly one variable", 1, 1)
    for key in headers:
        for name in headers[key]:
            if not IDENT.fullmatch(name) or name in KEYWORDS:
                raise FormulaSyntaxError(f"bad name {name!r} in {key} directive", 1, 1)
    return NfFile(
        formula=formula,
        target=target[0] if target else None,
        params=tuple(headers.get("params", ())),
        split=tuple(headers.get("split", ())),
        comments=tuple(comments),
    )
