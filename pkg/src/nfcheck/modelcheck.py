"""Finite membership structures and brute-force evaluation of formulas.

Hereditarily finite sets are represented as nested ``frozenset`` values.
:func:`build_hf_universe` closes a list of seed sets downward and turns the
result into a :class:`Universe` whose quantifiers range over all elements.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional, Union

from .syntax import (BINARY, And, Atom, Exists, Forall, Formula, Iff, Implies,
                     Not, Or, Rel, desugar, free_vars, parse)

__all__ = [
    "Universe", "UniverseError", "UnboundVariableError", "RankCapError",
    "MissingElementError", "EMPTY", "hf_rank", "hf_key", "hf_format", "hf_parse",
    "hf_closure", "hf_sets_of_rank_at_most", "hf_wiener", "build_hf_universe",
    "wiener_pair", "evaluate", "satisfying", "load_universe", "dump_universe",
    "pair_body", "pair_equation", "pair_predicate", "MAX_RANK_CAP",
]

EMPTY = frozenset()
MAX_RANK_CAP = 6


class UniverseError(ValueError):
    pass


class UnboundVariableError(KeyError):
    pass


class RankCapError(UniverseError):
    pass


class MissingElementError(UniverseError):
    pass


# ---------------------------------------------------------------- HF sets

@lru_cache(maxsize=None)
def hf_rank(s: frozenset) -> int:
    return max((hf_rank(m) + 1 for m in s), default=0)


@lru_cache(maxsize=None)
def hf_key(s: frozenset) -> tuple:
    """Canonical sort key: rank, then the sorted keys of the members."""
    return (hf_rank(s), tuple(sorted(hf_key(m) for m in s)))


def hf_format(s: frozenset) -> str:
    return "{" + ", ".join(hf_format(m) for m in sorted(s, key=hf_key)) + "}"


_HF_TOKEN = re.compile(r"\s*([{},])")


def hf_parse(text: str) -> frozenset:
    """Parse ``{}``, ``{{}}``, ``{{}, {{}}}`` and so on."""
    stack = []
    result = None
    i = 0
    text = text.strip()
    while i < len(text):
        m = _HF_TOKEN.match(text, i)
        if m is None:
            raise ValueError(f"bad set description at offset {i}: {text!r}")
        ch = m.group(1)
        i = m.end()
        if ch == "{":
            stack.append([])
        elif ch == "}":
            if not stack:
                raise ValueError(f"unbalanced braces: {text!r}")
            done = frozenset(stack.pop())
            if stack:
                stack[-1].append(done)
            elif result is None and not text[i:].strip():
                result = done
            else:
                raise ValueError(f"trailing input: {text!r}")
    if stack or result is None:
        raise ValueError(f"unbalanced braces: {text!r}")
    return result


def hf_closure(seeds: Iterable[frozenset]) -> set:
    """Seeds together with all their members, members of members, ..."""
    out = set()
    todo = list(seeds)
    while todo:
        s = todo.pop()
        if s not in out:
            out.add(s)
            todo.extend(s)
    return out


def hf_sets_of_rank_at_most(r: int) -> list:
    """All hereditarily finite sets of rank <= r, in canonical order."""
    level = [EMPTY]  # sets of rank < k
    for _ in range(r):
        subsets = [EMPTY]
        for m in level:
            subsets += [s | {m} for s in subsets]
        level = subsets
    return sorted(level, key=hf_key)


def hf_wiener(a: frozenset, b: frozenset) -> frozenset:
    """The set {{{a}, 0}, {{b}}}."""
    return frozenset({frozenset({frozenset({a}), EMPTY}), frozenset({frozenset({b})})})


# ---------------------------------------------------------------- universes

@dataclass(frozen=True, eq=False)
class Universe:
    """A finite membership structure.

    ``membership`` holds (member, container) pairs of element ids.  When
    ``extensional`` is set, no two elements may have the same members.
    ``sets`` optionally records the HF set each element stands for.
    """
    elements: tuple
    membership: frozenset
    labels: dict = field(default_factory=dict)
    extensional: bool = True
    sets: dict = field(default_factory=dict)

    def __post_init__(self):
        known = set(self.elements)
        if len(known) != len(self.elements):
            raise UniverseError("duplicate element ids")
        for m, c in self.membership:
            if m not in known or c not in known:
                raise UniverseError(f"membership pair ({m}, {c}) uses an undeclared element")
        for name, e in self.labels.items():
            if e not in known:
                raise UniverseError(f"label {name!r} refers to undeclared element {e!r}")
        if self.extensional:
            seen = {}
            for e, ms in self.members().items():
                if ms in seen:
                    raise UniverseError(f"elements {seen[ms]} and {e} have the same members")
                seen[ms] = e

    def members(self) -> dict:
        out = {e: set() for e in self.elements}
        for m, c in self.membership:
            out[c].add(m)
        return {e: frozenset(ms) for e, ms in out.items()}

    def find(self, members: Iterable[str]) -> Optional[str]:
        """The element whose members are exactly ``members``, if any."""
        return _member_index(self).get(frozenset(members))

    def element_of(self, s: frozenset) -> Optional[str]:
        return _set_index(self).get(s)

    def resolve(self, ref: str) -> str:
        """An element id, or a label naming one."""
        if ref in self.labels:
            return self.labels[ref]
        if ref in _position(self):
            return ref
        raise UniverseError(f"unknown element or label {ref!r}")

    def __len__(self) -> int:
        return len(self.elements)


@lru_cache(maxsize=64)
def _member_index(u: Universe) -> dict:
    return {ms: e for e, ms in u.members().items()}


@lru_cache(maxsize=64)
def _set_index(u: Universe) -> dict:
    return {s: e for e, s in u.sets.items()}


@lru_cache(maxsize=64)
def _position(u: Universe) -> dict:
    return {e: i for i, e in enumerate(u.elements)}


def build_hf_universe(seeds: Iterable[Union[frozenset, str]], rank_cap: int = MAX_RANK_CAP) -> Universe:
    """Universe of the downward closure of ``seeds`` (plus the empty set).

    Seeds may be frozensets or strings such as ``"{{}, {{}}}"``.  Elements
    are named ``e0, e1, ...`` in canonical order (rank first) and the label
    ``0`` is bound to the empty set.
    """
    if rank_cap > MAX_RANK_CAP:
        raise RankCapError(f"rank cap {rank_cap} exceeds the limit {MAX_RANK_CAP}")
    sets = [hf_parse(s) if isinstance(s, str) else s for s in seeds]
    for s in sets:
        if hf_rank(s) > rank_cap:
            raise RankCapError(f"seed {hf_format(s)} has rank {hf_rank(s)} > {rank_cap}")
    closed = sorted(hf_closure(sets + [EMPTY]), key=hf_key)
    ids = {s: f"e{i}" for i, s in enumerate(closed)}
    membership = frozenset((ids[m], ids[s]) for s in closed for m in s)
    return Universe(
        elements=tuple(ids[s] for s in closed),
        membership=membership,
        labels={"0": ids[EMPTY]},
        extensional=True,
        sets={ids[s]: s for s in closed},
    )


def wiener_pair(a: str, b: str, u: Universe) -> str:
    """The element of ``u`` equal to {{{a}, 0}, {{b}}}."""
    zero = u.labels.get("0") or u.find(())
    if zero is None:
        raise MissingElementError("universe has no empty set")

    def need(members, what):
        e = u.find(members)
        if e is None:
            raise MissingElementError(f"universe lacks {what}")
        return e

    sa = need({a}, f"{{{a}}}")
    left = need({sa, zero}, f"{{{{{a}}}, 0}}")
    sb = need({b}, f"{{{b}}}")
    right = need({sb}, f"{{{{{b}}}}}")
    return need({left, right}, f"the pair ({a}, {b})")


# ---------------------------------------------------------------- evaluation

class _Compiled:
    """Formula compiled to closures over an environment dict of element indices.

    Quantified subformulas are memoised on the values of their free variables.
    """

    def __init__(self, u: Universe):
        pos = _position(u)
        self.domain = range(len(u.elements))
        self.member = {(pos[m], pos[c]) for m, c in u.membership}
        self.cache = {}

    def compile(self, f: Formula):
        fn = self.cache.get(f)
        if fn is None:
            fn = self.cache[f] = self._build(f)
        return fn

    def _build(self, f: Formula):
        if isinstance(f, Atom):
            a, b = f.lhs, f.rhs
            if f.rel is Rel.EQUAL:
                return lambda env: env[a] == env[b]
            member = self.member
            return lambda env: (env[a], env[b]) in member
        if isinstance(f, Not):
            g = self.compile(f.body)
            return lambda env: not g(env)
        if isinstance(f, BINARY):
            left, right = self.compile(f.left), self.compile(f.right)
            if isinstance(f, And):
                return lambda env: left(env) and right(env)
            if isinstance(f, Or):
                return lambda env: left(env) or right(env)
            if isinstance(f, Implies):
                return lambda env: (not left(env)) or right(env)
            return lambda env: left(env) == right(env)
        if isinstance(f, (Forall, Exists)):
            return self._quantifier(f)
        raise TypeError(f"cannot evaluate {type(f).__name__}; desugar first")

    def _quantifier(self, f):
        body = self.compile(f.body)
        v = f.var
        deps = tuple(sorted(free_vars(f)))
        domain = self.domain
        memo = {}
        universal = isinstance(f, Forall)

        def run(env):
            key = tuple(env[d] for d in deps)
            hit = memo.get(key)
            if hit is not None:
                return hit
            saved = env.get(v, _UNSET)
            result = universal
            for e in domain:
                env[v] = e
                if body(env) != universal:
                    result = not universal
                    break
            if saved is _UNSET:
                del env[v]
            else:
                env[v] = saved
            memo[key] = result
            return result

        return run


_UNSET = object()


@lru_cache(maxsize=16)
def _compiler(u: Universe) -> _Compiled:
    return _Compiled(u)


@lru_cache(maxsize=256)
def _prepared(f: Formula) -> tuple:
    g = desugar(f)
    return g, frozenset(free_vars(g))


def evaluate(f: Union[str, Formula], u: Universe, env: dict) -> bool:
    """Tarskian satisfaction of ``f`` in ``u`` under ``env``.

    ``env`` maps each free variable to an element id or a label of ``u``.
    Raises :class:`UnboundVariableError` if a free variable is unbound.
    """
    if isinstance(f, str):
        f = parse(f)
    g, fv = _prepared(f)
    missing = sorted(fv - set(env))
    if missing:
        raise UnboundVariableError(f"unbound variable(s): {', '.join(missing)}")
    pos = _position(u)
    bound = {v: pos[u.resolve(env[v])] for v in fv}
    return _compiler(u).compile(g)(bound)


def satisfying(f: Union[str, Formula], u: Universe, var: str, env: Optional[dict] = None) -> list:
    """Elements at which ``f`` holds when ``var`` ranges over the universe."""
    env = dict(env or {})
    out = []
    for e in u.elements:
        env[var] = e
        if evaluate(f, u, env):
            out.append(e)
    return out


# ---------------------------------------------------------------- pair formulas

def pair_body(y: str = "y", a: str = "a", b: str = "b", zero: str = "0") -> Formula:
    """Holds at ``y`` iff ``y`` is a member of the Wiener pair (a, b)."""
    return parse(
        f"(forall w (w in {y} <-> (forall k (k in w <-> k = {a})) or w = {zero}))"
        f" or (forall u (u in {y} <-> forall n (n in u <-> n = {b})))"
    )


def pair_equation(p: str = "p", a: str = "a", b: str = "b", zero: str = "0") -> Formula:
    """Holds iff ``p`` = (a, b): ``forall y (y in p <-> pair_body(y, a, b))``."""
    return Forall("y", Iff(Atom("y", Rel.MEMBER, p), pair_body("y", a, b, zero)))


def pair_predicate(x: str = "x", zero: str = "0", carrier: Optional[str] = None) -> Formula:
    """Holds iff ``x`` is a Wiener pair of some elements.

    In a finite universe the pair equation for (a, b) is only faithful when
    {a}, {{a}, 0}, {b} and {{b}} are present; otherwise it can hold at an
    unrelated element (e.g. the empty set).  Pass ``carrier`` to restrict
    the components to members of that variable's value, and evaluate in a
    universe containing the intermediate sets for every carrier pair.
    """
    body = pair_equation(x, "a", "b", zero)
    if carrier is not None:
        body = And(And(Atom("a", Rel.MEMBER, carrier), Atom("b", Rel.MEMBER, carrier)), body)
    return Exists("a", Exists("b", body))


# ---------------------------------------------------------------- files

def load_universe(path: Union[str, Path]) -> Universe:
    """Read a ``.u.json`` file."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        return Universe(
            elements=tuple(data["elements"]),
            membership=frozenset(tuple(p) for p in data["membership"]),
            labels=dict(data.get("labels", {})),
            extensional=bool(data.get("extensional", True)),
        )
    except (KeyError, TypeError) as exc:
        raise UniverseError(f"{path}: malformed universe file ({exc})") from exc


def dump_universe(u: Universe) -> str:
    data = {
        "elements": list(u.elements),
        "membership": sorted([list(p) for p in u.membership], key=lambda p: (_position(u)[p[1]], _position(u)[p[0]])),
        "labels": dict(sorted(u.labels.items())),
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
