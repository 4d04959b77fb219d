"""Seeded random formulas for property tests.

Three modes:

``arbitrary``   atoms drawn uniformly over the variable pool;
``acyclic``     atoms realise the edges of a random forest, so the variable
                graph is acyclic by construction;
``stratified``  random types are drawn first and only atoms consistent with
                them are used.

Atoms are combined into a random tree of binary connectives with occasional
negations, then some variables are bound by a quantifier placed at the
smallest subtree containing all of their occurrences.  Output is therefore
already desugared and rectified.

The pseudo-random stream is SplitMix64 (Steele, Lea & Flood 2014), so the
same seed yields the same formulas in any implementation.
"""
from __future__ import annotations

from dataclasses import dataclass

from .syntax import And, Atom, Exists, Forall, Formula, Iff, Implies, Not, Or, Rel

__all__ = ["SplitMix64", "GenConfig", "ConfigError", "MODES", "gen", "gen_many", "random_config"]

MODES = ("arbitrary", "acyclic", "stratified")
_MASK = (1 << 64) - 1


class SplitMix64:
    GAMMA = 0x9E3779B97F4A7C15
    MUL1 = 0xBF58476D1CE4E5B9
    MUL2 = 0x94D049BB133111EB

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + self.GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * self.MUL1) & _MASK
        z = ((z ^ (z >> 27)) * self.MUL2) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next()
            if r < limit:
                return r % n

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    num_vars: int = 4
    num_atoms: int = 3
    mode: str = "arbitrary"
    connective_depth: int = 4

    def validate(self) -> None:
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}")
        if self.num_vars < 1:
            raise ConfigError("num_vars must be at least 1")
        if self.num_atoms < 1:
            raise ConfigError("num_atoms must be at least 1")
        if self.connective_depth < 0 or self.num_atoms > 2 ** self.connective_depth:
            raise ConfigError(f"{self.num_atoms} atoms do not fit under connective depth {self.connective_depth}")
        if self.mode == "acyclic" and self.num_atoms > self.num_vars - 1:
            raise ConfigError("acyclic mode needs num_atoms <= num_vars - 1")


def _names(n: int) -> list:
    return [f"v{i}" for i in range(n)]


def _arbitrary_atoms(rng: SplitMix64, cfg: GenConfig) -> list:
    pool = _names(cfg.num_vars)
    rels = (Rel.MEMBER, Rel.EQUAL)
    return [Atom(rng.choice(pool), rng.choice(rels), rng.choice(pool)) for _ in range(cfg.num_atoms)]


def _acyclic_atoms(rng: SplitMix64, cfg: GenConfig) -> list:
    order = rng.shuffle(_names(cfg.num_vars))
    # random-parent forest: vertex order[i] (i >= 1) may hang from an earlier vertex
    children = rng.shuffle(list(range(1, cfg.num_vars)))[: cfg.num_atoms]
    out = []
    for i in sorted(children):
        child, parent = order[i], order[rng.below(i)]
        rel = rng.choice((Rel.MEMBER, Rel.EQUAL))
        a, b = (child, parent) if rng.below(2) else (parent, child)
        out.append(Atom(a, rel, b))
    return rng.shuffle(out)


def _stratified_atoms(rng: SplitMix64, cfg: GenConfig) -> list:
    pool = _names(cfg.num_vars)
    types = {v: rng.below(cfg.num_vars) for v in pool}
    allowed = []
    for a in pool:
        for b in pool:
            if types[b] == types[a] + 1:
                allowed.append(Atom(a, Rel.MEMBER, b))
            if types[b] == types[a]:
                allowed.append(Atom(a, Rel.EQUAL, b))
    return [rng.choice(allowed) for _ in range(cfg.num_atoms)]


_CONNECTIVES = (And, Or, Implies, Iff)


def _combine(rng: SplitMix64, leaves: list, depth: int) -> Formula:
    if len(leaves) == 1:
        f = leaves[0]
    else:
        # left part must fit under the remaining depth, as must the right
        cap = 2 ** (depth - 1)
        lo = max(1, len(leaves) - cap)
        hi = min(cap, len(leaves) - 1)
        k = lo + rng.below(hi - lo + 1)
        f = rng.choice(_CONNECTIVES)(_combine(rng, leaves[:k], depth - 1),
                                     _combine(rng, leaves[k:], depth - 1))
    if rng.below(4) == 0:
        f = Not(f)
    return f


def _positions(f: Formula, path=()):
    """(path, node) pairs; a path is the tuple of child indices from the root."""
    yield path, f
    if isinstance(f, Not):
        yield from _positions(f.body, path + (0,))
    elif isinstance(f, _CONNECTIVES):
        yield from _positions(f.left, path + (0,))
        yield from _positions(f.right, path + (1,))


def _wrap_at(f: Formula, path: tuple, wrap) -> Formula:
    if not path:
        return wrap(f)
    head, rest = path[0], path[1:]
    if isinstance(f, Not):
        return Not(_wrap_at(f.body, rest, wrap))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, _wrap_at(f.body, path, wrap))
    if head == 0:
        return type(f)(_wrap_at(f.left, rest, wrap), f.right)
    return type(f)(f.left, _wrap_at(f.right, rest, wrap))


def _bind(rng: SplitMix64, f: Formula) -> Formula:
    occurs = {}
    for path, node in _positions(f):
        if isinstance(node, Atom):
            for v in (node.lhs, node.rhs):
                occurs.setdefault(v, []).append(path)
    binds = []
    for v in sorted(occurs):
        if rng.below(2):
            continue
        paths = occurs[v]
        common = paths[0]
        for p in paths[1:]:
            n = 0
            while n < min(len(common), len(p)) and common[n] == p[n]:
                n += 1
            common = common[:n]
        binds.append((common, rng.choice((Forall, Exists)), v))
    # deepest first so that outer paths stay valid after wrapping
    for path, quant, v in sorted(binds, key=lambda b: -len(b[0])):
        f = _wrap_at(f, path, lambda g, q=quant, v=v: q(v, g))
    return f


def gen(cfg: GenConfig) -> Formula:
    cfg.validate()
    rng = SplitMix64(cfg.seed)
    if cfg.mode == "arbitrary":
        leaves = _arbitrary_atoms(rng, cfg)
    elif cfg.mode == "acyclic":
        leaves = _acyclic_atoms(rng, cfg)
    else:
        leaves = _stratified_atoms(rng, cfg)
    return _bind(rng, _combine(rng, leaves, cfg.connective_depth))


def random_config(seed: int, mode: str = "arbitrary", max_vars: int = 10, max_atoms: int = 14,
                  connective_depth: int = 4) -> GenConfig:
    """A config whose sizes are themselves drawn from ``seed``."""
    rng = SplitMix64(seed ^ 0x5DEECE66D)
    n = 1 + rng.below(max_vars)
    if mode == "acyclic":
        n = max(n, 2)
        atoms = 1 + rng.below(min(max_atoms, n - 1))
    else:
        atoms = 1 + rng.below(max_atoms)
    return GenConfig(seed=seed, num_vars=n, num_atoms=atoms, mode=mode, connective_depth=connective_depth)


def gen_many(count: int, seed: int = 0, mode: str = "arbitrary", **sizes) -> list:
    """``count`` formulas from consecutive seeds with randomly drawn sizes."""
    return [gen(random_config(seed + i, mode, **sizes)) for i in range(count)]
