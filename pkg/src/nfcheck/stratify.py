"""Stratification: integer types with ``type(b) = type(a) + 1`` for each atom
``a in b`` and ``type(a) = type(b)`` for each atom ``a = b``.

:func:`stratify` either returns a canonical :class:`TypeAssignment` or an
:class:`UnsatCertificate`, a closed walk in the variable graph whose signed
membership weight is nonzero.  Both outcomes can be re-checked without
trusting the solver.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

from .depgraph import VarGraph, build_graph, components
from .syntax import Formula, Rel, atoms, variables

__all__ = [
    "TypeAssignment", "UnsatCertificate", "MissingVariableError", "CertificateError",
    "stratify", "check_assignment", "check_certificate", "canonicalize", "verdict_json",
    "step_weight",
]

FORWARD = "forward"    # lhs -> rhs
BACKWARD = "backward"  # rhs -> lhs


class MissingVariableError(KeyError):
    pass


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class TypeAssignment:
    types: dict

    def __getitem__(self, v: str) -> int:
        return self.types[v]

    def to_json(self) -> dict:
        return dict(sorted(self.types.items()))


@dataclass(frozen=True)
class UnsatCertificate:
    """Closed walk of (occurrence id, direction) steps; ``forward`` goes lhs -> rhs."""
    closed_walk: tuple
    net_weight: int

    def to_json(self) -> dict:
        return {"closed_walk": [list(s) for s in self.closed_walk], "net_weight": self.net_weight}


def step_weight(rel: Rel, direction: str) -> int:
    """Type change along one step: +1 from element to container, -1 back, 0 for equality."""
    if rel is Rel.EQUAL:
        return 0
    return 1 if direction == FORWARD else -1


def stratify(f: Formula) -> Union[TypeAssignment, UnsatCertificate]:
    """Solve the type constraints of a desugared, rectified formula.

    Each component is labelled breadth-first from its least variable.  The
    first edge whose endpoints disagree closes a walk anchor -> u -> v ->
    anchor along the search tree; its weight is the size of the conflict.
    """
    g = build_graph(f)
    adj = g.incident()
    types = {}
    parent = {}  # vertex -> (occurrence id, direction) of the tree step into it
    for comp in components(g):
        anchor = comp[0]
        types[anchor] = 0
        parent[anchor] = None
        queue = deque([anchor])
        while queue:
            x = queue.popleft()
            for e in adj[x]:
                if e.u == x:
                    y, direction = e.v, FORWARD
                else:
                    y, direction = e.u, BACKWARD
                want = types[x] + step_weight(e.kind, direction)
                if y not in types:
                    types[y] = want
                    parent[y] = (e.occurrence_id, direction)
                    queue.append(y)
                elif types[y] != want:
                    return _certificate(g, parent, x, (e.occurrence_id, direction), y)
    return canonicalize(TypeAssignment(types), g)


def _path_from_anchor(g: VarGraph, parent: dict, v: str) -> list:
    by_id = {e.occurrence_id: e for e in g.edges}
    steps = []
    while parent[v] is not None:
        i, direction = parent[v]
        steps.append((i, direction))
        e = by_id[i]
        v = e.u if direction == FORWARD else e.v
    steps.reverse()
    return steps


def _reverse(steps: list) -> list:
    flip = {FORWARD: BACKWARD, BACKWARD: FORWARD}
    return [(i, flip[d]) for i, d in reversed(steps)]


def _certificate(g: VarGraph, parent: dict, x: str, step: tuple, y: str) -> UnsatCertificate:
    walk = _path_from_anchor(g, parent, x) + [step] + _reverse(_path_from_anchor(g, parent, y))
    weight = _walk_weight(g, walk)
    if weight < 0:
        walk, weight = _reverse(walk), -weight
    return UnsatCertificate(tuple(walk), weight)


def _walk_weight(g: VarGraph, walk) -> int:
    by_id = {e.occurrence_id: e for e in g.edges}
    return sum(step_weight(by_id[i].kind, d) for i, d in walk)


def check_assignment(f: Formula, t) -> bool:
    """True iff ``t`` (a TypeAssignment or mapping) satisfies every atom of ``f``."""
    types = t.types if isinstance(t, TypeAssignment) else t
    missing = sorted(variables(f) - set(types))
    if missing:
        raise MissingVariableError(f"no type for: {', '.join(missing)}")
    for a in atoms(f):
        if a.rel is Rel.MEMBER and types[a.rhs] != types[a.lhs] + 1:
            return False
        if a.rel is Rel.EQUAL and types[a.rhs] != types[a.lhs]:
            return False
    return True


def check_certificate(f: Formula, c: UnsatCertificate) -> bool:
    """Replay ``c`` against the atoms of ``f``.

    True iff the steps form a closed walk whose recomputed weight is nonzero
    and equals ``c.net_weight``.  Raises :class:`CertificateError` for an
    occurrence id that ``f`` does not have.
    """
    occ = atoms(f)
    if not c.closed_walk:
        return False
    here = None
    start = None
    weight = 0
    for i, d in c.closed_walk:
        if not 0 <= i < len(occ):
            raise CertificateError(f"dangling occurrence id {i}")
        if d not in (FORWARD, BACKWARD):
            return False
        a = occ[i]
        src, dst = (a.lhs, a.rhs) if d == FORWARD else (a.rhs, a.lhs)
        if here is None:
            start = src
        elif here != src:
            return False
        here = dst
        weight += step_weight(a.rel, d)
    return here == start and weight != 0 and weight == c.net_weight


def canonicalize(t: TypeAssignment, g: VarGraph) -> TypeAssignment:
    """Shift each component so its least type is 0."""
    out = {}
    for comp in components(g):
        low = min(t.types.get(v, 0) for v in comp)
        for v in comp:
            out[v] = t.types.get(v, 0) - low
    for v in t.types:
        out.setdefault(v, 0)
    return TypeAssignment(out)


def verdict_json(result: Union[TypeAssignment, UnsatCertificate]) -> dict:
    if isinstance(result, TypeAssignment):
        return {"stratified": True, "types": result.to_json(), "certificate": None}
    return {"stratified": False, "types": None, "certificate": result.to_json()}
