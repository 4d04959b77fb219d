"""Typing an acyclic formula along unique paths.

In an acyclic formula every component of the variable graph is a tree.
Pick a root per component, give it type 0, and type every other variable by
walking the unique path from the root to it: a membership step from element
to container adds one, the reverse step subtracts one, equality adds nothing.
Uniqueness of the path is what makes the result well defined.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .depgraph import CycleWitness, VarGraph, build_graph, components, find_cycle
from .stratify import TypeAssignment, canonicalize
from .syntax import Formula, Rel

__all__ = ["NotAcyclicError", "PathTypingTrace", "type_acyclic", "unique_paths",
           "count_simple_paths", "verify_uniqueness"]


class NotAcyclicError(ValueError):
    def __init__(self, witness: CycleWitness):
        super().__init__(f"formula is not acyclic: cycle through {' '.join(witness.vertex_sequence)}")
        self.witness = witness


@dataclass(frozen=True)
class PathTypingTrace:
    roots: dict          # component index -> root variable
    paths: dict          # variable -> occurrence ids from the variable to its root
    raw: dict            # types before the canonical shift (roots at 0)
    assignment: TypeAssignment = field(default=None)

    def to_json(self) -> dict:
        return {"roots": {str(k): v for k, v in sorted(self.roots.items())},
                "types": self.assignment.to_json()}


def _require_forest(g: VarGraph) -> None:
    w = find_cycle(g)
    if w is not None:
        raise NotAcyclicError(w)


def unique_paths(g: VarGraph, root: str) -> dict:
    """vertex -> edges of the path from ``root`` to it (forest assumed)."""
    adj = g.incident()
    paths = {root: []}
    stack = [root]
    while stack:
        x = stack.pop()
        for e in adj[x]:
            y = e.other(x)
            if y not in paths:
                paths[y] = paths[x] + [e]
                stack.append(y)
    return paths


def type_acyclic(f: Formula, choose_root: Optional[Callable] = None) -> PathTypingTrace:
    """Type an acyclic formula by unique-path propagation.

    ``choose_root`` maps a component (sorted list of variables) to its root;
    the default is the least name.  Raises :class:`NotAcyclicError` with a
    cycle witness when ``f`` is cyclic.
    """
    g = build_graph(f)
    _require_forest(g)
    pick = choose_root or (lambda comp: comp[0])
    roots, paths, raw = {}, {}, {}
    for k, comp in enumerate(components(g)):
        root = pick(comp)
        roots[k] = root
        for v, path in unique_paths(g, root).items():
            t = 0
            here = root
            for e in path:
                nxt = e.other(here)
                if e.kind is Rel.MEMBER:
                    t += 1 if nxt == e.container else -1
                here = nxt
            raw[v] = t
            paths[v] = [e.occurrence_id for e in reversed(path)]
    return PathTypingTrace(roots, paths, raw, canonicalize(TypeAssignment(dict(raw)), g))


def count_simple_paths(g: VarGraph, src: str, dst: str, limit: int = 2) -> int:
    """Number of simple paths src -> dst, parallel edges counted separately.

    Exhaustive depth-first enumeration with an explicit stack; stops once
    ``limit`` paths have been found.
    """
    adj = g.incident()
    found = 0
    stack = [(src, frozenset([src]), iter(adj[src]))]
    if src == dst:
        found = 1
    while stack and found < limit:
        x, visited, it = stack[-1]
        e = next(it, None)
        if e is None:
            stack.pop()
            continue
        y = e.other(x)
        if y in visited:
            continue
        if y == dst:
            found += 1
            continue
        stack.append((y, visited | {y}, iter(adj[y])))
    return found


def verify_uniqueness(g: VarGraph) -> bool:
    """True iff every vertex has exactly one simple path to its component root."""
    _require_forest(g)
    for comp in components(g):
        root = comp[0]
        if any(count_simple_paths(g, v, root) != 1 for v in comp):
            return False
    return True
