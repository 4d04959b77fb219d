"""Variable multigraph of a formula and the two acyclicity deciders.

The graph has one vertex per variable and one undirected edge per atomic
subformula occurrence (atoms under negation included, duplicates never
merged).  :func:`find_cycle` decides acyclicity on the graph;
:func:`is_acyclic_chain` decides it by searching for chains, i.e. closed
walks whose consecutive steps use different atom occurrences.  The two are
independent implementations of the same notion and are cross-checked by the
test suite.
"""
from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .syntax import Formula, Rel, atoms, variables

__all__ = [
    "Orient", "Edge", "VarGraph", "CycleWitness", "build_graph", "find_cycle",
    "verify_witness", "is_acyclic", "is_acyclic_chain", "components", "to_dot",
    "verdict_json", "graph_json",
]


class Orient(enum.Enum):
    U_IN_V = "u_in_v"
    V_IN_U = "v_in_u"
    NONE = "none"


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    kind: Rel
    orient: Orient
    occurrence_id: int

    def other(self, x: str) -> str:
        return self.v if x == self.u else self.u

    @property
    def element(self) -> str:
        return self.v if self.orient is Orient.V_IN_U else self.u

    @property
    def container(self) -> str:
        return self.u if self.orient is Orient.V_IN_U else self.v


@dataclass(frozen=True)
class VarGraph:
    vertices: frozenset
    edges: tuple

    def incident(self) -> dict:
        """vertex -> incident edges in occurrence order (self-loops listed once)."""
        adj = {v: [] for v in sorted(self.vertices)}
        for e in self.edges:
            adj[e.u].append(e)
            if e.v != e.u:
                adj[e.v].append(e)
        return adj


@dataclass(frozen=True)
class CycleWitness:
    edge_ids: tuple
    vertex_sequence: tuple

    def to_json(self) -> dict:
        return {"edges": list(self.edge_ids), "vertices": list(self.vertex_sequence)}


def build_graph(f: Formula) -> VarGraph:
    """Graph of a desugared, rectified formula."""
    edges = []
    for i, a in enumerate(atoms(f)):
        orient = Orient.U_IN_V if a.rel is Rel.MEMBER else Orient.NONE
        edges.append(Edge(a.lhs, a.rhs, a.rel, orient, i))
    return VarGraph(frozenset(variables(f)), tuple(edges))


def _tree_path(adj: dict, src: str, dst: str) -> list:
    """Edges of the path src -> dst in a forest, by iterative search."""
    parent = {src: None}
    stack = [src]
    while stack:
        x = stack.pop()
        if x == dst:
            break
        for e in adj[x]:
            y = e.other(x)
            if y not in parent:
                parent[y] = (x, e)
                stack.append(y)
    path = []
    x = dst
    while parent[x] is not None:
        x, e = parent[x]
        path.append(e)
    path.reverse()
    return path


def find_cycle(g: VarGraph) -> Optional[CycleWitness]:
    """Return a cycle of ``g`` or ``None`` if ``g`` is a forest.

    Edges are added in occurrence order to a growing spanning forest; the
    first edge joining two already-connected vertices closes a cycle with the
    forest path between its endpoints.  Self-loops give length-1 witnesses
    and parallel edges length-2 witnesses.
    """
    root = {v: v for v in g.vertices}

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    forest = {v: [] for v in g.vertices}
    for e in g.edges:
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            root[ru] = rv
            forest[e.u].append(e)
            forest[e.v].append(e)
            continue
        path = _tree_path(forest, e.u, e.v)
        seq = [e.u]
        for p in path:
            seq.append(p.other(seq[-1]))
        seq.append(e.u)
        return CycleWitness(tuple(p.occurrence_id for p in path) + (e.occurrence_id,), tuple(seq))
    return None


def is_acyclic(f: Formula) -> bool:
    return find_cycle(build_graph(f)) is None


def verify_witness(g: VarGraph, w: CycleWitness) -> bool:
    """Independent check that ``w`` is a closed non-backtracking walk in ``g``."""
    by_id = {e.occurrence_id: e for e in g.edges}
    ids, seq = w.edge_ids, w.vertex_sequence
    if not ids or len(seq) != len(ids) + 1 or seq[0] != seq[-1]:
        return False
    for k, i in enumerate(ids):
        e = by_id.get(i)
        if e is None or {seq[k], seq[k + 1]} != {e.u, e.v}:
            return False
    if len(ids) > 1:
        if any(ids[k] == ids[(k + 1) % len(ids)] for k in range(len(ids))):
            return False
    return True


def is_acyclic_chain(f: Formula) -> bool:
    """Acyclicity by the chain definition.

    A chain is a walk in which each step follows an atom connecting the two
    variables and no two consecutive steps use the same atom occurrence.
    ``f`` is acyclic iff no chain leads from a variable back to itself.
    The search runs over states (variable, last occurrence used), expanding
    walks up to length 2*|atoms| + 1; beyond that some state must repeat.
    """
    occ = atoms(f)
    links = {}
    for i, a in enumerate(occ):
        links.setdefault(a.lhs, []).append((i, a.rhs))
        if a.rhs != a.lhs:
            links.setdefault(a.rhs, []).append((i, a.lhs))
    limit = 2 * len(occ) + 1
    for start in sorted(links):
        frontier = {(start, None)}
        seen = set(frontier)
        for _ in range(limit):
            nxt = set()
            for x, last in frontier:
                for i, y in links[x]:
                    if i == last:
                        continue
                    if y == start:
                        return False
                    if (y, i) not in seen:
                        seen.add((y, i))
                        nxt.add((y, i))
            if not nxt:
                break
            frontier = nxt
    return True


def components(g: VarGraph) -> list:
    """Connected components as sorted lists, ordered by least vertex name."""
    adj = g.incident()
    seen = set()
    out = []
    for v in sorted(g.vertices):
        if v in seen:
            continue
        comp = []
        queue = deque([v])
        seen.add(v)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for e in adj[x]:
                y = e.other(x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        out.append(sorted(comp))
    return out


_PLAIN_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[0-9]+")


def _dot_id(name: str) -> str:
    if _PLAIN_ID.fullmatch(name):
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: VarGraph, labels: Optional[dict] = None, name: str = "G") -> str:
    """DOT text for ``g``.

    Membership edges point from element to container; equality edges are
    drawn without arrowheads.  ``labels`` optionally annotates vertices
    (e.g. with types).
    """
    if not g.vertices:
        return f"digraph {name} {{}}\n"
    lines = [f"digraph {name} {{"]
    for v in sorted(g.vertices):
        if labels is not None and v in labels:
            lines.append(f'  {_dot_id(v)} [label="{v}: {labels[v]}"];')
        else:
            lines.append(f"  {_dot_id(v)};")
    for e in g.edges:
        if e.kind is Rel.MEMBER:
            lines.append(f'  {_dot_id(e.element)} -> {_dot_id(e.container)} [label="{e.occurrence_id}"];')
        else:
            lines.append(f'  {_dot_id(e.u)} -> {_dot_id(e.v)} [dir=none, style=dashed, label="{e.occurrence_id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def verdict_json(g: VarGraph) -> dict:
    w = find_cycle(g)
    return {"acyclic": w is None, "cycle": None if w is None else w.to_json()}


def graph_json(g: VarGraph) -> dict:
    return {
        "vertices": sorted(g.vertices),
        "edges": [
            {"id": e.occurrence_id, "u": e.u, "v": e.v, "kind": e.kind.name.lower(), "orient": e.orient.value}
            for e in g.edges
        ],
        "components": components(g),
    }
